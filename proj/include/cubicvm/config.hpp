#pragma once

#include <string>
#include <vector>

#include "cubicvm/tracer.hpp"

namespace cubicvm {

struct RunConfig {
    double tau = 0.2;
    int m = 10000;        // quadrature nodes per segment
    int n = 1000;         // tau grid size
    int nodes = 2000;     // density nodes per support arc
    double step = 1e-3;   // tracer step, relative to max(1, |z|)
    double snap_radius = 5e-3;
    double r_max = 10.0;
    double tol = 1e-4;
    int threads = 0;      // 0: CUBICVM_THREADS or hardware
    std::string out;
    std::string format = "json";
    std::vector<std::string> seeds;  // point:sheet:index, e.g. a2:2:1
};

// flat key = value lines, '#' starts a comment; unknown keys are an error
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
void set_config_value(RunConfig& c, const std::string& key, const std::string& value);

TraceConfig trace_config(const RunConfig& c);

struct SeedSpec {
    PointKind point = PointKind::A2;
    int sheet = 2;
    int index = 1;
};
SeedSpec parse_seed(const std::string& s);

} // namespace cubicvm
