#include "cubicvm/config.hpp"

#include <fstream>
#include <sstream>

namespace cubicvm {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw DomainError("config: bad number for " + key + ": " + v);
    }
    if (pos != v.size()) throw DomainError("config: bad number for " + key + ": " + v);
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    double x = to_double(key, v);
    if (x != double(long(x))) throw DomainError("config: " + key + " must be an integer");
    return int(x);
}

} // namespace

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "tau") c.tau = to_double(key, value);
    else if (key == "m") c.m = to_int(key, value);
    else if (key == "n") c.n = to_int(key, value);
    else if (key == "nodes") c.nodes = to_int(key, value);
    else if (key == "step") c.step = to_double(key, value);
    else if (key == "snap_radius") c.snap_radius = to_double(key, value);
    else if (key == "r_max") c.r_max = to_double(key, value);
    else if (key == "tol") c.tol = to_double(key, value);
    else if (key == "threads") c.threads = to_int(key, value);
    else if (key == "out") c.out = value;
    else if (key == "format") {
        if (value != "csv" && value != "json" && value != "svg")
            throw DomainError("config: format must be csv, json or svg");
        c.format = value;
    } else if (key == "seeds") {
        c.seeds.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            parse_seed(item);
            c.seeds.push_back(item);
        }
    } else
        throw DomainError("config: unknown key " + key);
    if (c.m < 2 || c.n < 1 || c.nodes < 8) throw DomainError("config: sizes too small");
    if (!(c.step > 0.0) || !(c.tol > 0.0)) throw DomainError("config: step and tol must be positive");
}

RunConfig parse_config(const std::string& text, RunConfig base) {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: line " + std::to_string(lineno) + " has no '='");
        set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base);
}

TraceConfig trace_config(const RunConfig& c) {
    TraceConfig t;
    t.step_rel = c.step;
    t.snap_radius = c.snap_radius;
    t.r_max = c.r_max;
    return t;
}

SeedSpec parse_seed(const std::string& s) {
    std::stringstream ss(s);
    std::string a, b, d;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, d))
        throw DomainError("seed must look like point:sheet:index, got " + s);
    SeedSpec r;
    if (a == "a1") r.point = PointKind::A1;
    else if (a == "b1") r.point = PointKind::B1;
    else if (a == "a2") r.point = PointKind::A2;
    else if (a == "b2") r.point = PointKind::B2;
    else if (a == "bstar" || a == "b*") r.point = PointKind::BStar;
    else throw DomainError("seed: unknown point " + a);
    r.sheet = to_int("seed sheet", b);
    r.index = to_int("seed index", d);
    if (r.sheet < 1 || r.sheet > 3 || r.index < 1) throw DomainError("seed: sheet 1..3, index >= 1");
    return r;
}

} // namespace cubicvm
