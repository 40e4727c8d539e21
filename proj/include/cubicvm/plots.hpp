#pragma once

#include <string>
#include <vector>

#include "cubicvm/measures.hpp"
#include "cubicvm/tracer.hpp"
#include "cubicvm/widths.hpp"

namespace cubicvm {

inline constexpr const char* kSchemaVersion = "cubicvm-output 1";

struct SvgStyle {
    double panel = 360.0;   // px per panel side
    double view = 0.0;      // half width in z; 0 picks from the branch points
    const char* cut_color = "#000000";
    const char* traj_color = "#1f4fd1";
    double cut_width = 2.0;
    double traj_width = 1.0;
    double marker = 5.0;
};

// one panel per sheet; cuts black, trajectories blue, squares for simple zeros and dots for
// double zeros. The second line is a version comment, the only line that depends on the build
std::string svg_graph(const CriticalGraph& g, const CutSystem& cuts, const SvgStyle& style = {});

std::string csv_trajectory(const Trajectory& t);
std::string csv_widths(const std::vector<WidthReport>& rows);
std::string csv_density(const MeasureComponent& m);

std::string fmt_num(double x);

} // namespace cubicvm
