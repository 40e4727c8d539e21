#include "cubicvm/plots.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace cubicvm {

std::string fmt_num(double x) {
    if (x == 0.0) return "0";
    return fmt::format("{:.12g}", x);
}

namespace {

struct Frame {
    double ox, view, size;
    double px(cplx z) const { return ox + (z.real() + view) / (2.0 * view) * size; }
    double py(cplx z) const { return (view - z.imag()) / (2.0 * view) * size; }
    bool inside(cplx z) const { return std::abs(z.real()) <= view * 1.2 && std::abs(z.imag()) <= view * 1.2; }
};

void polyline(std::string& out, const Frame& f, const std::vector<cplx>& pts, const char* color,
              double width, const std::string& attrs) {
    if (pts.size() < 2) return;
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"{} points=\"", color,
                       width, attrs);
    for (std::size_t k = 0; k < pts.size(); ++k)
        out += fmt::format("{}{:.2f},{:.2f}", k ? " " : "", f.px(pts[k]), f.py(pts[k]));
    out += "\"/>\n";
}

std::string seed_label(const CriticalGraph& g, const Seed& s) {
    if (s.vertex < 0) return "free";
    return fmt::format("gamma{}({}^({}))", s.index, point_name(g.vertices[s.vertex].kind), s.sheet);
}

} // namespace

std::string svg_graph(const CriticalGraph& g, const CutSystem& cuts, const SvgStyle& style) {
    double view = style.view;
    if (view <= 0.0) view = std::clamp(1.25 * cuts.bp.max_abs(), 2.5, 8.0);
    const double P = style.panel;
    std::string out;
    out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n",
                       3 * P, P + 20);
    out += fmt::format("<!-- {} -->\n", kSchemaVersion);
    for (int sheet = 1; sheet <= 3; ++sheet) {
        Frame f{(sheet - 1) * P, view, P};
        out += fmt::format("<g class=\"panel\" data-sheet=\"{}\">\n", sheet);
        out += fmt::format("<rect x=\"{}\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\" "
                           "stroke=\"#888888\"/>\n", f.ox, P, P);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">sheet {}  tau={}</text>\n",
                           f.ox + 6, P + 14, sheet, fmt_num(g.tau));
        // axes
        polyline(out, f, {cplx(-view, 0.0), cplx(view, 0.0)}, "#cccccc", 0.5, "");
        polyline(out, f, {cplx(0.0, -view), cplx(0.0, view)}, "#cccccc", 0.5, "");
        // cuts
        if (cuts.borders(sheet, CutId::D1) && !cuts.delta1.empty())
            polyline(out, f, {cplx(cuts.delta1.lo, 0.0), cplx(cuts.delta1.hi, 0.0)}, style.cut_color,
                     style.cut_width, " class=\"cut\" data-cut=\"D1\"");
        if (cuts.borders(sheet, CutId::D3) && !cuts.delta3.empty())
            polyline(out, f, {cplx(std::max(cuts.delta3.lo, -1.5 * view), 0.0), cplx(cuts.delta3.hi, 0.0)},
                     style.cut_color, style.cut_width, " class=\"cut\" data-cut=\"D3\"");
        if (cuts.borders(sheet, CutId::D2))
            polyline(out, f, cuts.delta2, style.cut_color, style.cut_width, " class=\"cut\" data-cut=\"D2\"");
        // trajectories, split where they leave this sheet or the frame
        for (const auto& e : g.edges) {
            const Trajectory& t = e.traj;
            std::string attrs = fmt::format(" class=\"edge\" data-seed=\"{}\" data-end=\"{}\"",
                                            seed_label(g, t.seed), termination_name(t.termination));
            if (t.termination == Termination::HitCriticalPoint)
                attrs += fmt::format(" data-end-point=\"{}\"", point_name(t.end_point));
            std::vector<cplx> run;
            auto flush = [&] {
                polyline(out, f, run, style.traj_color, style.traj_width, attrs);
                run.clear();
            };
            for (const auto& p : t.points) {
                if (p.sheet == sheet && f.inside(p.z)) run.push_back(p.z);
                else flush();
            }
            flush();
        }
        // zeros of the quadratic differential
        for (const auto& v : g.vertices) {
            if (!v.has_sheet(sheet) || v.order < 1) continue;
            double x = f.px(v.z), y = f.py(v.z), r = style.marker;
            if (v.order == 1)
                out += fmt::format("<rect class=\"zero simple\" data-point=\"{}\" x=\"{:.2f}\" y=\"{:.2f}\" "
                                   "width=\"{}\" height=\"{}\" fill=\"#000000\"/>\n",
                                   v.label(), x - r, y - r, 2 * r, 2 * r);
            else
                out += fmt::format("<circle class=\"zero double\" data-point=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" "
                                   "r=\"{}\" fill=\"#000000\"/>\n", v.label(), x, y, r);
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string csv_trajectory(const Trajectory& t) {
    std::string out = fmt::format("# {} trajectory\nt,re_z,im_z,sheet\n", kSchemaVersion);
    for (std::size_t k = 0; k < t.points.size(); ++k)
        out += fmt::format("{},{},{},{}\n", fmt_num(k < t.t.size() ? t.t[k] : 0.0),
                           fmt_num(t.points[k].z.real()), fmt_num(t.points[k].z.imag()), t.points[k].sheet);
    return out;
}

std::string csv_widths(const std::vector<WidthReport>& rows) {
    std::string out = fmt::format("# {} widths\ntau,omega1,omega2,omega3,omega4\n", kSchemaVersion);
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{}\n", fmt_num(r.tau), fmt_num(r.omega[0]), fmt_num(r.omega[1]),
                           fmt_num(r.omega[2]), r.has_omega4 ? fmt_num(r.omega[3]) : "");
    return out;
}

std::string csv_density(const MeasureComponent& m) {
    std::string out = fmt::format("# {} density mu{}\nre_s,im_s,density\n", kSchemaVersion, m.index);
    for (const auto& a : m.arcs)
        for (std::size_t k = 0; k < a.z.size(); ++k) {
            if (!std::isfinite(a.rho[k])) continue;
            out += fmt::format("{},{},{}\n", fmt_num(a.z[k].real()), fmt_num(a.z[k].imag()), fmt_num(a.rho[k]));
        }
    return out;
}

} // namespace cubicvm
