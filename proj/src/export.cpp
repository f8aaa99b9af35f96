#include "workdyn/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "workdyn/numfmt.hpp"

namespace workdyn {

void PlotSpec::validate() const {
    switch (kind) {
        case PlotKind::TimeseriesOverlay:
            if (components.empty())
                throw InvalidConfig("components", "overlay needs at least 1 component");
            break;
        case PlotKind::PhasePortrait2D:
            if (components.size() != 2)
                throw InvalidConfig("components", "2d portrait needs exactly 2 components");
            break;
        case PlotKind::PhasePortrait3DProjection:
            if (components.size() != 3)
                throw InvalidConfig("components", "3d projection needs exactly 3 components");
            if (projection[0] == projection[1])
                throw InvalidConfig("projection", "projection pair must differ");
            break;
    }
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,u,v,w\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out += format_double(traj.times[i]);
        out += ',';
        out += format_double(traj.states[i].u);
        out += ',';
        out += format_double(traj.states[i].v);
        out += ',';
        out += format_double(traj.states[i].w);
        out += '\n';
    }
    return out;
}

Trajectory trajectory_from_csv(std::string_view text) {
    Trajectory traj;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos) ? text.substr(pos)
                                                                : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "t,u,v,w") throw SchemaError("expected header 't,u,v,w'", 1);
            continue;
        }
        double cells[4];
        std::size_t field = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (field >= 4) throw SchemaError("too many columns", line_no);
                const auto value = parse_double(line.substr(start, i - start));
                if (!value) throw ParseError("bad number", line_no, field + 1);
                cells[field++] = *value;
                start = i + 1;
            }
        }
        if (field != 4) throw SchemaError("expected 4 columns", line_no);
        traj.times.push_back(cells[0]);
        traj.states.push_back({cells[1], cells[2], cells[3]});
    }
    if (traj.times.empty()) throw EmptyTrajectory("no samples in CSV");
    return traj;
}

std::string matrix_csv(const DissimilarityMatrix& m) {
    std::string out = "n,r,normalized\n";
    out += format_int(static_cast<long long>(m.n));
    out += ',';
    out += format_double(m.r);
    out += ',';
    out += m.normalized ? "1" : "0";
    out += "\ni,j,value\n";
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) {
            out += format_int(static_cast<long long>(i));
            out += ',';
            out += format_int(static_cast<long long>(j));
            out += ',';
            out += format_double(m.at(i, j));
            out += '\n';
        }
    }
    return out;
}

std::string series_csv(const DissimilaritySeries& series) {
    const char* name = series.component == SeriesComponent::Balance    ? "balance"
                       : series.component == SeriesComponent::Workers ? "workers"
                                                                       : "employers";
    std::string out = "index,";
    out += name;
    out += "\n";
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        out += format_int(static_cast<long long>(i));
        out += ',';
        out += format_double(series.values[i]);
        out += '\n';
    }
    return out;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 60.0;

double pick(const StateVector& s, Component c) {
    return c == Component::U ? s.u : c == Component::V ? s.v : s.w;
}

const char* component_name(Component c) {
    return c == Component::U ? "u" : c == Component::V ? "v" : "w";
}

const char* component_color(Component c) {
    // worker series black, employer series grey, balance series blue
    return c == Component::U ? "#3465a4" : c == Component::V ? "#000000" : "#888888";
}

struct Range {
    double lo{0.0};
    double hi{1.0};

    // min-max with 5% margins; degenerate spans pad by 1 so a constant
    // series lands mid-plot
    static Range of(std::span<const double> values) {
        const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
        double lo = *lo_it, hi = *hi_it;
        const double span = hi - lo;
        const double pad = span > 0.0 ? 0.05 * span : 1.0;
        return {lo - pad, hi + pad};
    }
    double span() const { return hi - lo; }
};

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void append_text(std::string& svg, double x, double y, const std::string& text,
                 const char* anchor = "middle", int size = 14) {
    if (text.empty()) return;
    svg += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" font-size=\"" +
           std::to_string(size) +
           "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" + text + "</text>\n";
}

void append_frame(std::string& svg, const PlotSpec& spec, const Range& rx, const Range& ry) {
    svg += "<rect x=\"" + fmt2(kMargin) + "\" y=\"" + fmt2(kMargin) + "\" width=\"" +
           fmt2(kWidth - 2 * kMargin) + "\" height=\"" + fmt2(kHeight - 2 * kMargin) +
           "\" fill=\"none\" stroke=\"#333333\"/>\n";
    append_text(svg, kWidth / 2, kMargin - 20, spec.title, "middle", 16);
    append_text(svg, kWidth / 2, kHeight - 12, spec.x_label);
    append_text(svg, 16, kHeight / 2, spec.y_label, "middle", 14);
    // range annotations keep the plot self-describing
    append_text(svg, kMargin, kHeight - kMargin + 18, format_double(rx.lo), "start", 10);
    append_text(svg, kWidth - kMargin, kHeight - kMargin + 18, format_double(rx.hi), "end", 10);
    append_text(svg, kMargin - 6, kHeight - kMargin, format_double(ry.lo), "end", 10);
    append_text(svg, kMargin - 6, kMargin + 10, format_double(ry.hi), "end", 10);
}

std::string svg_header() {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           fmt2(kWidth) + "\" height=\"" + fmt2(kHeight) + "\" viewBox=\"0 0 " + fmt2(kWidth) +
           " " + fmt2(kHeight) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string render_svg(const Trajectory& traj, const PlotSpec& spec) {
    spec.validate();
    if (traj.size() == 0) throw EmptyTrajectory("cannot render an empty trajectory");

    const double plot_w = kWidth - 2 * kMargin;
    const double plot_h = kHeight - 2 * kMargin;
    std::string svg = svg_header();

    if (spec.kind == PlotKind::TimeseriesOverlay) {
        const Range rx = Range::of(traj.times);
        std::vector<double> all;
        for (Component c : spec.components)
            for (const auto& s : traj.states) all.push_back(pick(s, c));
        const Range ry = Range::of(all);
        append_frame(svg, spec, rx, ry);
        for (std::size_t ci = 0; ci < spec.components.size(); ++ci) {
            const Component c = spec.components[ci];
            svg += "<polyline fill=\"none\" stroke=\"";
            svg += component_color(c);
            svg += "\" stroke-width=\"1\" points=\"";
            for (std::size_t i = 0; i < traj.size(); ++i) {
                const double x = kMargin + (traj.times[i] - rx.lo) / rx.span() * plot_w;
                const double y = kMargin + (ry.hi - pick(traj.states[i], c)) / ry.span() * plot_h;
                svg += fmt2(x) + "," + fmt2(y) + " ";
            }
            svg += "\"/>\n";
            append_text(svg, kWidth - kMargin + 8, kMargin + 16.0 * static_cast<double>(ci + 1),
                        component_name(c), "start", 12);
        }
    } else if (spec.kind == PlotKind::PhasePortrait2D) {
        const Component cx = spec.components[0];
        const Component cy = spec.components[1];
        std::vector<double> xs, ys;
        for (const auto& s : traj.states) {
            xs.push_back(pick(s, cx));
            ys.push_back(pick(s, cy));
        }
        const Range rx = Range::of(xs);
        const Range ry = Range::of(ys);
        // equal-aspect: one scale for both axes, centered
        const double scale = std::min(plot_w / rx.span(), plot_h / ry.span());
        const double x_off = kMargin + (plot_w - scale * rx.span()) / 2.0;
        const double y_off = kMargin + (plot_h - scale * ry.span()) / 2.0;
        append_frame(svg, spec, rx, ry);
        svg += "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double x = x_off + (xs[i] - rx.lo) * scale;
            const double y = y_off + (ry.hi - ys[i]) * scale;
            svg += fmt2(x) + "," + fmt2(y) + " ";
        }
        svg += "\"/>\n";
    } else {
        const Component cx = spec.projection[0];
        const Component cy = spec.projection[1];
        Component cz = Component::U;
        for (Component c : spec.components)
            if (c != cx && c != cy) cz = c;
        std::vector<double> xs, ys, zs;
        for (const auto& s : traj.states) {
            xs.push_back(pick(s, cx));
            ys.push_back(pick(s, cy));
            zs.push_back(pick(s, cz));
        }
        const Range rx = Range::of(xs);
        const Range ry = Range::of(ys);
        const Range rz = Range::of(zs);
        append_frame(svg, spec, rx, ry);
        for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
            const double x1 = kMargin + (xs[i] - rx.lo) / rx.span() * plot_w;
            const double y1 = kMargin + (ry.hi - ys[i]) / ry.span() * plot_h;
            const double x2 = kMargin + (xs[i + 1] - rx.lo) / rx.span() * plot_w;
            const double y2 = kMargin + (ry.hi - ys[i + 1]) / ry.span() * plot_h;
            // depth (the out-of-plane component) drives opacity
            const double mid = 0.5 * (zs[i] + zs[i + 1]);
            const double opacity = 0.15 + 0.85 * (mid - rz.lo) / rz.span();
            svg += "<line x1=\"" + fmt2(x1) + "\" y1=\"" + fmt2(y1) + "\" x2=\"" + fmt2(x2) +
                   "\" y2=\"" + fmt2(y2) + "\" stroke=\"#000000\" stroke-opacity=\"" +
                   fmt2(opacity) + "\"/>\n";
        }
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace workdyn
