#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "workdyn/analysis.hpp"
#include "workdyn/dissimilarity.hpp"
#include "workdyn/equilibrium.hpp"
#include "workdyn/export.hpp"
#include "workdyn/ingest.hpp"
#include "workdyn/numfmt.hpp"

namespace fs = std::filesystem;

namespace workdyn::cli {

namespace {

// ---------------------------------------------------------------- helpers

FunctionalResponseKind parse_response(const std::string& name) {
    if (name == "lv") return FunctionalResponseKind::LotkaVolterra;
    if (name == "holling") return FunctionalResponseKind::HollingII;
    throw InvalidConfig("response", "must be 'lv' or 'holling', got '" + name + "'");
}

std::string response_name(FunctionalResponseKind kind) {
    return kind == FunctionalResponseKind::LotkaVolterra ? "lv" : "holling";
}

NumberLocale parse_locale(const std::string& name) {
    if (name == "brazilian") return NumberLocale::Brazilian;
    if (name == "plain") return NumberLocale::Plain;
    throw InvalidConfig("locale", "must be 'brazilian' or 'plain', got '" + name + "'");
}

bool parse_bool(const std::string& field, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw InvalidConfig(field, "must be a boolean, got '" + value + "'");
}

double parse_double_field(const std::string& field, const std::string& value) {
    if (auto v = parse_double(value)) return *v;
    throw InvalidConfig(field, "must be a number, got '" + value + "'");
}

long long parse_int_field(const std::string& field, const std::string& value) {
    if (auto v = parse_int(value)) return *v;
    throw InvalidConfig(field, "must be an integer, got '" + value + "'");
}

std::vector<double> parse_double_list(const std::string& field, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_double_field(field, item));
    }
    if (out.empty()) throw InvalidConfig(field, "must be a non-empty list");
    return out;
}

std::string format_double_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

Component parse_component(char c) {
    switch (c) {
        case 'u': return Component::U;
        case 'v': return Component::V;
        case 'w': return Component::W;
        default: throw InvalidConfig("components", std::string("unknown component '") + c + "'");
    }
}

std::vector<Component> parse_components(const std::string& s) {
    std::vector<Component> out;
    for (char c : s) out.push_back(parse_component(c));
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// --------------------------------------------------------- config echoing

using Getter = std::function<std::string(const RunConfig&)>;

const std::vector<std::pair<std::string, Getter>>& key_table() {
    auto fd = [](auto member) {
        return [member](const RunConfig& rc) { return format_double(rc.params.*member); };
    };
    static const std::vector<std::pair<std::string, Getter>> table = {
        {"a", fd(&ModelParams::a)},
        {"b", fd(&ModelParams::b)},
        {"c", fd(&ModelParams::c)},
        {"alpha1", fd(&ModelParams::alpha1)},
        {"alpha2", fd(&ModelParams::alpha2)},
        {"k1", fd(&ModelParams::k1)},
        {"k2", fd(&ModelParams::k2)},
        {"w_dag", fd(&ModelParams::w_dag)},
        {"u0", fd(&ModelParams::u0)},
        {"v0", fd(&ModelParams::v0)},
        {"w0", fd(&ModelParams::w0)},
        {"response1", [](const RunConfig& rc) { return response_name(rc.params.response1); }},
        {"response2", [](const RunConfig& rc) { return response_name(rc.params.response2); }},
        {"t0", [](const RunConfig& rc) { return format_double(rc.integ.t0); }},
        {"t_end", [](const RunConfig& rc) { return format_double(rc.integ.t_end); }},
        {"dt", [](const RunConfig& rc) { return format_double(rc.integ.dt); }},
        {"adaptive", [](const RunConfig& rc) { return rc.integ.adaptive ? "true" : "false"; }},
        {"tol", [](const RunConfig& rc) { return format_double(rc.integ.tol); }},
        {"record_every",
         [](const RunConfig& rc) { return format_int(rc.integ.record_every); }},
        {"u_init", [](const RunConfig& rc) { return format_double(rc.u_init); }},
        {"v_init", [](const RunConfig& rc) { return format_double(rc.v_init); }},
        {"w_init", [](const RunConfig& rc) { return format_double(rc.w_init); }},
        {"smoothing_window",
         [](const RunConfig& rc) { return format_int(rc.smoothing_window); }},
        {"prominence",
         [](const RunConfig& rc) {
             return rc.prominence < 0 ? "auto" : format_double(rc.prominence);
         }},
        {"max_lag", [](const RunConfig& rc) { return format_int(rc.max_lag); }},
        {"split_fraction",
         [](const RunConfig& rc) { return format_double(rc.split_fraction); }},
        {"svg", [](const RunConfig& rc) { return rc.svg; }},
        {"components", [](const RunConfig& rc) { return rc.components; }},
        {"projection", [](const RunConfig& rc) { return rc.projection; }},
        {"title", [](const RunConfig& rc) { return rc.title; }},
        {"x_label", [](const RunConfig& rc) { return rc.x_label; }},
        {"y_label", [](const RunConfig& rc) { return rc.y_label; }},
        {"scales_mode", [](const RunConfig& rc) { return rc.scales_mode; }},
        {"scales_from", [](const RunConfig& rc) { return rc.scales_from; }},
        {"scales_lag", [](const RunConfig& rc) { return format_int(rc.scales_lag); }},
        {"scales_r", [](const RunConfig& rc) { return format_double(rc.scales_r); }},
        {"alpha2_values",
         [](const RunConfig& rc) { return format_double_list(rc.alpha2_values); }},
        {"max_iter", [](const RunConfig& rc) { return format_int(rc.max_iter); }},
        {"fp_tol", [](const RunConfig& rc) { return format_double(rc.fp_tol); }},
        {"input", [](const RunConfig& rc) { return rc.input; }},
        {"bundled", [](const RunConfig& rc) { return rc.bundled ? "true" : "false"; }},
        {"locale", [](const RunConfig& rc) { return rc.locale; }},
        {"allow_gaps", [](const RunConfig& rc) { return rc.allow_gaps ? "true" : "false"; }},
        {"r", [](const RunConfig& rc) { return format_double(rc.r); }},
        {"normalize", [](const RunConfig& rc) { return rc.normalize ? "true" : "false"; }},
        {"lag", [](const RunConfig& rc) { return format_int(rc.lag); }},
        {"matrix", [](const RunConfig& rc) { return rc.matrix ? "true" : "false"; }},
        {"series", [](const RunConfig& rc) { return rc.series; }},
        {"col_a", [](const RunConfig& rc) { return rc.col_a; }},
        {"col_b", [](const RunConfig& rc) { return rc.col_b; }},
        {"out", [](const RunConfig& rc) { return rc.out; }},
    };
    return table;
}

const std::vector<std::string> kModelKeys = {"a",  "b",  "c",  "alpha1", "alpha2", "k1", "k2",
                                             "w_dag", "u0", "v0", "w0", "response1", "response2"};
const std::vector<std::string> kIntegKeys = {"t0", "t_end", "dt", "adaptive", "tol",
                                             "record_every"};
const std::vector<std::string> kInitKeys = {"u_init", "v_init", "w_init"};
const std::vector<std::string> kAnalysisKeys = {"smoothing_window", "prominence", "max_lag",
                                                "split_fraction"};

std::vector<std::string> keys_for(const std::string& command) {
    std::vector<std::string> keys;
    auto add = [&](const std::vector<std::string>& group) {
        keys.insert(keys.end(), group.begin(), group.end());
    };
    if (command == "simulate" || command == "sweep") {
        add(kModelKeys);
        add(kIntegKeys);
        add(kInitKeys);
        add(kAnalysisKeys);
        keys.insert(keys.end(), {"svg", "components", "projection", "title", "x_label",
                                 "y_label", "scales_mode", "scales_from", "scales_lag",
                                 "scales_r"});
        if (command == "sweep") keys.push_back("alpha2_values");
    } else if (command == "equilibrium") {
        add(kModelKeys);
        add(kInitKeys);
        keys.insert(keys.end(), {"max_iter", "fp_tol"});
    } else if (command == "dissim") {
        keys.insert(keys.end(), {"input", "bundled", "locale", "allow_gaps", "r", "normalize",
                                 "lag", "matrix", "series"});
    } else if (command == "ingest-validate") {
        keys.insert(keys.end(), {"input", "bundled", "locale", "allow_gaps"});
    } else if (command == "analyze") {
        keys.insert(keys.end(), {"input", "col_a", "col_b"});
        add(kAnalysisKeys);
    } else if (command == "render") {
        keys.insert(keys.end(), {"input", "svg", "components", "projection", "title", "x_label",
                                 "y_label"});
    }
    keys.push_back("out");
    return keys;
}

}  // namespace

void apply_kv(RunConfig& rc, const std::string& key, const std::string& value) {
    auto& p = rc.params;
    if (key == "command") return;  // validated by the caller
    if (key == "a") p.a = parse_double_field(key, value);
    else if (key == "b") p.b = parse_double_field(key, value);
    else if (key == "c") p.c = parse_double_field(key, value);
    else if (key == "alpha1") p.alpha1 = parse_double_field(key, value);
    else if (key == "alpha2") p.alpha2 = parse_double_field(key, value);
    else if (key == "k1") p.k1 = parse_double_field(key, value);
    else if (key == "k2") p.k2 = parse_double_field(key, value);
    else if (key == "w_dag") p.w_dag = parse_double_field(key, value);
    else if (key == "u0") p.u0 = parse_double_field(key, value);
    else if (key == "v0") p.v0 = parse_double_field(key, value);
    else if (key == "w0") p.w0 = parse_double_field(key, value);
    else if (key == "response1") p.response1 = parse_response(value);
    else if (key == "response2") p.response2 = parse_response(value);
    else if (key == "t0") rc.integ.t0 = parse_double_field(key, value);
    else if (key == "t_end") rc.integ.t_end = parse_double_field(key, value);
    else if (key == "dt") rc.integ.dt = parse_double_field(key, value);
    else if (key == "adaptive") rc.integ.adaptive = parse_bool(key, value);
    else if (key == "tol") rc.integ.tol = parse_double_field(key, value);
    else if (key == "record_every")
        rc.integ.record_every = static_cast<int>(parse_int_field(key, value));
    else if (key == "u_init") rc.u_init = parse_double_field(key, value);
    else if (key == "v_init") rc.v_init = parse_double_field(key, value);
    else if (key == "w_init") rc.w_init = parse_double_field(key, value);
    else if (key == "smoothing_window")
        rc.smoothing_window = static_cast<int>(parse_int_field(key, value));
    else if (key == "prominence")
        rc.prominence = value == "auto" ? -1.0 : parse_double_field(key, value);
    else if (key == "max_lag") rc.max_lag = static_cast<int>(parse_int_field(key, value));
    else if (key == "split_fraction") rc.split_fraction = parse_double_field(key, value);
    else if (key == "svg") rc.svg = value;
    else if (key == "components") rc.components = value;
    else if (key == "projection") rc.projection = value;
    else if (key == "title") rc.title = value;
    else if (key == "x_label") rc.x_label = value;
    else if (key == "y_label") rc.y_label = value;
    else if (key == "scales_mode") rc.scales_mode = value;
    else if (key == "scales_from") rc.scales_from = value;
    else if (key == "scales_lag") rc.scales_lag = static_cast<int>(parse_int_field(key, value));
    else if (key == "scales_r") rc.scales_r = parse_double_field(key, value);
    else if (key == "alpha2_values") rc.alpha2_values = parse_double_list(key, value);
    else if (key == "max_iter") rc.max_iter = static_cast<int>(parse_int_field(key, value));
    else if (key == "fp_tol") rc.fp_tol = parse_double_field(key, value);
    else if (key == "input") rc.input = value;
    else if (key == "bundled") rc.bundled = parse_bool(key, value);
    else if (key == "locale") rc.locale = value;
    else if (key == "allow_gaps") rc.allow_gaps = parse_bool(key, value);
    else if (key == "r") rc.r = parse_double_field(key, value);
    else if (key == "normalize") rc.normalize = parse_bool(key, value);
    else if (key == "lag") rc.lag = static_cast<int>(parse_int_field(key, value));
    else if (key == "matrix") rc.matrix = parse_bool(key, value);
    else if (key == "series") rc.series = value;
    else if (key == "col_a") rc.col_a = value;
    else if (key == "col_b") rc.col_b = value;
    else if (key == "out") rc.out = value;
    else throw InvalidConfig(key, "unknown config key");
}

void load_config_file(RunConfig& rc, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trimmed = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no, 1);
        apply_kv(rc, trimmed(line.substr(0, eq)), trimmed(line.substr(eq + 1)));
    }
}

std::string echo_config(const RunConfig& rc, const std::string& command) {
    std::map<std::string, Getter> by_key;
    for (const auto& [key, getter] : key_table()) by_key[key] = getter;
    std::string out =
        "# fully resolved run configuration; re-run with --config <this file>\n"
        "# default parameter values are conventional oscillatory-regime choices,\n"
        "# not estimates from any dataset\n";
    out += "command = " + command + "\n";
    for (const auto& key : keys_for(command)) out += key + " = " + by_key.at(key)(rc) + "\n";
    return out;
}

namespace {

// ------------------------------------------------------------ subcommands

Dataset load_input_dataset(const RunConfig& rc) {
    ParseOptions opts;
    opts.locale = parse_locale(rc.locale);
    opts.allow_gaps = rc.allow_gaps;
    if (rc.bundled) {
        Dataset d = parse_dataset(caged_sample_text(), opts);
        d.source = "bundled caged 1996 sample";
        return d;
    }
    if (rc.input.empty()) throw InvalidConfig("input", "no input file (or use --bundled)");
    return load_dataset(rc.input, opts);
}

PlotKind parse_plot_kind(const std::string& name) {
    if (name == "timeseries") return PlotKind::TimeseriesOverlay;
    if (name == "phase2d") return PlotKind::PhasePortrait2D;
    if (name == "phase3d") return PlotKind::PhasePortrait3DProjection;
    throw InvalidConfig("svg", "must be timeseries|phase2d|phase3d, got '" + name + "'");
}

PlotSpec plot_spec_from(const RunConfig& rc) {
    PlotSpec spec;
    spec.kind = parse_plot_kind(rc.svg);
    spec.components = parse_components(rc.components);
    if (rc.projection.size() == 2)
        spec.projection = {parse_component(rc.projection[0]), parse_component(rc.projection[1])};
    else if (spec.kind == PlotKind::PhasePortrait3DProjection)
        throw InvalidConfig("projection", "3d projection needs a 2-character pair like 'vw'");
    spec.title = rc.title;
    spec.x_label = rc.x_label;
    spec.y_label = rc.y_label;
    spec.validate();
    return spec;
}

struct SummaryLine {
    std::string key;
    std::string value;
};

void print_summary(const std::vector<SummaryLine>& lines) {
    for (const auto& [key, value] : lines) std::cout << key << " = " << value << "\n";
}

template <typename F>
std::string metric_or_nan(F&& f) {
    try {
        return f();
    } catch (const Error&) {
        return "nan";
    }
}

struct RunOutput {
    fs::path csv_path;
    fs::path cfg_path;
    std::optional<fs::path> svg_path;
    std::vector<SummaryLine> summary;
};

// Shared by simulate and each sweep leg. Writes trajectory.csv, the config
// echo, and the optional SVG under out_dir.
RunOutput simulate_run(RunConfig rc, const fs::path& out_dir) {
    rc.params.validate();
    rc.integ.validate();
    const StateVector initial{rc.u_init, rc.v_init, rc.w_init};

    Trajectory traj;
    if (rc.scales_mode == "fixed") {
        traj = integrate(rc.params, initial, rc.integ);
    } else if (rc.scales_mode == "constant" || rc.scales_mode == "streamed") {
        RunConfig loader = rc;
        loader.input = rc.scales_from;
        loader.bundled = rc.scales_from.empty();
        const Dataset dataset = load_input_dataset(loader);
        if (rc.scales_mode == "constant") {
            rc.params.u0 = series_mean(series_from_records(
                dataset.records, SeriesComponent::Balance, rc.scales_lag, rc.scales_r));
            rc.params.v0 = series_mean(series_from_records(
                dataset.records, SeriesComponent::Workers, rc.scales_lag, rc.scales_r));
            rc.params.w0 = series_mean(series_from_records(
                dataset.records, SeriesComponent::Employers, rc.scales_lag, rc.scales_r));
            rc.params.validate();  // resolved scales must still be positive
            traj = integrate(rc.params, initial, rc.integ);
        } else {
            const ScaleStreams streams =
                scale_streams(dataset.records, rc.scales_lag, rc.scales_r, rc.integ.t0);
            traj = integrate(rc.params, initial, rc.integ, streams);
        }
    } else {
        throw InvalidConfig("scales_mode", "must be fixed|constant|streamed");
    }

    RunOutput out;
    out.csv_path = out_dir / "trajectory.csv";
    write_file(out.csv_path, trajectory_csv(traj));
    if (!rc.svg.empty()) {
        out.svg_path = out_dir / "trajectory.svg";
        write_file(*out.svg_path, render_svg(traj, plot_spec_from(rc)));
    }
    out.cfg_path = out_dir / "run.cfg";
    write_file(out.cfg_path, echo_config(rc, "simulate"));

    const auto u = traj.component('u');
    const auto v = traj.component('v');
    const auto w = traj.component('w');
    std::optional<double> prom;
    if (rc.prominence >= 0) prom = rc.prominence;
    auto peak_count = [&](const std::vector<double>& s) {
        return metric_or_nan([&] {
            return format_int(static_cast<long long>(
                find_peaks(s, rc.smoothing_window, prom).indices.size()));
        });
    };
    auto relax = [&](const std::vector<double>& s) {
        return metric_or_nan(
            [&] { return format_double(relaxation_metric(s, rc.split_fraction).ratio); });
    };
    const int lag_cap = static_cast<int>((traj.size() - 1) / 2);
    const int max_lag = std::min(rc.max_lag, lag_cap);

    out.summary = {
        {"status", "ok"},
        {"samples", format_int(static_cast<long long>(traj.size()))},
        {"steps", format_int(static_cast<long long>(traj.size()) - 1)},
        {"peaks_u", peak_count(u)},
        {"peaks_v", peak_count(v)},
        {"peaks_w", peak_count(w)},
        {"relax_ratio_u", relax(u)},
        {"relax_ratio_v", relax(v)},
        {"relax_ratio_w", relax(w)},
        {"sign_changes_u", format_int(sign_changes(u))},
        {"sign_changes_v", format_int(sign_changes(v))},
        {"sign_changes_w", format_int(sign_changes(w))},
        {"phase_lag_vw",
         metric_or_nan([&] { return format_int(phase_lag(v, w, max_lag)); })},
        {"trajectory_csv", out.csv_path.string()},
        {"config", out.cfg_path.string()},
    };
    if (out.svg_path) out.summary.push_back({"svg", out.svg_path->string()});
    return out;
}

int cmd_simulate(const RunConfig& rc) {
    print_summary(simulate_run(rc, rc.out).summary);
    return 0;
}

int cmd_sweep(const RunConfig& rc) {
    if (rc.alpha2_values.empty())
        throw InvalidConfig("alpha2_values", "must be a non-empty list");
    const fs::path out_root = rc.out;

    struct Leg {
        double alpha2;
        bool ok{false};
        std::string error;
        std::map<std::string, std::string> metrics;
    };
    std::vector<std::future<Leg>> futures;
    // independent runs, one output directory each
    for (std::size_t i = 0; i < rc.alpha2_values.size(); ++i) {
        futures.push_back(std::async(std::launch::async, [&rc, &out_root, i] {
            Leg leg;
            leg.alpha2 = rc.alpha2_values[i];
            RunConfig leg_rc = rc;
            leg_rc.params.alpha2 = leg.alpha2;
            leg_rc.out = (out_root / ("run_" + std::to_string(i))).string();
            try {
                for (const auto& [key, value] : simulate_run(leg_rc, leg_rc.out).summary)
                    leg.metrics[key] = value;
                leg.ok = true;
            } catch (const Error& e) {
                leg.error = e.what();
            }
            return leg;
        }));
    }

    std::string summary = "alpha2,status,v_peaks,w_peaks,phase_lag_vw,relax_ratio_v\n";
    std::size_t succeeded = 0;
    for (auto& future : futures) {
        const Leg leg = future.get();
        summary += format_double(leg.alpha2);
        if (leg.ok) {
            ++succeeded;
            summary += ",ok," + leg.metrics.at("peaks_v") + "," + leg.metrics.at("peaks_w") +
                       "," + leg.metrics.at("phase_lag_vw") + "," +
                       leg.metrics.at("relax_ratio_v") + "\n";
        } else {
            summary += ",failed,,,,\n";
            std::cerr << "alpha2 = " << format_double(leg.alpha2) << " failed: " << leg.error
                      << "\n";
        }
    }
    write_file(out_root / "sweep_summary.csv", summary);
    write_file(out_root / "sweep.cfg", echo_config(rc, "sweep"));
    std::cout << "runs = " << rc.alpha2_values.size() << "\n"
              << "succeeded = " << succeeded << "\n"
              << "summary_csv = " << (out_root / "sweep_summary.csv").string() << "\n"
              << "config = " << (out_root / "sweep.cfg").string() << "\n";
    return succeeded > 0 ? 0 : 3;
}

int cmd_equilibrium(const RunConfig& rc) {
    rc.params.validate();
    const auto& p = rc.params;
    EquilibriumPoint point;
    if (p.response1 == FunctionalResponseKind::LotkaVolterra &&
        p.response2 == FunctionalResponseKind::LotkaVolterra) {
        point = equilibrium_lv(p);
    } else if (p.response1 == FunctionalResponseKind::HollingII &&
               p.response2 == FunctionalResponseKind::HollingII) {
        point = equilibrium_holling_k2zero(p, {rc.u_init, rc.v_init, rc.w_init}, rc.max_iter,
                                           rc.fp_tol);
    } else {
        throw InvalidResponse("mixed response kinds have no implemented equilibrium path");
    }

    std::vector<SummaryLine> lines = {
        {"method", point.method == EquilibriumMethod::AnalyticLV ? "analytic_lv"
                                                                 : "fixed_point_holling"},
        {"u_star", format_double(point.state.u)},
        {"v_star", format_double(point.state.v)},
        {"w_star", format_double(point.state.w)},
        {"residual", format_double(point.residual)},
        {"iterations", format_int(point.iterations)},
        {"negative_components", point.has_negative_component() ? "true" : "false"},
    };
    if (point.has_negative_component())
        std::cerr << "warning: equilibrium has a negative component; the dissimilarity "
                     "reading of the state does not apply there\n";
    std::string report;
    for (const auto& [key, value] : lines) report += key + " = " + value + "\n";
    write_file(fs::path(rc.out) / "equilibrium.txt", report);
    write_file(fs::path(rc.out) / "run.cfg", echo_config(rc, "equilibrium"));
    print_summary(lines);
    std::cout << "report = " << (fs::path(rc.out) / "equilibrium.txt").string() << "\n";
    return 0;
}

int cmd_dissim(const RunConfig& rc) {
    const Dataset dataset = load_input_dataset(rc);
    const auto discrepancies = validate_balances(dataset);
    std::vector<SummaryLine> lines = {
        {"records", format_int(static_cast<long long>(dataset.records.size()))},
        {"balance_discrepancies", format_int(static_cast<long long>(discrepancies.size()))},
    };
    for (const auto& d : discrepancies)
        std::cerr << "warning: balance mismatch at " << d.period.str() << " (off by "
                  << format_int(d.discrepancy) << ")\n";

    if (rc.matrix) {
        const auto matrix = build_matrix(dataset.records, rc.r, rc.normalize);
        const fs::path path = fs::path(rc.out) / "matrix.csv";
        write_file(path, matrix_csv(matrix));
        lines.push_back({"matrix_csv", path.string()});
        lines.push_back({"matrix_n", format_int(static_cast<long long>(matrix.n))});
    }

    const std::vector<std::pair<std::string, SeriesComponent>> wanted = [&] {
        std::vector<std::pair<std::string, SeriesComponent>> all = {
            {"balance", SeriesComponent::Balance},
            {"workers", SeriesComponent::Workers},
            {"employers", SeriesComponent::Employers}};
        if (rc.series == "all") return all;
        if (rc.series == "none") return decltype(all){};
        for (const auto& item : all)
            if (item.first == rc.series) return decltype(all){item};
        throw InvalidConfig("series", "must be none|balance|workers|employers|all");
    }();
    for (const auto& [name, component] : wanted) {
        const auto series = series_from_records(dataset.records, component, rc.lag, rc.r);
        const fs::path path = fs::path(rc.out) / ("series_" + name + ".csv");
        write_file(path, series_csv(series));
        lines.push_back({"series_" + name, path.string()});
    }

    write_file(fs::path(rc.out) / "run.cfg", echo_config(rc, "dissim"));
    print_summary(lines);
    return 0;
}

int cmd_ingest_validate(const RunConfig& rc) {
    const Dataset dataset = load_input_dataset(rc);
    const auto discrepancies = validate_balances(dataset);
    const fs::path csv_path = fs::path(rc.out) / "normalized.csv";
    write_file(csv_path, to_csv(dataset));
    write_file(fs::path(rc.out) / "run.cfg", echo_config(rc, "ingest-validate"));
    std::vector<SummaryLine> lines = {
        {"records", format_int(static_cast<long long>(dataset.records.size()))},
        {"gaps", format_int(static_cast<long long>(dataset.gaps.size()))},
        {"balance_discrepancies", format_int(static_cast<long long>(discrepancies.size()))},
        {"normalized_csv", csv_path.string()},
    };
    print_summary(lines);
    for (const auto& d : discrepancies)
        std::cout << "discrepancy " << d.period.str() << " = " << format_int(d.discrepancy)
                  << "\n";
    return 0;
}

std::vector<double> column_of(const Trajectory& traj, const std::string& name) {
    if (name != "u" && name != "v" && name != "w")
        throw InvalidConfig("col", "must be one of u|v|w, got '" + name + "'");
    return traj.component(name[0]);
}

int cmd_analyze(const RunConfig& rc) {
    if (rc.input.empty()) throw InvalidConfig("input", "need a trajectory CSV");
    const Trajectory traj = trajectory_from_csv(read_file(rc.input));
    const auto a = column_of(traj, rc.col_a);
    const auto b = column_of(traj, rc.col_b);
    std::optional<double> prom;
    if (rc.prominence >= 0) prom = rc.prominence;

    std::vector<SummaryLine> lines = {
        {"samples", format_int(static_cast<long long>(traj.size()))},
        {"peaks_" + rc.col_a,
         metric_or_nan([&] {
             return format_int(static_cast<long long>(
                 find_peaks(a, rc.smoothing_window, prom).indices.size()));
         })},
        {"peaks_" + rc.col_b,
         metric_or_nan([&] {
             return format_int(static_cast<long long>(
                 find_peaks(b, rc.smoothing_window, prom).indices.size()));
         })},
        {"phase_lag_" + rc.col_a + rc.col_b,
         metric_or_nan([&] { return format_int(phase_lag(a, b, rc.max_lag)); })},
        {"relax_ratio_" + rc.col_a,
         metric_or_nan(
             [&] { return format_double(relaxation_metric(a, rc.split_fraction).ratio); })},
        {"relax_ratio_" + rc.col_b,
         metric_or_nan(
             [&] { return format_double(relaxation_metric(b, rc.split_fraction).ratio); })},
    };
    std::string report;
    for (const auto& [key, value] : lines) report += key + " = " + value + "\n";
    write_file(fs::path(rc.out) / "analysis.txt", report);
    write_file(fs::path(rc.out) / "run.cfg", echo_config(rc, "analyze"));
    print_summary(lines);
    return 0;
}

int cmd_render(const RunConfig& rc) {
    if (rc.input.empty()) throw InvalidConfig("input", "need a trajectory CSV");
    if (rc.svg.empty()) throw InvalidConfig("svg", "need a plot kind (timeseries|phase2d|phase3d)");
    const Trajectory traj = trajectory_from_csv(read_file(rc.input));
    const fs::path path = fs::path(rc.out) / "plot.svg";
    write_file(path, render_svg(traj, plot_spec_from(rc)));
    write_file(fs::path(rc.out) / "run.cfg", echo_config(rc, "render"));
    std::cout << "svg = " << path.string() << "\n";
    return 0;
}

// --------------------------------------------------------------- plumbing

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const NonFiniteState& e) {
        std::cerr << "numerical failure: " << e.what()
                  << "; last finite time = " << format_double(e.last_finite_time()) << "\n";
        return 3;
    } catch (const DegenerateDenominator& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const SingularEquilibrium& e) {
        std::cerr << "equilibrium failure: " << e.what() << "\n";
        return 4;
    } catch (const NoConvergence& e) {
        std::cerr << "equilibrium failure: " << e.what()
                  << "; best residual = " << format_double(e.best().residual) << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

void add_model_options(CLI::App* cmd, RunConfig& rc) {
    auto& p = rc.params;
    cmd->add_option("--a", p.a, "growth rate of balance-of-workers dissimilarity");
    cmd->add_option("--b", p.b, "decay rate of worker dissimilarity");
    cmd->add_option("--c", p.c, "decay rate of employer dissimilarity");
    cmd->add_option("--alpha1", p.alpha1, "resource-prey coupling");
    cmd->add_option("--alpha2", p.alpha2, "prey-predator coupling");
    cmd->add_option("--k1", p.k1, "work-market carrying capacity");
    cmd->add_option("--k2", p.k2, "employer carrying capacity");
    cmd->add_option("--w-dag", p.w_dag, "predator floor");
    cmd->add_option("--u0", p.u0, "observational scale of u");
    cmd->add_option("--v0", p.v0, "observational scale of v");
    cmd->add_option("--w0", p.w0, "observational scale of w");
    cmd->add_option_function<std::string>(
        "--response1", [&rc](const std::string& s) { rc.params.response1 = parse_response(s); },
        "f1 kind: lv|holling");
    cmd->add_option_function<std::string>(
        "--response2", [&rc](const std::string& s) { rc.params.response2 = parse_response(s); },
        "f2 kind: lv|holling");
}

void add_initial_options(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--u-init", rc.u_init, "initial u");
    cmd->add_option("--v-init", rc.v_init, "initial v");
    cmd->add_option("--w-init", rc.w_init, "initial w");
}

void add_integration_options(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--t0", rc.integ.t0, "start time (months)");
    cmd->add_option("--t-end", rc.integ.t_end, "end time (months)");
    cmd->add_option("--dt", rc.integ.dt, "base step size");
    cmd->add_flag("--adaptive", rc.integ.adaptive, "step-halving error control");
    cmd->add_option("--tol", rc.integ.tol, "local error tolerance (adaptive)");
    cmd->add_option("--record-every", rc.integ.record_every, "output decimation factor");
}

void add_analysis_options(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--smoothing-window", rc.smoothing_window, "odd moving-average window");
    cmd->add_option("--prominence", rc.prominence, "peak prominence floor (<0: 5% of range)");
    cmd->add_option("--max-lag", rc.max_lag, "cross-correlation search half-width");
    cmd->add_option("--split-fraction", rc.split_fraction, "relaxation split point");
}

void add_plot_options(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--svg", rc.svg, "plot kind: timeseries|phase2d|phase3d");
    cmd->add_option("--components", rc.components, "plotted components, e.g. vw or uvw");
    cmd->add_option("--projection", rc.projection, "3d projection pair, e.g. vw");
    cmd->add_option("--title", rc.title, "plot title");
    cmd->add_option("--x-label", rc.x_label, "x axis label");
    cmd->add_option("--y-label", rc.y_label, "y axis label");
}

void add_dataset_options(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("input", rc.input, "dataset file (4-column delimiter-separated)");
    cmd->add_flag("--bundled", rc.bundled, "use the bundled 1996 sample");
    cmd->add_option("--locale", rc.locale, "number locale: brazilian|plain");
    cmd->add_flag("--allow-gaps", rc.allow_gaps, "tolerate missing months");
}

std::optional<std::string> find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string_view arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
        if (arg.rfind("--config=", 0) == 0) return std::string(arg.substr(9));
    }
    return std::nullopt;
}

}  // namespace

int run_cli(int argc, char** argv) {
    RunConfig rc;
    if (const char* env_out = std::getenv("WORKDYN_OUT")) rc.out = env_out;

    std::string config_command;  // "command" recorded in a loaded config
    return guarded([&]() -> int {
        if (const auto config_path = find_config_arg(argc, argv)) {
            // Config applies first so that flags override it; the file's own
            // command key is checked against the chosen subcommand below.
            std::ifstream probe(*config_path);
            if (!probe) throw Error("cannot open config file: " + *config_path);
            std::string line;
            while (std::getline(probe, line)) {
                const auto pos = line.find("command =");
                if (pos == 0) config_command = line.substr(10);
            }
            load_config_file(rc, *config_path);
        }

        CLI::App app{"labor-market predator-prey dissimilarity dynamics toolkit"};
        app.require_subcommand(1);
        std::string config_path_opt;

        auto add_common = [&](CLI::App* cmd) {
            cmd->add_option("--config", config_path_opt, "flat key = value config file");
            cmd->add_option("--out", rc.out, "output directory (or $WORKDYN_OUT)");
        };

        auto* simulate = app.add_subcommand("simulate", "integrate and export a trajectory");
        add_model_options(simulate, rc);
        add_integration_options(simulate, rc);
        add_initial_options(simulate, rc);
        add_analysis_options(simulate, rc);
        add_plot_options(simulate, rc);
        simulate->add_option("--scales-mode", rc.scales_mode,
                             "u0/v0/w0 source: fixed|constant|streamed");
        simulate->add_option("--scales-from", rc.scales_from,
                             "dataset for scale streams (default: bundled sample)");
        simulate->add_option("--scales-lag", rc.scales_lag, "lag for the scale series");
        simulate->add_option("--scales-r", rc.scales_r, "Minkowski exponent for scales");
        add_common(simulate);

        auto* sweep = app.add_subcommand("sweep", "one simulate per alpha2 value");
        add_model_options(sweep, rc);
        add_integration_options(sweep, rc);
        add_initial_options(sweep, rc);
        add_analysis_options(sweep, rc);
        add_plot_options(sweep, rc);
        sweep->add_option_function<std::string>(
            "--alpha2-values",
            [&rc](const std::string& s) { rc.alpha2_values = parse_double_list("alpha2_values", s); },
            "comma-separated alpha2 list");
        add_common(sweep);

        auto* equilibrium = app.add_subcommand("equilibrium", "stationary-point report");
        add_model_options(equilibrium, rc);
        add_initial_options(equilibrium, rc);
        equilibrium->add_option("--max-iter", rc.max_iter, "fixed-point iteration cap");
        equilibrium->add_option("--fp-tol", rc.fp_tol, "fixed-point state-change tolerance");
        add_common(equilibrium);

        auto* dissim = app.add_subcommand("dissim", "dissimilarity matrix and series");
        add_dataset_options(dissim, rc);
        dissim->add_option("--r", rc.r, "Minkowski exponent (>= 1)");
        dissim->add_flag("--normalize", rc.normalize, "min-max scale features first");
        dissim->add_option("--lag", rc.lag, "series lag (months)");
        dissim->add_flag("--matrix,!--no-matrix", rc.matrix, "write the full matrix");
        dissim->add_option("--series", rc.series, "none|balance|workers|employers|all");
        add_common(dissim);

        auto* ingest = app.add_subcommand("ingest-validate",
                                          "parse, check balances, write normalized CSV");
        add_dataset_options(ingest, rc);
        add_common(ingest);

        auto* analyze = app.add_subcommand("analyze", "peaks, lag and relaxation of a trajectory");
        analyze->add_option("input", rc.input, "trajectory CSV (t,u,v,w)");
        analyze->add_option("--col-a", rc.col_a, "first component: u|v|w");
        analyze->add_option("--col-b", rc.col_b, "second component: u|v|w");
        add_analysis_options(analyze, rc);
        add_common(analyze);

        auto* render = app.add_subcommand("render", "SVG plot from a trajectory CSV");
        render->add_option("input", rc.input, "trajectory CSV (t,u,v,w)");
        add_plot_options(render, rc);
        add_common(render);

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }

        CLI::App* chosen = app.get_subcommands().front();
        const std::string command = chosen->get_name();
        if (!config_command.empty() && config_command != command)
            throw InvalidConfig("command", "config file was written by '" + config_command +
                                               "', not '" + command + "'");

        if (command == "simulate") return cmd_simulate(rc);
        if (command == "sweep") return cmd_sweep(rc);
        if (command == "equilibrium") return cmd_equilibrium(rc);
        if (command == "dissim") return cmd_dissim(rc);
        if (command == "ingest-validate") return cmd_ingest_validate(rc);
        if (command == "analyze") return cmd_analyze(rc);
        return cmd_render(rc);
    });
}

}  // namespace workdyn::cli
