#pragma once

#include <string>
#include <vector>

#include "workdyn/integrate.hpp"
#include "workdyn/model.hpp"

namespace workdyn::cli {

/// Everything a run needs, flat and echoable. String-typed enums stay
/// strings so the echoed config reproduces the input byte-for-byte.
struct RunConfig {
    ModelParams params;
    IntegrationConfig integ;
    double u_init{1.0};
    double v_init{1.0};
    double w_init{1.0};

    // analysis knobs (simulate summary + analyze command)
    int smoothing_window{3};
    double prominence{-1.0};  // < 0 means automatic (5% of range)
    int max_lag{200};
    double split_fraction{0.5};

    // simulate / render
    std::string svg;                  // "", "timeseries", "phase2d", "phase3d"
    std::string components{"vw"};
    std::string projection{"vw"};     // 3d projection pair
    std::string title;
    std::string x_label;
    std::string y_label;

    // scales coupling (simulate)
    std::string scales_mode{"fixed"};  // fixed | constant | streamed
    std::string scales_from;           // dataset path ("" -> bundled sample)
    int scales_lag{1};
    double scales_r{2.0};

    // sweep
    std::vector<double> alpha2_values{1.0, 1.4, 1.8, 2.0};

    // equilibrium (seed is u_init/v_init/w_init)
    int max_iter{200};
    double fp_tol{1e-12};

    // dissim / ingest-validate / analyze / render inputs
    std::string input;
    bool bundled{false};
    std::string locale{"brazilian"};
    bool allow_gaps{false};
    double r{2.0};
    bool normalize{false};
    int lag{1};
    bool matrix{true};
    std::string series{"all"};  // none | balance | workers | employers | all
    std::string col_a{"v"};
    std::string col_b{"w"};

    std::string out{"."};
};

/// Applies one config-file key; throws InvalidConfig on unknown keys or
/// unparseable values.
void apply_kv(RunConfig& rc, const std::string& key, const std::string& value);

/// Reads a flat key = value file ('#' comments, blank lines allowed).
void load_config_file(RunConfig& rc, const std::string& path);

/// Fully resolved provenance echo for one command, reloadable via --config.
std::string echo_config(const RunConfig& rc, const std::string& command);

int run_cli(int argc, char** argv);

}  // namespace workdyn::cli
