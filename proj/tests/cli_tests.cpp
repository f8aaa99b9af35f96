#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "workdyn/export.hpp"
#include "workdyn/ingest.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_bin;
std::string g_data;
fs::path g_scratch;

struct RunResult {
    int exit_code{-1};
    std::string out;  // stdout + stderr
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: ", path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path log = g_scratch / ("log_" + std::to_string(counter++) + ".txt");
    const std::string cmd = g_bin + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(log);
    return result;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = g_scratch / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string value_of(const std::string& text, const std::string& key) {
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
    }
    return "";
}

}  // namespace

TEST_CASE("simulate writes a trajectory and a reloadable config") {
    const fs::path dir = fresh_dir("simulate_basic");
    const auto result =
        run("simulate --alpha2 2.0 --k2 0 --t-end 20 --out " + dir.string());
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "run.cfg"));
    CHECK(value_of(result.out, "status") == "ok");
    CHECK(value_of(result.out, "samples") == "2001");

    const auto traj = workdyn::trajectory_from_csv(slurp(dir / "trajectory.csv"));
    CHECK(traj.size() == 2001);
    CHECK(traj.times.back() == 20.0);
}

TEST_CASE("config errors name the offending field and exit 2") {
    const fs::path dir = fresh_dir("simulate_badcfg");
    const auto result = run("simulate --dt -1 --out " + dir.string());
    CHECK(result.exit_code == 2);
    CHECK(result.out.find("dt") != std::string::npos);
}

TEST_CASE("blow-up exits 3 and reports the last finite time") {
    const fs::path dir = fresh_dir("simulate_blowup");
    const auto result = run("simulate --dt 10 --t-end 100 --out " + dir.string());
    CHECK(result.exit_code == 3);
    CHECK(result.out.find("last finite time") != std::string::npos);
}

TEST_CASE("simulate rerun from its echoed config is byte-identical") {
    const fs::path dir1 = fresh_dir("simulate_echo1");
    const fs::path dir2 = fresh_dir("simulate_echo2");
    const auto first = run("simulate --alpha2 1.4 --t-end 30 --svg timeseries --components vw "
                           "--title oscillation --out " + dir1.string());
    REQUIRE(first.exit_code == 0);
    const auto second =
        run("simulate --config " + (dir1 / "run.cfg").string() + " --out " + dir2.string());
    REQUIRE(second.exit_code == 0);
    CHECK(slurp(dir1 / "trajectory.csv") == slurp(dir2 / "trajectory.csv"));
    CHECK(slurp(dir1 / "trajectory.svg") == slurp(dir2 / "trajectory.svg"));
}

TEST_CASE("config with an unknown key is rejected") {
    const fs::path dir = fresh_dir("simulate_unknown_key");
    const fs::path cfg = dir / "bad.cfg";
    std::ofstream(cfg) << "command = simulate\nwarp_factor = 9\n";
    const auto result =
        run("simulate --config " + cfg.string() + " --out " + dir.string());
    CHECK(result.exit_code == 2);
    CHECK(result.out.find("warp_factor") != std::string::npos);
}

TEST_CASE("config written by another command is refused") {
    const fs::path dir = fresh_dir("simulate_wrong_command");
    std::ofstream(dir / "other.cfg") << "command = dissim\nr = 2\n";
    const auto result =
        run("simulate --config " + (dir / "other.cfg").string() + " --out " + dir.string());
    CHECK(result.exit_code == 2);
}

TEST_CASE("equilibrium prints the analytic LV point") {
    const fs::path dir = fresh_dir("equilibrium_lv");
    const auto result = run("equilibrium --out " + dir.string());
    CHECK(result.exit_code == 0);
    CHECK(value_of(result.out, "method") == "analytic_lv");
    CHECK(value_of(result.out, "v_star") == "5");
    CHECK(fs::exists(dir / "equilibrium.txt"));
}

TEST_CASE("equilibrium holling path reports a small residual") {
    const fs::path dir = fresh_dir("equilibrium_holling");
    const auto result =
        run("equilibrium --response1 holling --response2 holling --out " + dir.string());
    CHECK(result.exit_code == 0);
    CHECK(value_of(result.out, "method") == "fixed_point_holling");
    const double residual = std::stod(value_of(result.out, "residual"));
    CHECK(residual < 1e-8);
}

TEST_CASE("equilibrium with k2 > 0 is an unsupported-case config error") {
    const fs::path dir = fresh_dir("equilibrium_k2");
    const auto result = run(
        "equilibrium --response1 holling --response2 holling --k2 0.1 --out " + dir.string());
    CHECK(result.exit_code == 2);
    CHECK(result.out.find("k2") != std::string::npos);
}

TEST_CASE("equilibrium resonance exits 4") {
    const fs::path dir = fresh_dir("equilibrium_resonance");
    // alpha1*c == alpha2*a
    const auto result =
        run("equilibrium --alpha1 0.5 --c 10 --alpha2 5 --a 1 --out " + dir.string());
    CHECK(result.exit_code == 4);
}

TEST_CASE("dissim on the bundled sample") {
    const fs::path dir = fresh_dir("dissim_bundled");
    const auto result = run("dissim --bundled --out " + dir.string());
    CHECK(result.exit_code == 0);
    CHECK(value_of(result.out, "records") == "12");
    CHECK(value_of(result.out, "balance_discrepancies") == "0");
    CHECK(value_of(result.out, "matrix_n") == "12");

    const std::string matrix = slurp(dir / "matrix.csv");
    CHECK(matrix.rfind("n,r,normalized\n12,2,0\n", 0) == 0);

    const std::string workers = slurp(dir / "series_workers.csv");
    CHECK(workers.find("0,4094\n") != std::string::npos);
}

TEST_CASE("dissim reads the shipped data file like the embedded sample") {
    const fs::path dir = fresh_dir("dissim_file");
    const auto result =
        run("dissim " + (fs::path(g_data) / "caged_1996.csv").string() + " --out " + dir.string());
    CHECK(result.exit_code == 0);
    CHECK(value_of(result.out, "records") == "12");

    const fs::path dir2 = fresh_dir("dissim_file_vs_bundled");
    REQUIRE(run("dissim --bundled --out " + dir2.string()).exit_code == 0);
    CHECK(slurp(dir / "matrix.csv") == slurp(dir2 / "matrix.csv"));
}

TEST_CASE("plain locale on a brazilian file exits 2") {
    const fs::path dir = fresh_dir("dissim_locale");
    const auto result = run("dissim " + (fs::path(g_data) / "caged_1996.csv").string() +
                            " --locale plain --out " + dir.string());
    CHECK(result.exit_code == 2);
    CHECK(result.out.find("line") != std::string::npos);
}

TEST_CASE("dissim rerun from its echoed config is byte-identical") {
    const fs::path dir1 = fresh_dir("dissim_echo1");
    const fs::path dir2 = fresh_dir("dissim_echo2");
    REQUIRE(run("dissim --bundled --normalize --r 3 --out " + dir1.string()).exit_code == 0);
    REQUIRE(run("dissim --config " + (dir1 / "run.cfg").string() + " --out " + dir2.string())
                .exit_code == 0);
    CHECK(slurp(dir1 / "matrix.csv") == slurp(dir2 / "matrix.csv"));
    CHECK(slurp(dir1 / "series_workers.csv") == slurp(dir2 / "series_workers.csv"));
}

TEST_CASE("sweep of a single value matches a lone simulate") {
    const fs::path sweep_dir = fresh_dir("sweep_single");
    const fs::path sim_dir = fresh_dir("sweep_single_ref");
    REQUIRE(run("sweep --alpha2-values 1.0 --t-end 15 --out " + sweep_dir.string()).exit_code ==
            0);
    REQUIRE(run("simulate --alpha2 1.0 --t-end 15 --out " + sim_dir.string()).exit_code == 0);
    CHECK(slurp(sweep_dir / "run_0" / "trajectory.csv") == slurp(sim_dir / "trajectory.csv"));

    const std::string summary = slurp(sweep_dir / "sweep_summary.csv");
    CHECK(summary.rfind("alpha2,status,v_peaks,w_peaks,phase_lag_vw,relax_ratio_v\n", 0) == 0);
    CHECK(summary.find("1,ok,") != std::string::npos);
}

TEST_CASE("sweep records failed legs and keeps going") {
    const fs::path dir = fresh_dir("sweep_fault");
    const auto result =
        run("sweep --alpha2-values 1.0,1e9 --t-end 15 --out " + dir.string());
    CHECK(result.exit_code == 0);  // one leg succeeded
    const std::string summary = slurp(dir / "sweep_summary.csv");
    CHECK(summary.find("1,ok,") != std::string::npos);
    CHECK(summary.find("1e+09,failed,") != std::string::npos);
    CHECK(fs::exists(dir / "run_0" / "trajectory.csv"));
}

TEST_CASE("sweep where every leg fails exits 3") {
    const fs::path dir = fresh_dir("sweep_allfail");
    const auto result = run("sweep --alpha2-values 1e9,2e9 --t-end 15 --out " + dir.string());
    CHECK(result.exit_code == 3);
}

TEST_CASE("ingest-validate emits a normalized CSV") {
    const fs::path dir = fresh_dir("ingest_ok");
    const auto result = run("ingest-validate --bundled --out " + dir.string());
    CHECK(result.exit_code == 0);
    CHECK(value_of(result.out, "records") == "12");
    CHECK(value_of(result.out, "balance_discrepancies") == "0");
    const std::string csv = slurp(dir / "normalized.csv");
    CHECK(csv.rfind("period,balance,workers,employers\n1996-01,-12626,23743110,336946\n", 0) ==
          0);
}

TEST_CASE("gap handling is opt-in") {
    const fs::path dir = fresh_dir("ingest_gaps");
    const fs::path data = dir / "gappy.csv";
    std::ofstream(data) << "01/1996;-12.626;23.743.110;336.946\n"
                           "04/1996;118.918;23.867.937;349.273\n";
    CHECK(run("ingest-validate " + data.string() + " --out " + dir.string()).exit_code == 2);
    const auto tolerant =
        run("ingest-validate " + data.string() + " --allow-gaps --out " + dir.string());
    CHECK(tolerant.exit_code == 0);
    CHECK(value_of(tolerant.out, "gaps") == "2");
}

TEST_CASE("analyze reports metrics from a trajectory file") {
    const fs::path sim_dir = fresh_dir("analyze_sim");
    REQUIRE(run("simulate --alpha2 2.0 --t-end 60 --record-every 10 --out " + sim_dir.string())
                .exit_code == 0);
    const fs::path dir = fresh_dir("analyze_out");
    const auto result = run("analyze " + (sim_dir / "trajectory.csv").string() +
                            " --col-a v --col-b w --max-lag 40 --out " + dir.string());
    CHECK(result.exit_code == 0);
    CHECK(!value_of(result.out, "peaks_v").empty());
    CHECK(!value_of(result.out, "phase_lag_vw").empty());
    CHECK(fs::exists(dir / "analysis.txt"));
}

TEST_CASE("render produces an SVG from a trajectory CSV") {
    const fs::path sim_dir = fresh_dir("render_sim");
    REQUIRE(run("simulate --t-end 20 --record-every 5 --out " + sim_dir.string()).exit_code ==
            0);
    const fs::path dir = fresh_dir("render_out");
    const auto result = run("render " + (sim_dir / "trajectory.csv").string() +
                            " --svg phase2d --components vw --out " + dir.string());
    CHECK(result.exit_code == 0);
    const std::string svg = slurp(dir / "plot.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);

    const auto missing_kind =
        run("render " + (sim_dir / "trajectory.csv").string() + " --out " + dir.string());
    CHECK(missing_kind.exit_code == 2);
}

TEST_CASE("WORKDYN_OUT provides the default output root") {
    const fs::path dir = fresh_dir("env_out");
    setenv("WORKDYN_OUT", dir.c_str(), 1);
    const auto result = run("equilibrium");
    unsetenv("WORKDYN_OUT");
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(dir / "equilibrium.txt"));
}

TEST_CASE("streamed and constant scale modes run against the bundled sample") {
    const fs::path dir = fresh_dir("simulate_scales");
    // raw monthly dissimilarities are O(1e5), so the scaled system either
    // integrates or trips the blow-up guard depending on the horizon
    const auto streamed = run("simulate --scales-mode streamed --t-end 5 --dt 0.001 --out " +
                              dir.string());
    CHECK((streamed.exit_code == 0 || streamed.exit_code == 3));

    const auto bogus = run("simulate --scales-mode sideways --out " + dir.string());
    CHECK(bogus.exit_code == 2);
}

TEST_CASE("constant scale mode resolves means and echoes them") {
    const fs::path dir = fresh_dir("simulate_const_scales");
    const fs::path data = dir / "mini.csv";
    // deltas: balance 2,2,2 -> mean 2; workers 2,2,2 -> mean 2;
    // employers 1,2,1 -> mean 4/3
    std::ofstream(data) << "2000-01,1,10,5\n2000-02,3,12,6\n2000-03,1,14,8\n2000-04,3,16,9\n";
    const auto result = run("simulate --scales-mode constant --scales-from " + data.string() +
                            " --t-end 2 --out " + dir.string());
    CHECK(result.exit_code == 0);
    const std::string cfg = slurp(dir / "run.cfg");
    CHECK(cfg.find("u0 = 2\n") != std::string::npos);
    CHECK(cfg.find("v0 = 2\n") != std::string::npos);
    CHECK(cfg.find("w0 = 1.3333333333333333\n") != std::string::npos);
}

int main(int argc, char** argv) {
    std::vector<char*> doctest_args;
    for (int i = 0; i < argc; ++i) {
        const std::string_view arg = argv[i];
        if (arg == "--bin" && i + 1 < argc) {
            g_bin = argv[++i];
        } else if (arg == "--data" && i + 1 < argc) {
            g_data = argv[++i];
        } else if (arg == "--scratch" && i + 1 < argc) {
            g_scratch = argv[++i];
        } else {
            doctest_args.push_back(argv[i]);
        }
    }
    if (g_bin.empty() || g_data.empty() || g_scratch.empty()) {
        std::fprintf(stderr, "usage: cli_tests --bin <workdyn> --data <dir> --scratch <dir>\n");
        return 1;
    }
    fs::create_directories(g_scratch);
    doctest::Context context(static_cast<int>(doctest_args.size()), doctest_args.data());
    return context.run();
}
