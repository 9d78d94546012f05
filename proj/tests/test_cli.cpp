#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tflow/cli.hpp"
#include "tflow/csv_io.hpp"

using namespace tflow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double meta_value(const std::string& path, const std::string& key) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + ",", 0) == 0) return std::strtod(line.c_str() + key.size() + 1, nullptr);
    }
    FAIL("key not found: ", key);
    return 0.0;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("tflow_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("cmd_translator: zero boundary data yields lambda = 0 and exit 0") {
    TempDir tmp("cli_tr");
    RunConfig cfg = parse_config_text(
        "mesh.n_r = 16\nmesh.n_theta = 32\nboundary_phi = const(0)\n"
        "translator.eps_schedule = 1e-1,1e-2,1e-3\n");
    cfg.output_dir = (tmp.path / "run").string();
    CHECK(cmd_translator(cfg) == 0);
    CHECK(std::fabs(meta_value(cfg.output_dir + "/translator_meta.csv", "lambda_eps")) < 1e-9);
    CHECK(fs::exists(cfg.output_dir + "/w.csv"));
    CHECK(fs::exists(cfg.output_dir + "/eps_trace.csv"));
    CHECK(fs::exists(cfg.output_dir + "/manifest.csv"));
}

TEST_CASE("reruns of identical configs produce bit-identical data CSVs") {
    TempDir tmp("cli_repro");
    RunConfig cfg = parse_config_text(
        "mesh.n_r = 16\nmesh.n_theta = 32\nboundary_phi = const(0.1)\n"
        "translator.eps_schedule = 1e-1,1e-2\n");
    cfg.output_dir = (tmp.path / "a").string();
    REQUIRE(cmd_translator(cfg) == 0);
    RunConfig cfg2 = cfg;
    cfg2.output_dir = (tmp.path / "b").string();
    REQUIRE(cmd_translator(cfg2) == 0);
    CHECK(slurp(cfg.output_dir + "/w.csv") == slurp(cfg2.output_dir + "/w.csv"));
    CHECK(slurp(cfg.output_dir + "/eps_trace.csv") == slurp(cfg2.output_dir + "/eps_trace.csv"));
    CHECK(slurp(cfg.output_dir + "/translator_meta.csv") ==
          slurp(cfg2.output_dir + "/translator_meta.csv"));
}

TEST_CASE("cmd_flow: converged run exits 0 and writes the monitor series") {
    TempDir tmp("cli_flow");
    RunConfig cfg = parse_config_text(
        "mesh.n_r = 16\nmesh.n_theta = 32\nboundary_phi = const(0)\n"
        "initial_u0 = linear(0.1)\nflow.t_max = 40\n");
    cfg.output_dir = (tmp.path / "run").string();
    CHECK(cmd_flow(cfg) == 0);
    CHECK(fs::exists(cfg.output_dir + "/monitors.csv"));
    CHECK(fs::exists(cfg.output_dir + "/flow_meta.csv"));
    CHECK(std::fabs(meta_value(cfg.output_dir + "/flow_meta.csv", "lambda_flow")) < 1e-6);
    const std::string monitors = slurp(cfg.output_dir + "/monitors.csv");
    CHECK(monitors.rfind("t,sup_ut,osc_ut,sup_grad,mean_u,osc_drift", 0) == 0);

    // at least the initial and final snapshots exist
    int snapshots = 0;
    for (const auto& e : fs::directory_iterator(cfg.output_dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("u_t", 0) == 0) ++snapshots;
    }
    CHECK(snapshots >= 2);
}

TEST_CASE("cmd_flow exits nonzero when the flow cannot converge by t_max") {
    TempDir tmp("cli_flow_tmax");
    RunConfig cfg = parse_config_text(
        "mesh.n_r = 16\nmesh.n_theta = 32\nboundary_phi = const(0.1)\n"
        "initial_u0 = linear(0.1)\nflow.t_max = 0.05\n");
    cfg.output_dir = (tmp.path / "run").string();
    CHECK(cmd_flow(cfg) != 0);
}

TEST_CASE("cmd_sweep: lambda(a) is odd in a") {
    TempDir tmp("cli_sweep");
    RunConfig cfg = parse_config_text(
        "mesh.n_r = 16\nmesh.n_theta = 32\n"
        "initial_u0 = linear(0.05)\nflow.t_max = 40\n"
        "translator.eps_schedule = 1e-1,1e-2,1e-3\n");
    cfg.output_dir = (tmp.path / "sweep").string();
    CHECK(cmd_sweep(cfg, {0.0, 0.05, -0.05}, 2) == 0);

    std::ifstream in(cfg.output_dir + "/lambda_vs_a.csv");
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "a,lambda_eps,lambda_integral,lambda_flow");
    double a[3], le[3], li[3], lf[3];
    for (int k = 0; k < 3; ++k) {
        char comma;
        in >> a[k] >> comma >> le[k] >> comma >> li[k] >> comma >> lf[k];
        in.ignore(1000, '\n');
    }
    CHECK(a[0] == 0.0);
    CHECK(std::fabs(le[0]) < 1e-9);
    CHECK(std::fabs(le[1] + le[2]) < 1e-6); // odd symmetry
    CHECK(std::fabs(lf[1] + lf[2]) < 1e-6);
    CHECK(le[1] < 0.0); // a > 0 moves down
}

TEST_CASE("cmd_verify: all nine checks pass on the small flat scenario") {
    TempDir tmp("cli_verify");
    RunConfig cfg = parse_config_text(
        "mesh.n_r = 16\nmesh.n_theta = 32\nboundary_phi = const(0.1)\n"
        "initial_u0 = linear(0.1)\nflow.t_max = 60\n"
        "translator.eps_schedule = 1e-1,3e-2,1e-2,3e-3,1e-3\n");
    cfg.output_dir = (tmp.path / "verify").string();
    CHECK(cmd_verify(cfg) == 0);

    std::ifstream in(cfg.output_dir + "/diagnostics.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "check,status,margin,tolerance");
    int rows = 0, passes = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        if (line.find(",pass,") != std::string::npos) ++passes;
    }
    CHECK(rows == 9);
    CHECK(passes == 9);
    CHECK(fs::exists(cfg.output_dir + "/flow1/monitors.csv"));
    CHECK(fs::exists(cfg.output_dir + "/flow2/monitors.csv"));
    CHECK(fs::exists(cfg.output_dir + "/diagnostics.csv"));
}
