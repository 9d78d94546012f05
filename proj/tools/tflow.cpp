// tflow: simulate the graphical mean curvature flow with Neumann boundary
// data on a metric disk, compute its translating profile (lambda, w), and
// verify the a-priori estimates on the run artifacts.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

#include "tflow/cli.hpp"
#include "tflow/errors.hpp"
#include "tflow/version.hpp"

namespace {

int jobs_from_env() {
    if (const char* env = std::getenv("TFLOW_JOBS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonparametric mean curvature flow with Neumann boundary data"};
    app.set_version_flag("--version", TFLOW_VERSION);
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int jobs = 0;
    std::vector<double> a_grid = {0.0, 0.05, -0.05, 0.1, -0.1, 0.2, -0.2};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "override output directory");
        sub->add_option("--jobs", jobs, "concurrent jobs (default: TFLOW_JOBS or hardware)");
    };

    CLI::App* c_flow = app.add_subcommand("flow", "time-integrate the flow");
    CLI::App* c_tr = app.add_subcommand("translator", "compute (lambda, w) by continuation");
    CLI::App* c_verify = app.add_subcommand("verify", "run the full diagnostics suite");
    CLI::App* c_sweep = app.add_subcommand("sweep", "map a to lambda(a) for phi = const(a)");
    add_common(c_flow);
    add_common(c_tr);
    add_common(c_verify);
    add_common(c_sweep);
    c_sweep->add_option("--a-grid", a_grid, "boundary values to sweep")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        tflow::RunConfig cfg = tflow::parse_config(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;

        int n = jobs > 0 ? jobs : jobs_from_env();
        if (n <= 0) n = int(std::thread::hardware_concurrency());
        if (n <= 0) n = 1;

        if (c_flow->parsed()) return tflow::cmd_flow(cfg, n);
        if (c_tr->parsed()) return tflow::cmd_translator(cfg, n);
        if (c_verify->parsed()) return tflow::cmd_verify(cfg, n);
        if (c_sweep->parsed()) return tflow::cmd_sweep(cfg, a_grid, n);
    } catch (const tflow::Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
