#include "tflow/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <thread>

#include "tflow/csv_io.hpp"
#include "tflow/diagnostics.hpp"
#include "tflow/version.hpp"

namespace tflow {

namespace {

struct Scenario {
    MetricDescriptor metric = MetricDescriptor::flat();
    MeshPtr mesh;
    PlanPtr plan;
    std::vector<double> phi;
    ScalarField u0;
};

Scenario build_scenario(const RunConfig& cfg) {
    Scenario s;
    s.metric = cfg.metric();
    s.mesh = DiskMesh::build(s.metric, cfg.R, cfg.n_r, cfg.n_theta);
    s.plan = std::make_shared<kernels::OperatorPlan>(s.mesh);
    s.phi = cfg.phi.sample(*s.mesh);
    s.u0 = cfg.u0.sample(s.mesh);
    return s;
}

FlowOptions flow_options(const RunConfig& cfg) {
    FlowOptions o;
    o.t_max = cfg.t_max;
    o.tol_translate = cfg.tol_translate;
    o.c_cfl = cfg.c_cfl;
    o.monitor_stride = cfg.snapshot_stride;
    o.repair_compatibility = cfg.repair_compatibility;
    return o;
}

EpsSolveOptions eps_options(const RunConfig& cfg) {
    EpsSolveOptions o;
    o.tol_ell = cfg.tol_ell;
    o.c_cfl = cfg.c_cfl;
    return o;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void write_manifest(const std::string& dir, const RunConfig& cfg,
                    std::vector<std::pair<std::string, std::string>> extra, double wall_s) {
    auto kv = cfg.echo();
    kv.emplace_back("binary.version", TFLOW_VERSION);
    kv.emplace_back("binary.kernel_backend", kernels::active_ops().name);
    for (auto& e : extra) kv.push_back(std::move(e));
    kv.emplace_back("wall_time_s", format_g17(wall_s));
    write_kv_csv(dir + "/manifest.csv", kv);
}

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "u_t%.6f.csv", t);
    return buf;
}

void write_flow_outputs(const std::string& dir, const FlowResult& res) {
    ensure_dir(dir);
    write_monitor_csv(dir + "/monitors.csv", res.series);
    for (const auto& snap : res.snapshots) {
        write_field_csv(dir + "/" + snapshot_name(snap.t), snap.u);
    }
    write_kv_csv(dir + "/flow_meta.csv",
                 {{"lambda_flow", format_g17(res.lambda_flow)},
                  {"lambda_flow_fit", format_g17(res.lambda_flow_fit)},
                  {"termination", to_string(res.termination)},
                  {"t_final", format_g17(res.t_final)},
                  {"steps", std::to_string(res.steps)},
                  {"dt", format_g17(res.dt)},
                  {"compat_repaired", res.compat_repaired ? "true" : "false"},
                  {"compat_residual", format_g17(res.compat_residual)}});
}

void write_translator_outputs(const std::string& dir, const TranslatorResult& tr) {
    ensure_dir(dir);
    std::vector<std::pair<std::string, std::string>> kv = {
        {"lambda_eps", format_g17(tr.lambda_eps)},
        {"lambda_integral", format_g17(tr.lambda_integral)},
        {"residual_pde", format_g17(tr.residual_pde)},
        {"residual_bc", format_g17(tr.residual_bc)},
        {"fit_residual", format_g17(tr.fit_residual)},
        {"trace_monotone", tr.trace_monotone ? "true" : "false"},
    };
    if (std::isfinite(tr.lambda_flow)) kv.emplace_back("lambda_flow", format_g17(tr.lambda_flow));
    write_kv_csv(dir + "/translator_meta.csv", kv);
    write_field_csv(dir + "/w.csv", tr.w);
    write_eps_trace_csv(dir + "/eps_trace.csv", tr.eps_trace);
}

int fail_with(const std::string& code, const std::string& msg) {
    std::cerr << "error: " << code << ": " << msg << "\n";
    return 1;
}

// Initial data for the companion run of verify: the same profile turned a
// quarter rotation, giving a second run with identical phi and metric.
ScalarField rotate_quarter(const ScalarField& u) {
    const DiskMesh& m = *u.mesh;
    ScalarField out = u;
    const int nt = m.n_theta();
    const int shift = nt % 4 == 0 ? nt / 4 : nt / 2;
    for (int i = 0; i <= m.n_r(); ++i) {
        for (int j = 0; j < nt; ++j) {
            out.v[m.index(i, j)] = u.v[m.index(i, (j - shift + nt) % nt)];
        }
    }
    return out;
}

} // namespace

int cmd_flow(const RunConfig& cfg, int jobs) {
    (void)jobs;
    const auto t0 = Clock::now();
    Scenario s = build_scenario(cfg);
    FlowSolver solver(s.plan);
    solver.set_phi(s.phi);
    FlowResult res = solver.run(s.u0, flow_options(cfg));
    ensure_dir(cfg.output_dir);
    write_flow_outputs(cfg.output_dir, res);
    write_manifest(cfg.output_dir, cfg,
                   {{"flow.termination", to_string(res.termination)},
                    {"flow.compat_repaired", res.compat_repaired ? "true" : "false"}},
                   seconds_since(t0));
    if (res.termination != FlowTermination::converged) {
        return fail_with(to_string(res.termination), "flow did not reach the translating regime");
    }
    return 0;
}

int cmd_translator(const RunConfig& cfg, int jobs) {
    (void)jobs;
    const auto t0 = Clock::now();
    Scenario s = build_scenario(cfg);
    TranslatorSolver solver(s.plan);
    solver.set_phi(s.phi);
    TranslatorResult tr = solver.continuation(cfg.eps_schedule, &s.u0, eps_options(cfg));
    ensure_dir(cfg.output_dir);
    write_translator_outputs(cfg.output_dir, tr);
    write_manifest(cfg.output_dir, cfg, {}, seconds_since(t0));
    const double h2 = s.mesh->h() * s.mesh->h();
    if (!(tr.residual_pde <= 100.0 * h2)) {
        return fail_with("translator-residual", "PDE residual " + format_g17(tr.residual_pde) +
                                                    " above 100 h^2");
    }
    if (!(tr.residual_bc <= 1e-10)) {
        return fail_with("translator-residual", "Neumann residual " + format_g17(tr.residual_bc) +
                                                    " above 1e-10");
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, int jobs) {
    const auto t0 = Clock::now();
    Scenario s = build_scenario(cfg);

    // repair the initial data once up front so the report sees exactly what
    // the flows integrate
    ScalarField u0 = s.u0;
    bool repaired = false;
    {
        std::vector<double> nd = s.mesh->normal_derivative(u0);
        double mis = 0.0;
        for (int j = 0; j < s.mesh->n_theta(); ++j) {
            mis = std::fmax(mis, std::fabs(nd[j] - s.phi[j]));
        }
        if (mis > 10.0 * s.mesh->h() * s.mesh->h() && cfg.repair_compatibility) {
            s.plan->enforce_neumann(u0, s.phi);
            repaired = true;
        }
    }
    ScalarField u0_rot = rotate_quarter(u0);

    FlowSolver flow1(s.plan), flow2(s.plan);
    flow1.set_phi(s.phi);
    flow2.set_phi(s.phi);
    const FlowOptions fo = flow_options(cfg);
    FlowResult res1, res2;
    if (jobs >= 2) {
        std::thread th([&]() { res2 = flow2.run(u0_rot, fo); });
        res1 = flow1.run(u0, fo);
        th.join();
    } else {
        res1 = flow1.run(u0, fo);
        res2 = flow2.run(u0_rot, fo);
    }

    TranslatorSolver tsolver(s.plan);
    tsolver.set_phi(s.phi);
    TranslatorResult tr = tsolver.continuation(cfg.eps_schedule, nullptr, eps_options(cfg));
    tr.lambda_flow = res1.lambda_flow;

    DiagnosticsReport report =
        run_all_checks(*s.mesh, s.metric, u0, s.phi, res1, res2, tr);

    ensure_dir(cfg.output_dir);
    write_flow_outputs(cfg.output_dir + "/flow1", res1);
    write_flow_outputs(cfg.output_dir + "/flow2", res2);
    write_translator_outputs(cfg.output_dir, tr);
    write_diagnostics_csv(cfg.output_dir + "/diagnostics.csv", report);
    write_manifest(cfg.output_dir, cfg,
                   {{"flow.compat_repaired", repaired ? "true" : "false"},
                    {"verify.all_pass", report.all_pass() ? "true" : "false"}},
                   seconds_since(t0));

    for (const auto& c : report.checks) {
        std::cout << c.name << ": " << to_string(c.status) << " (margin " << format_g17(c.margin)
                  << ", tolerance " << format_g17(c.tolerance) << ")\n";
    }
    if (!report.all_pass()) return fail_with("verify-failed", "one or more checks failed");
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::vector<double>& a_grid, int jobs) {
    const auto t0 = Clock::now();
    if (a_grid.empty()) return fail_with("validation-error", "sweep grid is empty");
    if (jobs < 1) jobs = 1;

    ensure_dir(cfg.output_dir);
    std::vector<LambdaRow> rows(a_grid.size());
    std::vector<std::string> errors(a_grid.size());
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const size_t k = next.fetch_add(1);
            if (k >= a_grid.size()) return;
            try {
                RunConfig sub = cfg;
                sub.phi = PhiSpec{PhiKind::constant, a_grid[k], 1};
                char name[48];
                std::snprintf(name, sizeof name, "a_%03zu", k);
                sub.output_dir = cfg.output_dir + "/" + name;

                Scenario s = build_scenario(sub);
                TranslatorSolver ts(s.plan);
                ts.set_phi(s.phi);
                TranslatorResult tr = ts.continuation(sub.eps_schedule, nullptr, eps_options(sub));

                FlowSolver fs(s.plan);
                fs.set_phi(s.phi);
                FlowResult fr = fs.run(s.u0, flow_options(sub));
                tr.lambda_flow = fr.lambda_flow;

                ensure_dir(sub.output_dir);
                write_translator_outputs(sub.output_dir, tr);
                write_flow_outputs(sub.output_dir + "/flow", fr);
                rows[k] = {a_grid[k], tr.lambda_eps, tr.lambda_integral, fr.lambda_flow};
                if (fr.termination != FlowTermination::converged) {
                    errors[k] = "flow for a=" + format_g17(a_grid[k]) + " ended with " +
                                to_string(fr.termination);
                }
            } catch (const Error& e) {
                errors[k] = e.code() + ": " + e.what();
            } catch (const std::exception& e) {
                errors[k] = std::string("internal: ") + e.what();
            }
        }
    };

    const int nworkers = std::min<size_t>(jobs, a_grid.size());
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    write_lambda_vs_a_csv(cfg.output_dir + "/lambda_vs_a.csv", rows);
    write_manifest(cfg.output_dir, cfg,
                   {{"sweep.points", std::to_string(a_grid.size())},
                    {"sweep.jobs", std::to_string(nworkers)}},
                   seconds_since(t0));

    int rc = 0;
    for (size_t k = 0; k < a_grid.size(); ++k) {
        if (!errors[k].empty()) {
            std::cerr << "error: sweep-job-failed: " << errors[k] << "\n";
            rc = 1;
        }
    }
    return rc;
}

} // namespace tflow
