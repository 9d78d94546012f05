#include "tflow/flow.hpp"

#include <algorithm>
#include <cmath>

namespace tflow {

std::string to_string(FlowTermination t) {
    switch (t) {
        case FlowTermination::converged: return "converged";
        case FlowTermination::t_max_reached: return "no-convergence-by-t-max";
        case FlowTermination::blowup: return "blowup";
        case FlowTermination::compatibility_violation: return "compatibility-violation";
    }
    return "?";
}

FlowSolver::FlowSolver(PlanPtr plan) : plan_(std::move(plan)) {
    plan_->prepare(ws_);
    k_ = plan_->mesh().make_field();
    uh_ = plan_->mesh().make_field();
    phi_.assign(plan_->mesh().n_theta(), 0.0);
}

void FlowSolver::set_phi(std::vector<double> phi) {
    if (phi.size() != size_t(plan_->mesh().n_theta())) {
        throw mesh_mismatch("phi array length does not match boundary ring");
    }
    phi_ = std::move(phi);
}

ScalarField FlowSolver::rhs(const ScalarField& u) {
    ScalarField out = plan_->mesh().make_field();
    plan_->rhs(u, out, ws_);
    return out;
}

ScalarField FlowSolver::mean_curvature(const ScalarField& u) {
    const DiskMesh& m = plan_->mesh();
    ScalarField out = rhs(u);
    VectorField p = m.partials(u);
    for (int i = 0; i <= m.n_r(); ++i) {
        const double f = m.ring_f(i);
        const double stt = 1.0 / (f * f);
        for (int j = 0; j < m.n_theta(); ++j) {
            const size_t k = m.index(i, j);
            const double gsq = p.d_r[k] * p.d_r[k] + stt * p.d_theta[k] * p.d_theta[k];
            out.v[k] /= std::sqrt(1.0 + gsq);
        }
    }
    return out;
}

void FlowSolver::enforce_neumann(ScalarField& u) const { plan_->enforce_neumann(u, phi_); }

void FlowSolver::advance(ScalarField& u, double dt) {
    const size_t n = u.v.size();
    const auto& ops = kernels::active_ops();
    plan_->rhs(u, k_, ws_);
    ops.axpbyc(u.v.data(), k_.v.data(), 1.0, 0.5 * dt, 0.0, n, uh_.v.data());
    plan_->enforce_neumann(uh_, phi_);
    plan_->filter(uh_, ws_);
    plan_->rhs(uh_, k_, ws_);
    ops.axpbyc(u.v.data(), k_.v.data(), 1.0, dt, 0.0, n, u.v.data());
    plan_->enforce_neumann(u, phi_);
    plan_->filter(u, ws_);
}

FlowState FlowSolver::step(const FlowState& state, double dt) {
    FlowState next;
    next.u = state.u;
    advance(next.u, dt);
    next.t = state.t + dt;
    next.dt_last = dt;
    for (double x : next.u.v) {
        if (!std::isfinite(x)) throw blowup_error("non-finite update at t=" + std::to_string(next.t));
    }
    return next;
}

double FlowSolver::dt_max(const FlowState& state, double c_cfl) {
    const DiskMesh& m = plan_->mesh();
    VectorField p = m.partials(state.u);
    const double dr = m.dr(), dth = m.dtheta();
    double rate = 0.0;
    for (int i = 0; i < m.n_r(); ++i) {
        const double f = m.ring_f(i);
        const double stt = 1.0 / (f * f);
        const int mc = std::min(plan_->m_cut(i), m.n_theta() / 2);
        const double s = std::sin(0.5 * mc * dth);
        const double cap = s * s / (dth * dth);
        for (int j = 0; j < m.n_theta(); ++j) {
            const size_t k = m.index(i, j);
            const double ur = p.d_r[k], ut = p.d_theta[k];
            const double upt = stt * ut;
            const double v2 = 1.0 + ur * ur + upt * ut;
            const double g_rr = 1.0 - ur * ur / v2;
            const double g_tt = stt - upt * upt / v2;
            rate = std::fmax(rate, std::fmax(g_rr / (dr * dr), g_tt * cap));
        }
    }
    return c_cfl / rate;
}

double sup_grad_norm(const DiskMesh& mesh, const ScalarField& u) {
    VectorField p = mesh.partials(u);
    double sup = 0.0;
    for (int i = 0; i <= mesh.n_r(); ++i) {
        const double f = mesh.ring_f(i);
        const double stt = 1.0 / (f * f);
        for (int j = 0; j < mesh.n_theta(); ++j) {
            const size_t k = mesh.index(i, j);
            const double gsq = p.d_r[k] * p.d_r[k] + stt * p.d_theta[k] * p.d_theta[k];
            sup = std::fmax(sup, gsq);
        }
    }
    return std::sqrt(sup);
}

MonitorSample FlowSolver::measure(const ScalarField& u, double t) {
    const DiskMesh& m = plan_->mesh();
    plan_->rhs(u, k_, ws_);
    MonitorSample s;
    s.t = t;
    double ut_min = k_.v[0], ut_max = k_.v[0];
    for (double x : k_.v) {
        ut_min = std::fmin(ut_min, x);
        ut_max = std::fmax(ut_max, x);
    }
    s.sup_ut = std::fmax(std::fabs(ut_min), std::fabs(ut_max));
    s.osc_ut = ut_max - ut_min;
    s.sup_grad = sup_grad_norm(m, u);
    s.mean_u = m.mean(u);
    double u_min = u.v[0], u_max = u.v[0];
    for (double x : u.v) {
        u_min = std::fmin(u_min, x);
        u_max = std::fmax(u_max, x);
    }
    s.osc_u = u_max - u_min;
    return s;
}

FlowResult FlowSolver::run(const ScalarField& u0, const FlowOptions& opts) {
    const DiskMesh& m = plan_->mesh();
    m.require_same(u0);
    FlowResult res;

    ScalarField u = u0;
    {
        std::vector<double> nd = m.normal_derivative(u);
        double mis = 0.0;
        for (int j = 0; j < m.n_theta(); ++j) mis = std::fmax(mis, std::fabs(nd[j] - phi_[j]));
        res.compat_residual = mis;
        const double tol = 10.0 * m.h() * m.h();
        if (mis > tol) {
            if (!opts.repair_compatibility) {
                res.termination = FlowTermination::compatibility_violation;
                return res;
            }
            res.compat_repaired = true;
        }
    }
    // the boundary ring is algebraic state: make it consistent before the
    // first monitor sample
    plan_->enforce_neumann(u, phi_);
    plan_->filter(u, ws_);

    const double dt = dt_stable(opts.c_cfl);
    res.dt = dt;
    const int stride = std::max(1, opts.monitor_stride);
    const int snap_every = std::max(1, opts.snapshot_every);

    res.series.push_back(measure(u, 0.0));
    res.snapshots.push_back({0.0, u});
    res.termination = FlowTermination::t_max_reached;

    double t = 0.0;
    long steps = 0;
    int monitors = 0;
    bool done = false;
    while (!done) {
        double dt_step = dt;
        if (t + dt >= opts.t_max) {
            dt_step = opts.t_max - t;
            done = true;
        }
        advance(u, dt_step);
        t += dt_step;
        ++steps;

        if (steps % stride == 0 || done) {
            MonitorSample s = measure(u, t);
            if (!std::isfinite(s.sup_ut) || !std::isfinite(s.osc_u)) {
                res.termination = FlowTermination::blowup;
                res.t_final = t;
                res.steps = steps;
                return res;
            }
            res.series.push_back(s);
            ++monitors;
            if (monitors % snap_every == 0) res.snapshots.push_back({t, u});
            if (s.osc_ut < opts.tol_translate) {
                res.termination = FlowTermination::converged;
                done = true;
            }
        }
    }

    if (res.snapshots.back().t != t) res.snapshots.push_back({t, u});
    res.t_final = t;
    res.steps = steps;

    // lambda from the mean of u_t at termination
    plan_->rhs(u, k_, ws_);
    res.lambda_flow = m.mean(k_);

    // cross-check: least-squares slope of mean(u) over the final 20%
    const size_t n = res.series.size();
    size_t k0 = n - std::max<size_t>(2, n / 5);
    double st = 0, su = 0, stt = 0, stu = 0, cnt = 0;
    for (size_t k = k0; k < n; ++k) {
        const double tt = res.series[k].t, uu = res.series[k].mean_u;
        st += tt;
        su += uu;
        stt += tt * tt;
        stu += tt * uu;
        cnt += 1;
    }
    const double denom = cnt * stt - st * st;
    res.lambda_flow_fit = (denom != 0.0) ? (cnt * stu - st * su) / denom : res.lambda_flow;
    return res;
}

} // namespace tflow
