#include "tflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace tflow {

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::not_applicable: return "not-applicable";
    }
    return "?";
}

bool DiagnosticsReport::all_pass() const {
    for (const auto& c : checks) {
        if (c.status == CheckStatus::fail) return false;
    }
    return true;
}

const CheckResult* DiagnosticsReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

CheckResult check_compatibility(const DiskMesh& mesh, const ScalarField& u0,
                                const std::vector<double>& phi) {
    mesh.require_same(u0);
    if (phi.size() != size_t(mesh.n_theta())) throw mesh_mismatch("phi length mismatch");
    std::vector<double> nd = mesh.normal_derivative(u0);
    double mis = 0.0;
    for (int j = 0; j < mesh.n_theta(); ++j) mis = std::fmax(mis, std::fabs(nd[j] - phi[j]));
    CheckResult r{"compatibility", CheckStatus::pass, mis, 10.0 * mesh.h() * mesh.h()};
    if (mis > r.tolerance) r.status = CheckStatus::fail;
    return r;
}

HypothesesResult check_hypotheses(const MetricDescriptor& metric, const DiskMesh& mesh) {
    HypothesesResult out;

    // Ricci (= K sigma in 2-D) nonnegative over the sampled nodes.
    double kmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= mesh.n_r(); ++i) {
        kmin = std::fmin(kmin, metric.gauss_curvature(mesh.ring_r(i)));
    }
    out.ricci_nonneg = {"ricci_nonneg", kmin >= -1e-10 ? CheckStatus::pass : CheckStatus::fail,
                        kmin, 1e-10};

    // kappa_1: geodesic curvature of the boundary circle, measured from a
    // one-sided finite difference of the angular metric coefficient rather
    // than taken from the family's closed form.
    {
        const double R = mesh.R();
        const double hfd = mesh.dr() / 4.0;
        auto s2 = [&](double r) {
            const double f = metric.f(r);
            return f * f;
        };
        auto w = fd_weights({0.0, -hfd, -2.0 * hfd}, 1);
        const double ds2 = w[0] * s2(R) + w[1] * s2(R - hfd) + w[2] * s2(R - 2.0 * hfd);
        const double kappa1 = 0.5 * ds2 / s2(R); // f'/f
        out.boundary_convex = {"boundary_convex",
                               kappa1 > 0.0 ? CheckStatus::pass : CheckStatus::fail, kappa1, 0.0};
    }

    // Barrier beta = (r^2 - R^2) / (2R): measure its covariant Hessian lower
    // bound k_0, |D beta| <= 1, and D_nu beta = -1 with the mesh operators.
    {
        ScalarField beta = mesh.make_field();
        const double R = mesh.R();
        for (int i = 0; i <= mesh.n_r(); ++i) {
            const double r = mesh.ring_r(i);
            const double val = (r * r - R * R) / (2.0 * R);
            for (int j = 0; j < mesh.n_theta(); ++j) beta.v[mesh.index(i, j)] = val;
        }
        HessianField hess = mesh.covariant_hessian(beta);
        double k0 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < mesh.n_r(); ++i) {
            const double f = mesh.ring_f(i);
            for (int j = 0; j < mesh.n_theta(); ++j) {
                const size_t k = mesh.index(i, j);
                // sigma-relative eigenvalues of the Hessian (sigma diagonal)
                const double a = hess.h_rr[k];
                const double b = hess.h_rt[k] / f;
                const double c = hess.h_tt[k] / (f * f);
                const double tr = a + c;
                const double disc = std::sqrt(std::fmax(0.0, 0.25 * tr * tr - (a * c - b * b)));
                k0 = std::fmin(k0, 0.5 * tr - disc);
            }
        }
        const double supd = sup_grad_norm(mesh, beta);
        std::vector<double> nd = mesh.normal_derivative(beta);
        double bc = 0.0;
        for (double x : nd) bc = std::fmax(bc, std::fabs(x + 1.0));
        const double tol = 10.0 * mesh.h() * mesh.h();
        const bool ok = k0 > 0.0 && supd <= 1.0 + tol && bc <= tol;
        out.barrier_exists = {"barrier_exists", ok ? CheckStatus::pass : CheckStatus::fail, k0, 0.0};
    }
    return out;
}

CheckResult check_ut_max_principle(const FlowResult& flow, double h) {
    CheckResult r{"ut_max_principle", CheckStatus::not_applicable, 0.0, 0.0};
    if (flow.series.empty()) return r;
    const double sup0 = flow.series.front().sup_ut;
    double sup_max = 0.0;
    for (const auto& s : flow.series) sup_max = std::fmax(sup_max, s.sup_ut);
    r.margin = sup_max - sup0;
    r.tolerance = 1e-6 * sup0 + 10.0 * h * h;
    r.status = r.margin <= r.tolerance ? CheckStatus::pass : CheckStatus::fail;
    return r;
}

CheckResult check_gradient_bound_stable(const FlowResult& flow) {
    CheckResult r{"gradient_bound_stable", CheckStatus::not_applicable, 0.0, 0.0};
    if (flow.series.size() < 4) return r;
    const size_t half = flow.series.size() / 2;
    double runmax_half = 0.0, runmax_full = 0.0;
    for (size_t k = 0; k < flow.series.size(); ++k) {
        runmax_full = std::fmax(runmax_full, flow.series[k].sup_grad);
        if (k <= half) runmax_half = runmax_full;
    }
    r.margin = runmax_full - runmax_half;
    r.tolerance = std::fmax(1e-10, 1e-8 * runmax_full);
    r.status = r.margin <= r.tolerance ? CheckStatus::pass : CheckStatus::fail;
    return r;
}

namespace {

double osc_diff(const ScalarField& a, const ScalarField& b) {
    double lo = a.v[0] - b.v[0], hi = lo;
    for (size_t k = 0; k < a.v.size(); ++k) {
        const double d = a.v[k] - b.v[k];
        lo = std::fmin(lo, d);
        hi = std::fmax(hi, d);
    }
    return hi - lo;
}

} // namespace

CheckResult check_osc_contraction(const FlowResult& a, const FlowResult& b, double h) {
    CheckResult r{"osc_contraction", CheckStatus::not_applicable, 0.0, 10.0 * h * h};
    const size_t n = std::min(a.snapshots.size(), b.snapshots.size());
    if (n < 2) throw incompatible_runs("osc contraction needs two runs with shared snapshots");
    std::vector<double> osc(n);
    for (size_t k = 0; k < n; ++k) {
        if (std::fabs(a.snapshots[k].t - b.snapshots[k].t) > 1e-9 * (1.0 + a.snapshots[k].t)) {
            throw incompatible_runs("snapshot times differ between runs");
        }
        if (!a.snapshots[k].u.mesh || !b.snapshots[k].u.mesh ||
            a.snapshots[k].u.mesh->id() != b.snapshots[k].u.mesh->id()) {
            throw incompatible_runs("runs use different meshes");
        }
        osc[k] = osc_diff(a.snapshots[k].u, b.snapshots[k].u);
    }
    double worst_rise = 0.0;
    for (size_t k = 1; k < n; ++k) worst_rise = std::fmax(worst_rise, osc[k] - osc[k - 1]);
    bool ok = worst_rise <= r.tolerance;
    if (osc.front() > r.tolerance && !(osc.back() < osc.front())) ok = false;
    r.margin = worst_rise;
    r.status = ok ? CheckStatus::pass : CheckStatus::fail;
    return r;
}

CheckResult check_drift_bounded(const FlowResult& flow, double lambda, double h) {
    CheckResult r{"drift_bounded", CheckStatus::not_applicable, 0.0, 10.0 * h * h};
    if (flow.series.size() < 4) return r;
    const size_t half = flow.series.size() / 2;
    double runmax_half = 0.0, runmax_full = 0.0;
    for (size_t k = 0; k < flow.series.size(); ++k) {
        const auto& s = flow.series[k];
        const double drift = std::fabs(s.mean_u - lambda * s.t) + s.osc_u;
        runmax_full = std::fmax(runmax_full, drift);
        if (k <= half) runmax_half = runmax_full;
    }
    r.margin = runmax_full - runmax_half;
    r.status = r.margin <= r.tolerance ? CheckStatus::pass : CheckStatus::fail;
    return r;
}

CheckResult check_translator_convergence(const FlowResult& flow, const TranslatorResult& tr,
                                         double h) {
    if (flow.snapshots.empty() || !tr.w.mesh) {
        throw incompatible_runs("translator convergence needs a flow snapshot and a profile");
    }
    const ScalarField& uT = flow.snapshots.back().u;
    if (uT.mesh->id() != tr.w.mesh->id()) throw incompatible_runs("runs use different meshes");
    CheckResult r{"translator_convergence", CheckStatus::not_applicable, 0.0,
                  std::fmax(1e-4, 100.0 * h * h)};
    r.margin = osc_diff(uT, tr.w);
    const CheckResult drift = check_drift_bounded(flow, tr.lambda_eps, h);
    r.status = (r.margin < r.tolerance && drift.status == CheckStatus::pass) ? CheckStatus::pass
                                                                             : CheckStatus::fail;
    return r;
}

DiagnosticsReport run_all_checks(const DiskMesh& mesh, const MetricDescriptor& metric,
                                 const ScalarField& u0, const std::vector<double>& phi,
                                 const FlowResult& flow1, const FlowResult& flow2,
                                 const TranslatorResult& tr) {
    DiagnosticsReport rep;
    const double h = mesh.h();
    rep.checks.push_back(check_compatibility(mesh, u0, phi));
    HypothesesResult hyp = check_hypotheses(metric, mesh);
    rep.checks.push_back(hyp.ricci_nonneg);
    rep.checks.push_back(hyp.boundary_convex);
    rep.checks.push_back(hyp.barrier_exists);
    rep.checks.push_back(check_ut_max_principle(flow1, h));
    rep.checks.push_back(check_gradient_bound_stable(flow1));
    rep.checks.push_back(check_osc_contraction(flow1, flow2, h));
    rep.checks.push_back(check_drift_bounded(flow1, tr.lambda_eps, h));
    rep.checks.push_back(check_translator_convergence(flow1, tr, h));
    return rep;
}

} // namespace tflow
