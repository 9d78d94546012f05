#include <doctest.h>

#include <cmath>

#include "tflow/diagnostics.hpp"

using namespace tflow;

namespace {

PlanPtr make_plan(MeshPtr mesh) { return std::make_shared<kernels::OperatorPlan>(mesh); }

FlowResult fabricate_series(const std::vector<double>& sup_ut, const std::vector<double>& sup_grad) {
    FlowResult r;
    for (size_t k = 0; k < sup_ut.size(); ++k) {
        MonitorSample s;
        s.t = double(k);
        s.sup_ut = sup_ut[k];
        s.sup_grad = k < sup_grad.size() ? sup_grad[k] : 0.0;
        s.osc_ut = 0.0;
        s.mean_u = 0.0;
        s.osc_u = 0.0;
        r.series.push_back(s);
    }
    return r;
}

} // namespace

TEST_CASE("compatibility check: repaired data passes, mismatched data fails") {
    auto mesh = DiskMesh::build(MetricDescriptor::flat(), 1.0, 48, 96);
    auto plan = make_plan(mesh);
    std::vector<double> phi(mesh->n_theta(), 0.1);

    ScalarField u0(mesh);
    CheckResult bad = check_compatibility(*mesh, u0, phi);
    CHECK(bad.status == CheckStatus::fail);
    CHECK(bad.margin == doctest::Approx(0.1).epsilon(1e-12));

    plan->enforce_neumann(u0, phi);
    CheckResult good = check_compatibility(*mesh, u0, phi);
    CHECK(good.status == CheckStatus::pass);
    CHECK(good.margin < 1e-12);
}

TEST_CASE("hypotheses on the flat disk: closed forms") {
    auto mesh = DiskMesh::build(MetricDescriptor::flat(), 1.0, 32, 64);
    HypothesesResult hyp = check_hypotheses(MetricDescriptor::flat(), *mesh);
    const double tol = 10.0 * mesh->h() * mesh->h();
    CHECK(hyp.ricci_nonneg.status == CheckStatus::pass);
    CHECK(hyp.ricci_nonneg.margin == 0.0);
    CHECK(hyp.boundary_convex.status == CheckStatus::pass);
    CHECK(std::fabs(hyp.boundary_convex.margin - 1.0) < tol); // kappa_1 = 1/R
    CHECK(hyp.barrier_exists.status == CheckStatus::pass);
    CHECK(std::fabs(hyp.barrier_exists.margin - 1.0) < tol); // k_0 = 1/R
}

TEST_CASE("hypotheses on the sphere cap and the hyperbolic counterexample") {
    auto cap = DiskMesh::build(MetricDescriptor::sphere_cap(), 1.0, 32, 64);
    HypothesesResult hyp = check_hypotheses(MetricDescriptor::sphere_cap(), *cap);
    CHECK(hyp.ricci_nonneg.status == CheckStatus::pass);
    CHECK(hyp.ricci_nonneg.margin == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hyp.boundary_convex.status == CheckStatus::pass);
    CHECK(std::fabs(hyp.boundary_convex.margin - 1.0 / std::tan(1.0)) <
          0.05 / std::tan(1.0)); // cot(1) within 5%
    CHECK(hyp.barrier_exists.status == CheckStatus::pass);

    auto hypb = DiskMesh::build(MetricDescriptor::custom_diagonal(RadialProfile::sinh_profile),
                                1.0, 32, 64);
    HypothesesResult neg =
        check_hypotheses(MetricDescriptor::custom_diagonal(RadialProfile::sinh_profile), *hypb);
    CHECK(neg.ricci_nonneg.status == CheckStatus::fail);
    CHECK(neg.ricci_nonneg.margin == doctest::Approx(-1.0).epsilon(1e-12));
    // the disk in the hyperbolic plane is still convex
    CHECK(neg.boundary_convex.status == CheckStatus::pass);
}

TEST_CASE("convexity is measured, not assumed: cap disks past the equator fail") {
    // below the equator the geodesic circle is convex ...
    auto inside = DiskMesh::build(MetricDescriptor::sphere_cap(), 1.4, 32, 64);
    HypothesesResult a = check_hypotheses(MetricDescriptor::sphere_cap(), *inside);
    CHECK(a.boundary_convex.status == CheckStatus::pass);
    CHECK(a.boundary_convex.margin == doctest::Approx(1.0 / std::tan(1.4)).epsilon(1e-3));

    // ... beyond it kappa_1 = cot R < 0 and both boundary checks flip
    auto beyond = DiskMesh::build(MetricDescriptor::sphere_cap(), 1.8, 32, 64);
    HypothesesResult b = check_hypotheses(MetricDescriptor::sphere_cap(), *beyond);
    CHECK(b.boundary_convex.status == CheckStatus::fail);
    CHECK(b.boundary_convex.margin < 0.0);
    CHECK(b.barrier_exists.status == CheckStatus::fail);
    // the curvature hypothesis still holds there
    CHECK(b.ricci_nonneg.status == CheckStatus::pass);
}

TEST_CASE("u_t maximum principle checker and its self-test") {
    const double h = 0.05;
    FlowResult ok = fabricate_series({1.0, 0.9, 0.5, 0.2, 0.2}, {});
    CHECK(check_ut_max_principle(ok, h).status == CheckStatus::pass);

    FlowResult spiked = fabricate_series({1.0, 0.9, 1.6, 0.2, 0.2}, {});
    CHECK(check_ut_max_principle(spiked, h).status == CheckStatus::fail);

    // transient boundary excess within the discrete slack still passes
    FlowResult slack = fabricate_series({1.0, 1.0 + 5.0 * h * h, 0.5}, {});
    CHECK(check_ut_max_principle(slack, h).status == CheckStatus::pass);
}

TEST_CASE("gradient stability checker and its self-test") {
    FlowResult ok = fabricate_series({}, {});
    ok = fabricate_series({0, 0, 0, 0, 0, 0}, {0.5, 0.8, 0.9, 0.9, 0.9, 0.9});
    CHECK(check_gradient_bound_stable(ok).status == CheckStatus::pass);
    FlowResult growing = fabricate_series({0, 0, 0, 0, 0, 0}, {0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
    CHECK(check_gradient_bound_stable(growing).status == CheckStatus::fail);
}

TEST_CASE("oscillation contraction checker and its self-test") {
    auto mesh = DiskMesh::build(MetricDescriptor::flat(), 1.0, 16, 32);
    auto field_of = [&](double amp) {
        ScalarField f(mesh);
        for (int i = 0; i <= mesh->n_r(); ++i) {
            for (int j = 0; j < mesh->n_theta(); ++j) {
                f.v[mesh->index(i, j)] = amp * mesh->ring_r(i) * std::cos(mesh->theta(j));
            }
        }
        return f;
    };
    const double h = mesh->h();

    // constant difference: osc identically zero, degenerate pass
    FlowResult a, b;
    for (int k = 0; k < 4; ++k) {
        ScalarField f = field_of(0.3 / (k + 1));
        a.snapshots.push_back({double(k), f});
        ScalarField g = f;
        for (double& x : g.v) x += 3.0;
        b.snapshots.push_back({double(k), g});
    }
    CHECK(check_osc_contraction(a, b, h).status == CheckStatus::pass);

    // decaying difference passes; the reversed series fails
    FlowResult c, d;
    for (int k = 0; k < 4; ++k) {
        c.snapshots.push_back({double(k), field_of(0.5 / (k + 1))});
        d.snapshots.push_back({double(k), field_of(0.0)});
    }
    CHECK(check_osc_contraction(c, d, h).status == CheckStatus::pass);
    FlowResult rev = c;
    std::reverse(rev.snapshots.begin(), rev.snapshots.end());
    for (size_t k = 0; k < rev.snapshots.size(); ++k) rev.snapshots[k].t = double(k);
    CHECK(check_osc_contraction(rev, d, h).status == CheckStatus::fail);

    // incompatible runs are an error
    FlowResult offset = c;
    offset.snapshots[1].t += 0.5;
    CHECK_THROWS_AS(check_osc_contraction(offset, d, h), Error);
}

TEST_CASE("drift checker fails when lambda is off by ten percent") {
    const double lambda = -0.2;
    auto make = [&](double lam_used) {
        FlowResult r;
        for (int k = 0; k < 40; ++k) {
            MonitorSample s;
            s.t = k * 1.0;
            s.mean_u = lambda * s.t; // the truth
            s.osc_u = 0.05;
            r.series.push_back(s);
        }
        (void)lam_used;
        return r;
    };
    FlowResult r = make(lambda);
    CHECK(check_drift_bounded(r, lambda, 0.05).status == CheckStatus::pass);
    CHECK(check_drift_bounded(r, lambda * 1.1, 0.05).status == CheckStatus::fail);
}

TEST_CASE("translator convergence checker: exact profile passes, perturbed lambda fails") {
    auto mesh = DiskMesh::build(MetricDescriptor::flat(), 1.0, 16, 32);
    ScalarField w(mesh);
    for (int i = 0; i <= mesh->n_r(); ++i) {
        for (int j = 0; j < mesh->n_theta(); ++j) {
            const double r = mesh->ring_r(i);
            w.v[mesh->index(i, j)] = -0.05 * r * r;
        }
    }
    TranslatorResult tr;
    tr.w = w;
    tr.lambda_eps = -0.2;

    FlowResult flow;
    for (int k = 0; k < 40; ++k) {
        MonitorSample s;
        s.t = k * 0.5;
        s.mean_u = tr.lambda_eps * s.t;
        s.osc_u = 0.05;
        flow.series.push_back(s);
    }
    ScalarField uT = w;
    for (double& x : uT.v) x += tr.lambda_eps * 19.5 + 1.0; // + constant: still the same profile
    flow.snapshots.push_back({19.5, uT});
    const double h = 0.05;
    CHECK(check_translator_convergence(flow, tr, h).status == CheckStatus::pass);

    TranslatorResult bad = tr;
    bad.lambda_eps *= 1.1; // drift |mean_u - lambda t| then grows linearly
    CHECK(check_translator_convergence(flow, bad, h).status == CheckStatus::fail);
}
