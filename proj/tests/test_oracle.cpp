#include <doctest.h>

#include <cmath>

#include "tflow/radial_ode.hpp"

using namespace tflow;

// Ground-truth values for the disk translator, frozen from the shooting
// oracle and cross-checked below against the divergence-theorem identity and
// the small-slope expansion.
static constexpr double kLambdaFlat01 = -0.199502896508;
static constexpr double kLambdaCap01 = -0.182554260840;

namespace {

// lambda = -(a f(R)/v(R)) / int_0^R f/v dr, the radial form of the integral
// identity, evaluated from the profile table by the trapezoid rule.
double lambda_from_profile(const RadialSolution& s, const MetricDescriptor& metric, double a,
                           double R) {
    const double qR = s.q.back();
    const double num = a * metric.f(R) / std::sqrt(1.0 + qR * qR);
    double den = 0.0;
    for (size_t k = 0; k + 1 < s.r.size(); ++k) {
        const double rm = 0.5 * (s.r[k] + s.r[k + 1]);
        const double qm = 0.5 * (s.q[k] + s.q[k + 1]);
        den += metric.f(rm) / std::sqrt(1.0 + qm * qm) * (s.r[k + 1] - s.r[k]);
    }
    return -num / den;
}

} // namespace

TEST_CASE("zero boundary data gives the zero translator") {
    auto sol = radial_oracle(0.0, MetricDescriptor::flat(), 1.0);
    CHECK(sol.lambda == 0.0);
    for (double w : sol.w) CHECK(w == 0.0);
}

TEST_CASE("flat unit disk, a = 0.1: pinned lambda with independent checks") {
    auto flat = MetricDescriptor::flat();
    auto sol = radial_oracle(0.1, flat, 1.0);
    CHECK(sol.lambda == doctest::Approx(kLambdaFlat01).epsilon(1e-8));

    // small-slope expansion lambda/2 + lambda^3/32 = -a + O(lambda^5)
    const double lam = sol.lambda;
    CHECK(std::fabs(lam / 2.0 + lam * lam * lam / 32.0 + 0.1) < 1e-5);

    // divergence-theorem identity on the profile itself
    CHECK(std::fabs(lambda_from_profile(sol, flat, 0.1, 1.0) - lam) < 1e-8);

    // boundary slope met to the bisection tolerance
    CHECK(std::fabs(sol.q.back() + 0.1) < 1e-9);

    // profile is normalized to zero metric mean
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k + 1 < sol.r.size(); ++k) {
        const double rm = 0.5 * (sol.r[k] + sol.r[k + 1]);
        const double wm = 0.5 * (sol.w[k] + sol.w[k + 1]);
        num += wm * flat.f(rm) * (sol.r[k + 1] - sol.r[k]);
        den += flat.f(rm) * (sol.r[k + 1] - sol.r[k]);
    }
    CHECK(std::fabs(num / den) < 1e-12);
}

TEST_CASE("sphere-cap R = 1, a = 0.1: pinned lambda with the integral identity") {
    auto cap = MetricDescriptor::sphere_cap();
    auto sol = radial_oracle(0.1, cap, 1.0);
    CHECK(sol.lambda == doctest::Approx(kLambdaCap01).epsilon(1e-8));
    CHECK(std::fabs(lambda_from_profile(sol, cap, 0.1, 1.0) - sol.lambda) < 1e-8);
}

TEST_CASE("odd symmetry: lambda(-a) = -lambda(a), w(-a) = -w(a)") {
    auto flat = MetricDescriptor::flat();
    auto plus = radial_oracle(0.1, flat, 1.0);
    auto minus = radial_oracle(-0.1, flat, 1.0);
    CHECK(std::fabs(plus.lambda + minus.lambda) < 1e-12);
    double wd = 0.0;
    for (size_t k = 0; k < plus.w.size(); ++k) {
        wd = std::fmax(wd, std::fabs(plus.w[k] + minus.w[k]));
    }
    CHECK(wd < 1e-10);
}

TEST_CASE("monotone slope-to-speed map on the sampled range") {
    auto flat = MetricDescriptor::flat();
    const double l1 = radial_oracle(0.05, flat, 1.0).lambda;
    const double l2 = radial_oracle(0.1, flat, 1.0).lambda;
    const double l3 = radial_oracle(0.2, flat, 1.0).lambda;
    CHECK(l1 > l2);
    CHECK(l2 > l3);
    CHECK(l1 < 0.0);
}
