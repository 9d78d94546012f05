#include "tflow/radial_ode.hpp"

#include <cmath>
#include <limits>

namespace tflow {

namespace {

struct ShootResult {
    double q_end = 0.0;
    bool diverged = false;
};

// Integrates q' = (1+q^2)(lambda - q f'/f) from r0 to R; optionally records
// the accumulated profile w' = q at every step.
ShootResult shoot(double lambda, const MetricDescriptor& metric, double r0, double R,
                  int steps, std::vector<double>* r_out, std::vector<double>* w_out,
                  std::vector<double>* q_out) {
    const double h = (R - r0) / steps;
    auto dq = [&](double r, double q) {
        return (1.0 + q * q) * (lambda - q * metric.df(r) / metric.f(r));
    };

    double r = r0;
    double q = 0.5 * lambda * r0; // series expansion at the origin
    double w = 0.0;
    if (r_out) {
        r_out->push_back(r);
        w_out->push_back(w);
        q_out->push_back(q);
    }
    for (int k = 0; k < steps; ++k) {
        const double k1 = dq(r, q);
        const double k2 = dq(r + 0.5 * h, q + 0.5 * h * k1);
        const double k3 = dq(r + 0.5 * h, q + 0.5 * h * k2);
        const double k4 = dq(r + h, q + h * k3);
        const double q_next = q + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // trapezoid on w' = q is consistent with the RK4 endpoint values
        w += 0.5 * h * (q + q_next);
        q = q_next;
        r = r0 + (k + 1) * h;
        if (!std::isfinite(q) || std::fabs(q) > 1e8) {
            return {q, true};
        }
        if (r_out) {
            r_out->push_back(r);
            w_out->push_back(w);
            q_out->push_back(q);
        }
    }
    return {q, false};
}

} // namespace

RadialSolution radial_oracle(double a, const MetricDescriptor& metric, double R, int samples) {
    if (!(R > 0.0) || R >= metric.chart_radial_bound()) {
        throw radius_error("radial oracle: disk radius outside chart");
    }
    if (samples < 100) samples = 100;
    const double r0 = R * 1e-9;

    RadialSolution sol;
    if (a == 0.0) {
        sol.lambda = 0.0;
        sol.r.resize(samples + 1);
        sol.w.assign(samples + 1, 0.0);
        sol.q.assign(samples + 1, 0.0);
        for (int k = 0; k <= samples; ++k) sol.r[k] = r0 + (R - r0) * k / samples;
        return sol;
    }

    // Mismatch S(lambda) = q(R; lambda) + a; increasing in lambda, S(0) = a.
    auto mismatch = [&](double lambda) {
        ShootResult s = shoot(lambda, metric, r0, R, samples, nullptr, nullptr, nullptr);
        if (s.diverged) return s.q_end > 0 ? std::numeric_limits<double>::infinity()
                                           : -std::numeric_limits<double>::infinity();
        return s.q_end + a;
    };

    double lo, hi;
    if (a > 0.0) {
        hi = 0.0;
        lo = -std::fmax(4.0 * a, 0.05);
        int tries = 0;
        while (mismatch(lo) > 0.0) {
            lo *= 2.0;
            if (++tries > 60) {
                throw bracket_error("radial oracle: no bracket for boundary slope a=" +
                                    std::to_string(a) + " (slope saturates)");
            }
        }
    } else {
        lo = 0.0;
        hi = std::fmax(-4.0 * a, 0.05);
        int tries = 0;
        while (mismatch(hi) < 0.0) {
            hi *= 2.0;
            if (++tries > 60) {
                throw bracket_error("radial oracle: no bracket for boundary slope a=" +
                                    std::to_string(a) + " (slope saturates)");
            }
        }
    }

    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double s = mismatch(mid);
        if (s > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo < 1e-14 * std::fmax(1.0, std::fabs(mid))) break;
    }
    sol.lambda = 0.5 * (lo + hi);

    ShootResult fin =
        shoot(sol.lambda, metric, r0, R, samples, &sol.r, &sol.w, &sol.q);
    if (fin.diverged) {
        throw bracket_error("radial oracle: profile integration diverged at lambda=" +
                            std::to_string(sol.lambda));
    }

    // Normalize to zero mean against the metric area element f(r) dr dtheta.
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k + 1 < sol.r.size(); ++k) {
        const double rm = 0.5 * (sol.r[k] + sol.r[k + 1]);
        const double wm = 0.5 * (sol.w[k] + sol.w[k + 1]);
        const double dr = sol.r[k + 1] - sol.r[k];
        num += wm * metric.f(rm) * dr;
        den += metric.f(rm) * dr;
    }
    const double mean = num / den;
    for (double& w : sol.w) w -= mean;
    return sol;
}

} // namespace tflow
