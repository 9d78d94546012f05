#pragma once

#include <array>
#include <cmath>
#include <string>

#include "tflow/errors.hpp"

namespace tflow {

// Point in the chart a metric family is declared on. The flat family uses a
// Cartesian chart (w1, w2) = (x, y); the curved families use a geodesic polar
// chart (w1, w2) = (r, theta).
struct ChartPoint {
    double w1 = 0.0;
    double w2 = 0.0;
};

// Symmetric 2x2 tensor, stored as the independent entries.
struct MetricTensor {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    static MetricTensor identity() { return {1.0, 0.0, 1.0}; }
    static MetricTensor diag(double d1, double d2) { return {d1, 0.0, d2}; }

    double det() const { return a11 * a22 - a12 * a12; }

    MetricTensor inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, a11 / d};
    }

    // q(xi) = a_ij xi^i xi^j
    double quad(double x1, double x2) const {
        return a11 * x1 * x1 + 2.0 * a12 * x1 * x2 + a22 * x2 * x2;
    }

    // Eigenvalues of the symmetric matrix, ascending.
    std::array<double, 2> eigenvalues() const {
        const double tr = a11 + a22;
        const double disc = std::sqrt(std::fmax(0.0, 0.25 * tr * tr - det()));
        return {0.5 * tr - disc, 0.5 * tr + disc};
    }
};

// gamma[k][i][j] = Gamma^k_ij, symmetric in (i, j).
struct ChristoffelSymbols {
    double gamma[2][2][2] = {};
};

enum class MetricFamily {
    flat,            // Euclidean plane, Cartesian chart
    sphere_cap,      // round sphere of radius `scale`, geodesic polar chart
    custom_diagonal, // dr^2 + f(r)^2 dtheta^2 with a named profile f
};

enum class RadialProfile {
    none,
    sinh_profile, // f(r) = scale * sinh(r / scale), K = -1/scale^2
};

// Analytic metric family on a chart. Every family also exposes its geodesic
// polar form f(r) (flat: f = r), which is what the mesh differentiates
// against; the chart-facing operations below report components in the
// family's declared chart.
class MetricDescriptor {
public:
    static MetricDescriptor flat();
    static MetricDescriptor sphere_cap(double scale = 1.0);
    static MetricDescriptor custom_diagonal(RadialProfile profile, double scale = 1.0);

    MetricFamily family() const { return family_; }
    double scale() const { return scale_; }
    RadialProfile profile() const { return profile_; }
    std::string name() const;

    bool chart_is_polar() const { return family_ != MetricFamily::flat; }

    // Upper bound on the geodesic radius covered by the chart. Polar charts
    // additionally exclude the coordinate origin r = 0.
    double chart_radial_bound() const { return radial_bound_; }

    // Geodesic radius of a chart point.
    double chart_radius(const ChartPoint& p) const {
        return chart_is_polar() ? p.w1 : std::hypot(p.w1, p.w2);
    }

    bool in_chart(const ChartPoint& p) const {
        if (!std::isfinite(p.w1) || !std::isfinite(p.w2)) return false;
        const double r = chart_radius(p);
        if (chart_is_polar() && r <= 0.0) return false;
        return r < radial_bound_;
    }

    // Chart point for a mesh node at polar position (r, theta).
    ChartPoint chart_point(double r, double theta) const {
        if (chart_is_polar()) return {r, theta};
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    // Geodesic polar form sigma = dr^2 + f(r)^2 dtheta^2.
    double f(double r) const;
    double df(double r) const;
    double ddf(double r) const;

    // Gaussian curvature at geodesic radius r (constant for all built-ins).
    double gauss_curvature(double r) const;

private:
    MetricDescriptor(MetricFamily fam, RadialProfile prof, double scale, double bound)
        : family_(fam), profile_(prof), scale_(scale), radial_bound_(bound) {}

    MetricFamily family_;
    RadialProfile profile_;
    double scale_;
    double radial_bound_;
};

// --- chart-facing operations -------------------------------------------

MetricTensor metric_at(const MetricDescriptor& desc, const ChartPoint& p);
MetricTensor inverse_metric_at(const MetricDescriptor& desc, const ChartPoint& p);
ChristoffelSymbols christoffel_at(const MetricDescriptor& desc, const ChartPoint& p);
double gauss_curvature_at(const MetricDescriptor& desc, const ChartPoint& p);

// --- pointwise graph-flow algebra (chart independent) --------------------

// |Du|^2 = sigma^{ij} du_i du_j.
double grad_norm_sq(const MetricTensor& sigma_inv, const std::array<double, 2>& du);

// g^{ij} = sigma^{ij} - D^i u D^j u / (1 + |Du|^2).
MetricTensor flow_coeffs(const MetricTensor& sigma_inv, const std::array<double, 2>& du);

} // namespace tflow
