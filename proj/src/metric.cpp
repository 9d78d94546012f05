#include "tflow/metric.hpp"

#include <cmath>

namespace tflow {

namespace {

void require_in_chart(const MetricDescriptor& desc, const ChartPoint& p) {
    if (!desc.in_chart(p)) {
        throw chart_error("chart point (" + std::to_string(p.w1) + ", " + std::to_string(p.w2) +
                          ") outside validity region of metric family " + desc.name());
    }
}

} // namespace

MetricDescriptor MetricDescriptor::flat() {
    return MetricDescriptor(MetricFamily::flat, RadialProfile::none, 1.0, 1e100);
}

MetricDescriptor MetricDescriptor::sphere_cap(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw validation_error("sphere-cap radius scale must be positive and finite");
    }
    // f = scale*sin(r/scale) stays bounded away from 0 up to this radius,
    // so sigma keeps a positive minimum eigenvalue on the whole chart.
    return MetricDescriptor(MetricFamily::sphere_cap, RadialProfile::none, scale,
                            scale * (M_PI - 1e-3));
}

MetricDescriptor MetricDescriptor::custom_diagonal(RadialProfile profile, double scale) {
    if (profile == RadialProfile::none) {
        throw validation_error("custom-diagonal metric requires a radial profile");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw validation_error("custom-diagonal scale must be positive and finite");
    }
    return MetricDescriptor(MetricFamily::custom_diagonal, profile, scale, scale * 30.0);
}

std::string MetricDescriptor::name() const {
    switch (family_) {
        case MetricFamily::flat: return "flat";
        case MetricFamily::sphere_cap: return "sphere-cap";
        case MetricFamily::custom_diagonal: return "custom-diagonal(sinh)";
    }
    return "?";
}

double MetricDescriptor::f(double r) const {
    switch (family_) {
        case MetricFamily::flat: return r;
        case MetricFamily::sphere_cap: return scale_ * std::sin(r / scale_);
        case MetricFamily::custom_diagonal: return scale_ * std::sinh(r / scale_);
    }
    return r;
}

double MetricDescriptor::df(double r) const {
    switch (family_) {
        case MetricFamily::flat: return 1.0;
        case MetricFamily::sphere_cap: return std::cos(r / scale_);
        case MetricFamily::custom_diagonal: return std::cosh(r / scale_);
    }
    return 1.0;
}

double MetricDescriptor::ddf(double r) const {
    switch (family_) {
        case MetricFamily::flat: return 0.0;
        case MetricFamily::sphere_cap: return -std::sin(r / scale_) / scale_;
        case MetricFamily::custom_diagonal: return std::sinh(r / scale_) / scale_;
    }
    return 0.0;
}

double MetricDescriptor::gauss_curvature(double) const {
    // K = -f''/f, constant for all built-in profiles.
    switch (family_) {
        case MetricFamily::flat: return 0.0;
        case MetricFamily::sphere_cap: return 1.0 / (scale_ * scale_);
        case MetricFamily::custom_diagonal: return -1.0 / (scale_ * scale_);
    }
    return 0.0;
}

MetricTensor metric_at(const MetricDescriptor& desc, const ChartPoint& p) {
    require_in_chart(desc, p);
    if (!desc.chart_is_polar()) return MetricTensor::identity();
    const double fr = desc.f(p.w1);
    return MetricTensor::diag(1.0, fr * fr);
}

MetricTensor inverse_metric_at(const MetricDescriptor& desc, const ChartPoint& p) {
    require_in_chart(desc, p);
    if (!desc.chart_is_polar()) return MetricTensor::identity();
    const double fr = desc.f(p.w1);
    return MetricTensor::diag(1.0, 1.0 / (fr * fr));
}

ChristoffelSymbols christoffel_at(const MetricDescriptor& desc, const ChartPoint& p) {
    require_in_chart(desc, p);
    ChristoffelSymbols c;
    if (!desc.chart_is_polar()) return c; // Cartesian chart: all zero
    const double fr = desc.f(p.w1);
    const double dfr = desc.df(p.w1);
    c.gamma[0][1][1] = -fr * dfr;      // Gamma^r_tt
    c.gamma[1][0][1] = dfr / fr;       // Gamma^t_rt
    c.gamma[1][1][0] = dfr / fr;       // Gamma^t_tr
    return c;
}

double gauss_curvature_at(const MetricDescriptor& desc, const ChartPoint& p) {
    require_in_chart(desc, p);
    return desc.gauss_curvature(desc.chart_radius(p));
}

double grad_norm_sq(const MetricTensor& sigma_inv, const std::array<double, 2>& du) {
    return sigma_inv.quad(du[0], du[1]);
}

MetricTensor flow_coeffs(const MetricTensor& sigma_inv, const std::array<double, 2>& du) {
    const double v2 = 1.0 + grad_norm_sq(sigma_inv, du);
    // D^i u = sigma^{ik} du_k
    const double up1 = sigma_inv.a11 * du[0] + sigma_inv.a12 * du[1];
    const double up2 = sigma_inv.a12 * du[0] + sigma_inv.a22 * du[1];
    return {sigma_inv.a11 - up1 * up1 / v2,
            sigma_inv.a12 - up1 * up2 / v2,
            sigma_inv.a22 - up2 * up2 / v2};
}

} // namespace tflow
