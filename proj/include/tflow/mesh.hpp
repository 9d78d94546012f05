#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "tflow/metric.hpp"

namespace tflow {

class DiskMesh;
using MeshPtr = std::shared_ptr<const DiskMesh>;

// Node-indexed real values bound to a mesh: interior nodes ring-major
// (index i*n_theta + j), then the boundary ring appended.
struct ScalarField {
    MeshPtr mesh;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(MeshPtr m);

    double& operator[](size_t k) { return v[k]; }
    double operator[](size_t k) const { return v[k]; }
    size_t size() const { return v.size(); }
};

struct VectorField {
    MeshPtr mesh;
    std::vector<double> d_r;     // partial in r (one-sided on the boundary ring)
    std::vector<double> d_theta; // partial in theta
};

// Covariant Hessian at interior nodes, symmetric storage.
struct HessianField {
    MeshPtr mesh;
    std::vector<double> h_rr;
    std::vector<double> h_rt;
    std::vector<double> h_tt;
};

// Radial stencil rows: [two-below, below, center, above]. "below" at ring 0
// is the ring itself shifted by pi (across-origin pairing); "above" at the
// last interior ring is the boundary ring at distance dr/2.
struct RadialStencil {
    std::array<double, 4> c1 = {}; // first derivative
    std::array<double, 4> c2 = {}; // second derivative
};

// Logically rectangular polar mesh over the chart disk of radius R.
// Interior nodes at r_i = (i+1/2) dr, theta_j = j dtheta, plus one boundary
// ring at r = R. Immutable after construction.
class DiskMesh : public std::enable_shared_from_this<DiskMesh> {
public:
    static MeshPtr build(const MetricDescriptor& metric, double R, int n_r, int n_theta);

    const MetricDescriptor& metric() const { return metric_; }
    int n_r() const { return n_r_; }
    int n_theta() const { return n_theta_; }
    double R() const { return R_; }
    double dr() const { return dr_; }
    double dtheta() const { return dtheta_; }
    std::uint64_t id() const { return id_; }

    size_t n_interior() const { return size_t(n_r_) * n_theta_; }
    size_t n_total() const { return size_t(n_r_ + 1) * n_theta_; }
    size_t index(int i, int j) const { return size_t(i) * n_theta_ + j; }
    size_t boundary_index(int j) const { return n_interior() + j; }

    // ring 0..n_r-1 interior, ring n_r = boundary
    double ring_r(int i) const { return ring_r_[i]; }
    double ring_f(int i) const { return ring_f_[i]; }
    double ring_df(int i) const { return ring_df_[i]; }
    double theta(int j) const { return j * dtheta_; }
    ChartPoint node(int i, int j) const { return metric_.chart_point(ring_r_[i], theta(j)); }

    double area_weight(int i) const { return ring_f_[i] * dr_ * dtheta_; }
    double boundary_weight() const { return ring_f_[n_r_] * dtheta_; }
    double domain_area() const { return domain_area_; }

    // Inward unit normal at boundary node j, polar-frame components.
    std::array<double, 2> normal(int j) const { (void)j; return {-1.0, 0.0}; }

    const RadialStencil& radial_stencil(int i) const { return stencils_[i]; }
    // One-sided first derivative at r = R over rows [boundary, ring n_r-1,
    // ring n_r-2] (distances 0, dr/2, 3dr/2 inward).
    const std::array<double, 3>& boundary_stencil() const { return bdry_c1_; }

    // Resolution scale used by h^2-proportional tolerances.
    double h() const { return h_; }

    ScalarField make_field() const;
    void require_same(const ScalarField& f) const;

    // --- discrete operators (scalar reference path) ---
    VectorField partials(const ScalarField& f) const;
    HessianField covariant_hessian(const ScalarField& f) const;
    std::vector<double> normal_derivative(const ScalarField& f) const;
    double integrate_domain(const ScalarField& f) const;
    double integrate_boundary(const ScalarField& f) const;
    double integrate_boundary(const std::vector<double>& boundary_values) const;
    double mean(const ScalarField& f) const; // area-weighted interior mean

private:
    DiskMesh() = default;

    MetricDescriptor metric_ = MetricDescriptor::flat();
    int n_r_ = 0, n_theta_ = 0;
    double R_ = 0, dr_ = 0, dtheta_ = 0, h_ = 0, domain_area_ = 0;
    std::uint64_t id_ = 0;
    std::vector<double> ring_r_, ring_f_, ring_df_;
    std::vector<RadialStencil> stencils_;
    std::array<double, 3> bdry_c1_ = {};
};

// Finite-difference weights for the m-th derivative at 0 from the given
// sample offsets (small dense Vandermonde solve).
std::vector<double> fd_weights(const std::vector<double>& offsets, int order);

} // namespace tflow
