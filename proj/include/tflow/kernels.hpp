#pragma once

#include <array>
#include <string>
#include <vector>

#include "tflow/mesh.hpp"

namespace tflow::kernels {

// Per-ring geometry and stencil pack consumed by the fused RHS kernel.
// Radial stencil rows are [two-below, below, center, above]; pointers passed
// to the kernel are offset into padded rows so that [j-1] and [j+1] are valid
// for the whole ring.
struct RingGeom {
    std::array<double, 4> c1 = {};
    std::array<double, 4> c2 = {};
    double sig_tt_inv = 0.0; // sigma^{theta theta} = 1/f^2
    double gam_t_rt = 0.0;   // Gamma^theta_{r theta} = f'/f
    double gam_ff = 0.0;     // f f'  (H_tt = u_tt + gam_ff * u_r)
};

using RhsRingFn = void (*)(const double* bm2, const double* bm1, const double* c,
                           const double* ap, const RingGeom& g, double inv_2dt,
                           double inv_dt2, int nt, double* out);
// out[j] = sum_l kern[l] * src2x[j + l], src2x holds the ring twice.
using FilterRingFn = void (*)(const double* src2x, const double* kern, int nt, double* out);
// out[k] = a * x[k] + b * y[k] + c
using AxpbycFn = void (*)(const double* x, const double* y, double a, double b, double c,
                          size_t n, double* out);

struct KernelOps {
    RhsRingFn rhs_ring = nullptr;
    FilterRingFn filter_ring = nullptr;
    AxpbycFn axpbyc = nullptr;
    const char* name = "";
};

const KernelOps& scalar_ops();
bool avx2_available();
const KernelOps& avx2_ops(); // valid only if avx2_available()

// Active backend: AVX2 when the CPU supports it, overridable with
// TFLOW_KERNEL=scalar|avx2 or set_backend().
const KernelOps& active_ops();
void set_backend(const std::string& name);

// Scratch buffers reused across operator applications.
struct Workspace {
    std::vector<double> padded;  // (n_r + 1) rows, stride nt + 2
    std::vector<double> shifted; // across-origin copy of ring 0, padded
    std::vector<double> ringbuf; // 2 * nt, for the filter
};

// Precomputed application plan for one mesh: stencil packs, the angular
// low-pass kernels that stabilize the origin, Neumann coefficients, and the
// parabolic step bound. Immutable; safe to share across sequential runs.
class OperatorPlan {
public:
    explicit OperatorPlan(MeshPtr mesh, double filter_c = 0.0 /* 0 -> default pi */);

    const DiskMesh& mesh() const { return *mesh_; }
    MeshPtr mesh_ptr() const { return mesh_; }

    // Largest per-direction parabolic rate of the sigma-coefficient operator
    // on the filtered grid; g^{ij} <= sigma^{ij} keeps this an upper bound
    // for every solution state.
    double max_rate() const { return max_rate_; }
    double dt_stable(double c_cfl) const { return c_cfl / max_rate_; }

    int filtered_rings() const { return filtered_rings_; }
    int m_cut(int ring) const { return m_cut_[ring]; }

    // Quasilinear operator sum g^{ij}(Du) D_i D_j u at interior nodes;
    // boundary row of `out` is extrapolated from the last three interior
    // rings (used only by monitors).
    void rhs(const ScalarField& u, ScalarField& out, Workspace& ws) const;

    // Angular low-pass projection of the inner rings, in place.
    void filter(ScalarField& u, Workspace& ws) const;

    // Overwrites the boundary ring so that D_nu u = phi holds in the
    // one-sided stencil.
    void enforce_neumann(ScalarField& u, const std::vector<double>& phi) const;

    void prepare(Workspace& ws) const;

private:
    MeshPtr mesh_;
    std::vector<RingGeom> rings_;
    std::vector<int> m_cut_;
    std::vector<std::vector<double>> filter_kernels_;
    int filtered_rings_ = 0;
    double inv_2dt_ = 0, inv_dt2_ = 0, max_rate_ = 0;
    std::array<double, 3> extrap_ = {};
    std::array<double, 3> bdry_c1_ = {};
};

} // namespace tflow::kernels
