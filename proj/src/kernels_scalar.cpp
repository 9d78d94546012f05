#include "tflow/kernels.hpp"

namespace tflow::kernels {

namespace {

void rhs_ring_scalar(const double* bm2, const double* bm1, const double* c, const double* ap,
                     const RingGeom& g, double inv_2dt, double inv_dt2, int nt, double* out) {
    for (int j = 0; j < nt; ++j) {
        // stencils act on differences from the center value so constants are
        // annihilated exactly
        const double d_bm2 = bm2[j] - c[j];
        const double d_bm1 = bm1[j] - c[j];
        const double d_ap = ap[j] - c[j];
        const double u_r = g.c1[0] * d_bm2 + g.c1[1] * d_bm1 + g.c1[3] * d_ap;
        const double u_rr = g.c2[0] * d_bm2 + g.c2[1] * d_bm1 + g.c2[3] * d_ap;
        const double u_t = (c[j + 1] - c[j - 1]) * inv_2dt;
        const double u_tt = ((c[j + 1] - c[j]) + (c[j - 1] - c[j])) * inv_dt2;
        const double u_rt = (g.c1[0] * (bm2[j + 1] - bm2[j - 1]) + g.c1[1] * (bm1[j + 1] - bm1[j - 1]) +
                             g.c1[2] * (c[j + 1] - c[j - 1]) + g.c1[3] * (ap[j + 1] - ap[j - 1])) *
                            inv_2dt;

        const double up_t = g.sig_tt_inv * u_t; // D^theta u
        const double v2 = 1.0 + u_r * u_r + up_t * u_t;
        const double inv_v2 = 1.0 / v2;
        const double g_rr = 1.0 - u_r * u_r * inv_v2;
        const double g_rt = -u_r * up_t * inv_v2;
        const double g_tt = g.sig_tt_inv - up_t * up_t * inv_v2;

        const double h_rr = u_rr;
        const double h_rt = u_rt - g.gam_t_rt * u_t;
        const double h_tt = u_tt + g.gam_ff * u_r;

        out[j] = g_rr * h_rr + 2.0 * g_rt * h_rt + g_tt * h_tt;
    }
}

void filter_ring_scalar(const double* src2x, const double* kern, int nt, double* out) {
    for (int j = 0; j < nt; ++j) {
        double acc = 0.0;
        const double* s = src2x + j;
        for (int l = 0; l < nt; ++l) acc += kern[l] * s[l];
        out[j] = acc;
    }
}

void axpbyc_scalar(const double* x, const double* y, double a, double b, double c, size_t n,
                   double* out) {
    for (size_t k = 0; k < n; ++k) out[k] = a * x[k] + b * y[k] + c;
}

} // namespace

const KernelOps& scalar_ops() {
    static const KernelOps ops{rhs_ring_scalar, filter_ring_scalar, axpbyc_scalar, "scalar"};
    return ops;
}

} // namespace tflow::kernels
