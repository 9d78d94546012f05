// AVX2/FMA variants of the hot kernels. Compiled with -mavx2 -mfma on x86-64
// only; dispatch checks CPU support at runtime before handing these out.

#include "tflow/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define TFLOW_X86 1
#include <immintrin.h>
#else
#define TFLOW_X86 0
#endif

namespace tflow::kernels {

#if TFLOW_X86

namespace {

void rhs_ring_avx2(const double* bm2, const double* bm1, const double* c, const double* ap,
                   const RingGeom& g, double inv_2dt, double inv_dt2, int nt, double* out) {
    const __m256d c1_0 = _mm256_set1_pd(g.c1[0]);
    const __m256d c1_1 = _mm256_set1_pd(g.c1[1]);
    const __m256d c1_2 = _mm256_set1_pd(g.c1[2]);
    const __m256d c1_3 = _mm256_set1_pd(g.c1[3]);
    const __m256d c2_0 = _mm256_set1_pd(g.c2[0]);
    const __m256d c2_1 = _mm256_set1_pd(g.c2[1]);
    const __m256d c2_3 = _mm256_set1_pd(g.c2[3]);
    const __m256d v_inv2dt = _mm256_set1_pd(inv_2dt);
    const __m256d v_invdt2 = _mm256_set1_pd(inv_dt2);
    const __m256d v_stt = _mm256_set1_pd(g.sig_tt_inv);
    const __m256d v_gtrt = _mm256_set1_pd(g.gam_t_rt);
    const __m256d v_gff = _mm256_set1_pd(g.gam_ff);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);

    int j = 0;
    for (; j + 4 <= nt; j += 4) {
        const __m256d b2 = _mm256_loadu_pd(bm2 + j);
        const __m256d b1 = _mm256_loadu_pd(bm1 + j);
        const __m256d cc = _mm256_loadu_pd(c + j);
        const __m256d aa = _mm256_loadu_pd(ap + j);

        // differences from the center value annihilate constants exactly
        const __m256d d_b2 = _mm256_sub_pd(b2, cc);
        const __m256d d_b1 = _mm256_sub_pd(b1, cc);
        const __m256d d_aa = _mm256_sub_pd(aa, cc);

        __m256d u_r = _mm256_mul_pd(c1_0, d_b2);
        u_r = _mm256_fmadd_pd(c1_1, d_b1, u_r);
        u_r = _mm256_fmadd_pd(c1_3, d_aa, u_r);

        __m256d u_rr = _mm256_mul_pd(c2_0, d_b2);
        u_rr = _mm256_fmadd_pd(c2_1, d_b1, u_rr);
        u_rr = _mm256_fmadd_pd(c2_3, d_aa, u_rr);

        const __m256d cp = _mm256_loadu_pd(c + j + 1);
        const __m256d cm = _mm256_loadu_pd(c + j - 1);
        const __m256d u_t = _mm256_mul_pd(_mm256_sub_pd(cp, cm), v_inv2dt);
        const __m256d u_tt = _mm256_mul_pd(
            _mm256_add_pd(_mm256_sub_pd(cp, cc), _mm256_sub_pd(cm, cc)), v_invdt2);

        __m256d mix = _mm256_mul_pd(c1_0, _mm256_sub_pd(_mm256_loadu_pd(bm2 + j + 1),
                                                        _mm256_loadu_pd(bm2 + j - 1)));
        mix = _mm256_fmadd_pd(c1_1,
                              _mm256_sub_pd(_mm256_loadu_pd(bm1 + j + 1), _mm256_loadu_pd(bm1 + j - 1)),
                              mix);
        mix = _mm256_fmadd_pd(c1_2, _mm256_sub_pd(cp, cm), mix);
        mix = _mm256_fmadd_pd(c1_3,
                              _mm256_sub_pd(_mm256_loadu_pd(ap + j + 1), _mm256_loadu_pd(ap + j - 1)),
                              mix);
        const __m256d u_rt = _mm256_mul_pd(mix, v_inv2dt);

        const __m256d up_t = _mm256_mul_pd(v_stt, u_t);
        __m256d v2 = _mm256_fmadd_pd(u_r, u_r, one);
        v2 = _mm256_fmadd_pd(up_t, u_t, v2);
        const __m256d inv_v2 = _mm256_div_pd(one, v2);

        const __m256d g_rr = _mm256_sub_pd(one, _mm256_mul_pd(_mm256_mul_pd(u_r, u_r), inv_v2));
        const __m256d g_rt =
            _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(_mm256_mul_pd(u_r, up_t), inv_v2));
        const __m256d g_tt = _mm256_sub_pd(v_stt, _mm256_mul_pd(_mm256_mul_pd(up_t, up_t), inv_v2));

        const __m256d h_rt = _mm256_fnmadd_pd(v_gtrt, u_t, u_rt);
        const __m256d h_tt = _mm256_fmadd_pd(v_gff, u_r, u_tt);

        __m256d res = _mm256_mul_pd(g_rr, u_rr);
        res = _mm256_fmadd_pd(_mm256_mul_pd(two, g_rt), h_rt, res);
        res = _mm256_fmadd_pd(g_tt, h_tt, res);
        _mm256_storeu_pd(out + j, res);
    }
    for (; j < nt; ++j) {
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
        const double up_t = g.sig_tt_inv * u_t;
        const double v2 = 1.0 + u_r * u_r + up_t * u_t;
        const double inv_v2 = 1.0 / v2;
        const double g_rr = 1.0 - u_r * u_r * inv_v2;
        const double g_rt = -u_r * up_t * inv_v2;
        const double g_tt = g.sig_tt_inv - up_t * up_t * inv_v2;
        out[j] = g_rr * u_rr + 2.0 * g_rt * (u_rt - g.gam_t_rt * u_t) + g_tt * (u_tt + g.gam_ff * u_r);
    }
}

void filter_ring_avx2(const double* src2x, const double* kern, int nt, double* out) {
    for (int j = 0; j < nt; ++j) {
        const double* s = src2x + j;
        __m256d acc = _mm256_setzero_pd();
        int l = 0;
        for (; l + 4 <= nt; l += 4) {
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(kern + l), _mm256_loadu_pd(s + l), acc);
        }
        __m128d lo = _mm256_castpd256_pd128(acc);
        __m128d hi = _mm256_extractf128_pd(acc, 1);
        lo = _mm_add_pd(lo, hi);
        double res = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
        for (; l < nt; ++l) res += kern[l] * s[l];
        out[j] = res;
    }
}

void axpbyc_avx2(const double* x, const double* y, double a, double b, double c, size_t n,
                 double* out) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d vc = _mm256_set1_pd(c);
    size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), vc);
        r = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + k), r);
        _mm256_storeu_pd(out + k, r);
    }
    for (; k < n; ++k) out[k] = a * x[k] + b * y[k] + c;
}

} // namespace

const KernelOps& avx2_ops() {
    static const KernelOps ops{rhs_ring_avx2, filter_ring_avx2, axpbyc_avx2, "avx2"};
    return ops;
}

#else

const KernelOps& avx2_ops() { return scalar_ops(); }

#endif

} // namespace tflow::kernels
