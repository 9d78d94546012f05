#include "tflow/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace tflow::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const KernelOps* g_active = nullptr;

const KernelOps* detect() {
    if (const char* env = std::getenv("TFLOW_KERNEL")) {
        const std::string s(env);
        if (s == "scalar") return &scalar_ops();
        if (s == "avx2" && avx2_available()) return &avx2_ops();
    }
    return avx2_available() ? &avx2_ops() : &scalar_ops();
}

} // namespace

const KernelOps& active_ops() {
    if (!g_active) g_active = detect();
    return *g_active;
}

void set_backend(const std::string& name) {
    if (name == "scalar") {
        g_active = &scalar_ops();
    } else if (name == "avx2" && avx2_available()) {
        g_active = &avx2_ops();
    } else if (name == "auto" || name.empty()) {
        g_active = detect();
    } else {
        throw validation_error("unknown kernel backend '" + name + "'");
    }
}

OperatorPlan::OperatorPlan(MeshPtr mesh, double filter_c) : mesh_(std::move(mesh)) {
    const DiskMesh& m = *mesh_;
    const int nt = m.n_theta();
    const int nr = m.n_r();
    if (filter_c <= 0.0) filter_c = M_PI;
    inv_2dt_ = 1.0 / (2.0 * m.dtheta());
    inv_dt2_ = 1.0 / (m.dtheta() * m.dtheta());

    rings_.resize(nr);
    m_cut_.resize(nr);
    for (int i = 0; i < nr; ++i) {
        const RadialStencil& st = m.radial_stencil(i);
        RingGeom g;
        g.c1 = st.c1;
        g.c2 = st.c2;
        const double f = m.ring_f(i);
        const double df = m.ring_df(i);
        g.sig_tt_inv = 1.0 / (f * f);
        g.gam_t_rt = df / f;
        g.gam_ff = f * df;
        rings_[i] = g;
        m_cut_[i] = int(std::ceil(filter_c * (i + 0.5)));
    }

    // Dirichlet projection kernels for rings whose cutoff is below Nyquist.
    filtered_rings_ = 0;
    while (filtered_rings_ < nr && m_cut_[filtered_rings_] < nt / 2) ++filtered_rings_;
    filter_kernels_.resize(filtered_rings_);
    for (int i = 0; i < filtered_rings_; ++i) {
        std::vector<double>& k = filter_kernels_[i];
        k.resize(nt);
        for (int l = 0; l < nt; ++l) {
            double s = 1.0;
            for (int mmode = 1; mmode <= m_cut_[i]; ++mmode) {
                s += 2.0 * std::cos(2.0 * M_PI * mmode * l / nt);
            }
            k[l] = s / nt;
        }
        // projection row must sum to one so constants and ring means survive
        double sum = 0.0;
        for (double x : k) sum += x;
        k[0] += 1.0 - sum;
    }

    // Per-direction parabolic rates of the sigma-coefficient operator on the
    // filtered grid; the angular symbol is capped at the retained cutoff.
    max_rate_ = 0.0;
    const double dr = m.dr(), dth = m.dtheta();
    for (int i = 0; i < nr; ++i) {
        const double rate_r = 1.0 / (dr * dr);
        const int mc = std::min(m_cut_[i], nt / 2);
        const double s = std::sin(0.5 * mc * dth);
        const double rate_t = rings_[i].sig_tt_inv * s * s / (dth * dth);
        max_rate_ = std::fmax(max_rate_, std::fmax(rate_r, rate_t));
    }

    extrap_ = {15.0 / 8.0, -10.0 / 8.0, 3.0 / 8.0};
    bdry_c1_ = m.boundary_stencil();
}

void OperatorPlan::prepare(Workspace& ws) const {
    const size_t stride = mesh_->n_theta() + 2;
    ws.padded.assign((mesh_->n_r() + 1) * stride, 0.0);
    ws.shifted.assign(stride, 0.0);
    ws.ringbuf.assign(2 * size_t(mesh_->n_theta()), 0.0);
}

void OperatorPlan::rhs(const ScalarField& u, ScalarField& out, Workspace& ws) const {
    const DiskMesh& m = *mesh_;
    m.require_same(u);
    m.require_same(out);
    const int nt = m.n_theta();
    const int nr = m.n_r();
    const size_t stride = size_t(nt) + 2;
    if (ws.padded.size() != size_t(nr + 1) * stride) prepare(ws);

    for (int i = 0; i <= nr; ++i) {
        const double* src = &u.v[m.index(i, 0)];
        double* dst = &ws.padded[i * stride];
        dst[0] = src[nt - 1];
        for (int j = 0; j < nt; ++j) dst[j + 1] = src[j];
        dst[nt + 1] = src[0];
    }
    {
        const double* r0 = &u.v[0];
        const int half = nt / 2;
        double* dst = &ws.shifted[0];
        for (int j = 0; j < nt; ++j) dst[j + 1] = r0[(j + half) % nt];
        dst[0] = dst[nt];
        dst[nt + 1] = dst[1];
    }

    const KernelOps& ops = active_ops();
    for (int i = 0; i < nr; ++i) {
        const double* c = &ws.padded[i * stride] + 1;
        const double* bm1 = (i == 0) ? ws.shifted.data() + 1 : &ws.padded[(i - 1) * stride] + 1;
        const double* bm2 = (i >= 2) ? &ws.padded[(i - 2) * stride] + 1 : c;
        const double* ap = &ws.padded[(i + 1) * stride] + 1;
        ops.rhs_ring(bm2, bm1, c, ap, rings_[i], inv_2dt_, inv_dt2_, nt, &out.v[m.index(i, 0)]);
    }
    // boundary row: quadratic extrapolation from the last three interior rings
    const double* a1 = &out.v[m.index(nr - 1, 0)];
    const double* a2 = &out.v[m.index(nr - 2, 0)];
    const double* a3 = &out.v[m.index(nr - 3, 0)];
    double* ob = &out.v[m.boundary_index(0)];
    for (int j = 0; j < nt; ++j) {
        ob[j] = extrap_[0] * a1[j] + extrap_[1] * a2[j] + extrap_[2] * a3[j];
    }
}

void OperatorPlan::filter(ScalarField& u, Workspace& ws) const {
    const DiskMesh& m = *mesh_;
    m.require_same(u);
    const int nt = m.n_theta();
    if (ws.ringbuf.size() != 2 * size_t(nt)) prepare(ws);
    const KernelOps& ops = active_ops();
    for (int i = 0; i < filtered_rings_; ++i) {
        double* ring = &u.v[m.index(i, 0)];
        for (int j = 0; j < nt; ++j) {
            ws.ringbuf[j] = ring[j];
            ws.ringbuf[j + nt] = ring[j];
        }
        ops.filter_ring(ws.ringbuf.data(), filter_kernels_[i].data(), nt, ring);
    }
}

void OperatorPlan::enforce_neumann(ScalarField& u, const std::vector<double>& phi) const {
    const DiskMesh& m = *mesh_;
    m.require_same(u);
    if (phi.size() != size_t(m.n_theta())) {
        throw mesh_mismatch("phi array length does not match boundary ring");
    }
    // D_nu u = -d_r u = phi at r = R; solve the one-sided stencil for the
    // boundary value.
    const double* r1 = &u.v[m.index(m.n_r() - 1, 0)];
    const double* r2 = &u.v[m.index(m.n_r() - 2, 0)];
    double* b = &u.v[m.boundary_index(0)];
    for (int j = 0; j < m.n_theta(); ++j) {
        b[j] = (-phi[j] - bdry_c1_[1] * r1[j] - bdry_c1_[2] * r2[j]) / bdry_c1_[0];
    }
}

} // namespace tflow::kernels
