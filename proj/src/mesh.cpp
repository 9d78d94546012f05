#include "tflow/mesh.hpp"

#include <atomic>
#include <cmath>

namespace tflow {

namespace {
std::atomic<std::uint64_t> next_mesh_id{1};
}

std::vector<double> fd_weights(const std::vector<double>& offsets, int order) {
    const int n = int(offsets.size());
    // Solve sum_i w_i x_i^p = p! delta_{p,order}, p = 0..n-1.
    std::vector<double> a(size_t(n) * n), b(n, 0.0);
    for (int p = 0; p < n; ++p) {
        for (int i = 0; i < n; ++i) {
            a[size_t(p) * n + i] = std::pow(offsets[i], p);
        }
    }
    double fact = 1.0;
    for (int k = 2; k <= order; ++k) fact *= k;
    b[order] = fact;
    // Gaussian elimination with partial pivoting.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row) {
            if (std::fabs(a[size_t(row) * n + col]) > std::fabs(a[size_t(piv) * n + col])) piv = row;
        }
        for (int k = 0; k < n; ++k) std::swap(a[size_t(col) * n + k], a[size_t(piv) * n + k]);
        std::swap(b[col], b[piv]);
        for (int row = col + 1; row < n; ++row) {
            const double m = a[size_t(row) * n + col] / a[size_t(col) * n + col];
            for (int k = col; k < n; ++k) a[size_t(row) * n + k] -= m * a[size_t(col) * n + k];
            b[row] -= m * b[col];
        }
    }
    std::vector<double> w(n, 0.0);
    for (int row = n - 1; row >= 0; --row) {
        double s = b[row];
        for (int k = row + 1; k < n; ++k) s -= a[size_t(row) * n + k] * w[k];
        w[row] = s / a[size_t(row) * n + row];
    }
    // derivative weights must annihilate constants exactly; pin the weight at
    // offset 0 to the negative sum of the rest
    if (order >= 1) {
        for (int i = 0; i < n; ++i) {
            if (offsets[i] == 0.0) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k != i) s += w[k];
                }
                w[i] = -s;
                break;
            }
        }
    }
    return w;
}

ScalarField::ScalarField(MeshPtr m) : mesh(std::move(m)), v(mesh->n_total(), 0.0) {}

MeshPtr DiskMesh::build(const MetricDescriptor& metric, double R, int n_r, int n_theta) {
    if (n_r < 8 || n_theta < 16) {
        throw resolution_error("mesh resolution too coarse: need n_r >= 8, n_theta >= 16");
    }
    if (n_theta % 2 != 0) {
        throw resolution_error("n_theta must be even for the across-origin stencil");
    }
    if (!(R > 0.0) || R >= metric.chart_radial_bound()) {
        throw radius_error("mesh radius outside metric chart validity region");
    }

    auto mesh = std::shared_ptr<DiskMesh>(new DiskMesh());
    mesh->metric_ = metric;
    mesh->n_r_ = n_r;
    mesh->n_theta_ = n_theta;
    mesh->R_ = R;
    mesh->dr_ = R / n_r;
    mesh->dtheta_ = 2.0 * M_PI / n_theta;
    mesh->id_ = next_mesh_id.fetch_add(1);

    mesh->ring_r_.resize(n_r + 1);
    mesh->ring_f_.resize(n_r + 1);
    mesh->ring_df_.resize(n_r + 1);
    for (int i = 0; i <= n_r; ++i) {
        const double r = (i < n_r) ? (i + 0.5) * mesh->dr_ : R;
        mesh->ring_r_[i] = r;
        mesh->ring_f_[i] = metric.f(r);
        mesh->ring_df_[i] = metric.df(r);
        if (!(mesh->ring_f_[i] > 0.0)) {
            throw radius_error("metric degenerates inside the requested disk");
        }
    }
    mesh->h_ = std::fmax(mesh->dr_, mesh->ring_f_[n_r] * mesh->dtheta_);
    double area = 0.0;
    for (int i = 0; i < n_r; ++i) area += mesh->ring_f_[i] * mesh->dr_ * mesh->dtheta_ * n_theta;
    mesh->domain_area_ = area;

    // Radial stencils. Offsets are relative to the ring radius; rows are
    // [two-below, below, center, above].
    mesh->stencils_.resize(n_r);
    const double dr = mesh->dr_;
    for (int i = 0; i < n_r; ++i) {
        RadialStencil st;
        if (i < n_r - 1) {
            auto w1 = fd_weights({-dr, 0.0, dr}, 1);
            auto w2 = fd_weights({-dr, 0.0, dr}, 2);
            st.c1 = {0.0, w1[0], w1[1], w1[2]};
            st.c2 = {0.0, w2[0], w2[1], w2[2]};
        } else {
            // last interior ring: boundary neighbor sits at dr/2; keep the
            // second derivative second-order with a fourth point
            auto w1 = fd_weights({-dr, 0.0, 0.5 * dr}, 1);
            auto w2 = fd_weights({-2.0 * dr, -dr, 0.0, 0.5 * dr}, 2);
            st.c1 = {0.0, w1[0], w1[1], w1[2]};
            st.c2 = {w2[0], w2[1], w2[2], w2[3]};
        }
        mesh->stencils_[i] = st;
    }
    auto wb = fd_weights({0.0, -0.5 * dr, -1.5 * dr}, 1);
    mesh->bdry_c1_ = {wb[0], wb[1], wb[2]};
    return mesh;
}

ScalarField DiskMesh::make_field() const {
    ScalarField f;
    f.mesh = shared_from_this();
    f.v.assign(n_total(), 0.0);
    return f;
}

void DiskMesh::require_same(const ScalarField& f) const {
    if (!f.mesh || f.mesh->id() != id_ || f.v.size() != n_total()) {
        throw mesh_mismatch("field is not bound to this mesh");
    }
}

VectorField DiskMesh::partials(const ScalarField& f) const {
    require_same(f);
    VectorField out;
    out.mesh = f.mesh;
    out.d_r.assign(n_total(), 0.0);
    out.d_theta.assign(n_total(), 0.0);
    const int nt = n_theta_;
    const int half = nt / 2;
    const double inv2dt = 1.0 / (2.0 * dtheta_);

    for (int i = 0; i < n_r_; ++i) {
        const RadialStencil& st = stencils_[i];
        const double* c = &f.v[index(i, 0)];
        const double* below = (i == 0) ? c : &f.v[index(i - 1, 0)];
        const double* above = (i == n_r_ - 1) ? &f.v[boundary_index(0)] : &f.v[index(i + 1, 0)];
        const double* below2 = (i >= 2) ? &f.v[index(i - 2, 0)] : c;
        for (int j = 0; j < nt; ++j) {
            const int jb = (i == 0) ? (j + half) % nt : j;
            // differences from the center annihilate constants exactly
            const double d_r = st.c1[0] * (below2[j] - c[j]) + st.c1[1] * (below[jb] - c[j]) +
                               st.c1[3] * (above[j] - c[j]);
            const int jp = (j + 1) % nt, jm = (j + nt - 1) % nt;
            out.d_r[index(i, j)] = d_r;
            out.d_theta[index(i, j)] = (c[jp] - c[jm]) * inv2dt;
        }
    }
    // boundary ring: one-sided radial, periodic central angular
    const double* b = &f.v[boundary_index(0)];
    const double* r1 = &f.v[index(n_r_ - 1, 0)];
    const double* r2 = &f.v[index(n_r_ - 2, 0)];
    for (int j = 0; j < nt; ++j) {
        const int jp = (j + 1) % nt, jm = (j + nt - 1) % nt;
        out.d_r[boundary_index(j)] =
            bdry_c1_[1] * (r1[j] - b[j]) + bdry_c1_[2] * (r2[j] - b[j]);
        out.d_theta[boundary_index(j)] = (b[jp] - b[jm]) * inv2dt;
    }
    return out;
}

HessianField DiskMesh::covariant_hessian(const ScalarField& f) const {
    require_same(f);
    HessianField out;
    out.mesh = f.mesh;
    out.h_rr.assign(n_interior(), 0.0);
    out.h_rt.assign(n_interior(), 0.0);
    out.h_tt.assign(n_interior(), 0.0);

    const int nt = n_theta_;
    const int half = nt / 2;
    const double inv2dt = 1.0 / (2.0 * dtheta_);
    const double invdt2 = 1.0 / (dtheta_ * dtheta_);

    // theta-derivative field first; its radial stencil (including the
    // across-origin lookup) gives the mixed partial
    VectorField p = partials(f);

    for (int i = 0; i < n_r_; ++i) {
        const RadialStencil& st = stencils_[i];
        const double gamma_r_tt = -ring_f_[i] * ring_df_[i];
        const double gamma_t_rt = ring_df_[i] / ring_f_[i];
        const double* c = &f.v[index(i, 0)];
        const double* below = (i == 0) ? c : &f.v[index(i - 1, 0)];
        const double* above = (i == n_r_ - 1) ? &f.v[boundary_index(0)] : &f.v[index(i + 1, 0)];
        const double* below2 = (i >= 2) ? &f.v[index(i - 2, 0)] : c;
        const double* tc = &p.d_theta[index(i, 0)];
        const double* tbelow = (i == 0) ? tc : &p.d_theta[index(i - 1, 0)];
        const double* tabove =
            (i == n_r_ - 1) ? &p.d_theta[boundary_index(0)] : &p.d_theta[index(i + 1, 0)];
        const double* tbelow2 = (i >= 2) ? &p.d_theta[index(i - 2, 0)] : tc;
        for (int j = 0; j < nt; ++j) {
            const int jb = (i == 0) ? (j + half) % nt : j;
            const int jp = (j + 1) % nt, jm = (j + nt - 1) % nt;
            const double u_r = st.c1[0] * (below2[j] - c[j]) + st.c1[1] * (below[jb] - c[j]) +
                               st.c1[3] * (above[j] - c[j]);
            const double u_rr = st.c2[0] * (below2[j] - c[j]) + st.c2[1] * (below[jb] - c[j]) +
                                st.c2[3] * (above[j] - c[j]);
            const double u_t = (c[jp] - c[jm]) * inv2dt;
            const double u_tt = ((c[jp] - c[j]) + (c[jm] - c[j])) * invdt2;
            const double u_rt = st.c1[0] * (tbelow2[j] - tc[j]) + st.c1[1] * (tbelow[jb] - tc[j]) +
                                st.c1[3] * (tabove[j] - tc[j]);
            const size_t k = index(i, j);
            out.h_rr[k] = u_rr;
            out.h_rt[k] = u_rt - gamma_t_rt * u_t;
            out.h_tt[k] = u_tt - gamma_r_tt * u_r;
        }
    }
    return out;
}

std::vector<double> DiskMesh::normal_derivative(const ScalarField& f) const {
    require_same(f);
    std::vector<double> out(n_theta_, 0.0);
    const double* b = &f.v[boundary_index(0)];
    const double* r1 = &f.v[index(n_r_ - 1, 0)];
    const double* r2 = &f.v[index(n_r_ - 2, 0)];
    for (int j = 0; j < n_theta_; ++j) {
        const double d_r = bdry_c1_[1] * (r1[j] - b[j]) + bdry_c1_[2] * (r2[j] - b[j]);
        out[j] = normal(j)[0] * d_r; // nu = (-1, 0): D_nu f = -d_r f
    }
    return out;
}

double DiskMesh::integrate_domain(const ScalarField& f) const {
    require_same(f);
    double s = 0.0;
    for (int i = 0; i < n_r_; ++i) {
        const double w = area_weight(i);
        double ring = 0.0;
        for (int j = 0; j < n_theta_; ++j) ring += f.v[index(i, j)];
        s += w * ring;
    }
    return s;
}

double DiskMesh::integrate_boundary(const ScalarField& f) const {
    require_same(f);
    double ring = 0.0;
    for (int j = 0; j < n_theta_; ++j) ring += f.v[boundary_index(j)];
    return ring * boundary_weight();
}

double DiskMesh::integrate_boundary(const std::vector<double>& boundary_values) const {
    if (boundary_values.size() != size_t(n_theta_)) {
        throw mesh_mismatch("boundary array length does not match n_theta");
    }
    double ring = 0.0;
    for (double x : boundary_values) ring += x;
    return ring * boundary_weight();
}

double DiskMesh::mean(const ScalarField& f) const {
    return integrate_domain(f) / domain_area_;
}

} // namespace tflow
