#include "tflow/translator.hpp"

#include <algorithm>
#include <cmath>

namespace tflow {

TranslatorSolver::TranslatorSolver(PlanPtr plan) : plan_(std::move(plan)) {
    plan_->prepare(ws_);
    k_ = plan_->mesh().make_field();
    phi_.assign(plan_->mesh().n_theta(), 0.0);
}

void TranslatorSolver::set_phi(std::vector<double> phi) {
    if (phi.size() != size_t(plan_->mesh().n_theta())) {
        throw mesh_mismatch("phi array length does not match boundary ring");
    }
    phi_ = std::move(phi);
}

ScalarField TranslatorSolver::solve_eps_bvp(double eps, const ScalarField& u_init,
                                            const EpsSolveOptions& opts, EpsSolveInfo* info) {
    if (!(eps > 0.0)) throw validation_error("eps must be positive");
    const DiskMesh& m = plan_->mesh();
    m.require_same(u_init);
    const auto& ops = kernels::active_ops();
    const size_t n = u_init.v.size();

    ScalarField z = u_init;
    {
        const double zm = m.mean(z);
        for (double& x : z.v) x -= zm;
    }
    plan_->enforce_neumann(z, phi_);
    plan_->filter(z, ws_);

    const double dt = plan_->dt_stable(opts.c_cfl);
    const double area = m.domain_area();

    double mean_rhs = 0.0;
    double res = std::numeric_limits<double>::infinity();
    double best_res = res;
    long since_best = 0;
    long step = 0;
    for (; step < opts.max_steps; ++step) {
        plan_->rhs(z, k_, ws_);
        mean_rhs = m.integrate_domain(k_) / area;

        if (step % opts.check_stride == 0) {
            res = 0.0;
            for (size_t k = 0; k < m.n_interior(); ++k) {
                res = std::fmax(res, std::fabs(eps * z.v[k] - (k_.v[k] - mean_rhs)));
            }
            if (!std::isfinite(res)) throw blowup_error("eps-BVP pseudo-time march diverged");
            if (res < opts.tol_ell) break;
            if (res < best_res * 0.999999) {
                best_res = res;
                since_best = 0;
            } else if (++since_best * opts.check_stride > 200000) {
                throw stall_error("eps-BVP residual plateau at " + std::to_string(res) +
                                  " above tol " + std::to_string(opts.tol_ell));
            }
        }

        // z <- z + dt (rhs - mean_rhs - eps z)
        ops.axpbyc(z.v.data(), k_.v.data(), 1.0 - dt * eps, dt, -dt * mean_rhs, n, z.v.data());
        plan_->enforce_neumann(z, phi_);
        plan_->filter(z, ws_);
    }
    if (step >= opts.max_steps) {
        throw stall_error("eps-BVP march exceeded max steps with residual " + std::to_string(res));
    }
    if (info) {
        info->steps = step;
        info->residual = res;
    }

    // mean mode in closed form: eps * mean(u) = mean(rhs)
    const double c = mean_rhs / eps;
    ScalarField u = z;
    for (double& x : u.v) x += c;
    return u;
}

TranslatorResult TranslatorSolver::continuation(const std::vector<double>& eps_schedule,
                                                const ScalarField* u_init,
                                                const EpsSolveOptions& opts) {
    if (eps_schedule.empty()) throw validation_error("eps schedule is empty");
    for (size_t k = 0; k < eps_schedule.size(); ++k) {
        if (!(eps_schedule[k] > 0.0)) throw validation_error("eps schedule must be positive");
        if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1])) {
            throw validation_error("eps schedule must be strictly decreasing");
        }
    }
    const DiskMesh& m = plan_->mesh();

    TranslatorResult result;
    ScalarField warm = u_init ? *u_init : m.make_field();
    for (double eps : eps_schedule) {
        EpsSolveInfo info;
        ScalarField u_eps = solve_eps_bvp(eps, warm, opts, &info);
        const double lam_here = eps * m.mean(u_eps);
        result.eps_trace.push_back({eps, lam_here, sup_grad_norm(m, u_eps)});
        // omega_eps = u_eps - mean: next warm start and the profile candidate
        warm = u_eps;
        const double mu = m.mean(warm);
        for (double& x : warm.v) x -= mu;
    }

    // linear model lam(eps) = lambda + kappa eps, least squares on the last
    // three schedule points
    {
        const size_t n = result.eps_trace.size();
        const size_t k0 = n > 3 ? n - 3 : 0;
        double se = 0, sl = 0, see = 0, sel = 0, cnt = 0;
        for (size_t k = k0; k < n; ++k) {
            const double e = result.eps_trace[k].eps, l = result.eps_trace[k].eps_mean_u;
            se += e;
            sl += l;
            see += e * e;
            sel += e * l;
            cnt += 1;
        }
        if (cnt >= 2) {
            const double denom = cnt * see - se * se;
            const double kappa = (cnt * sel - se * sl) / denom;
            result.lambda_eps = (sl - kappa * se) / cnt;
            for (size_t k = k0; k < n; ++k) {
                const double e = result.eps_trace[k].eps, l = result.eps_trace[k].eps_mean_u;
                result.fit_residual =
                    std::fmax(result.fit_residual, std::fabs(result.lambda_eps + kappa * e - l));
            }
        } else {
            result.lambda_eps = result.eps_trace.back().eps_mean_u;
        }
    }
    // monotone trace is the expected shape; flag anything else
    for (size_t k = 2; k < result.eps_trace.size(); ++k) {
        const double d1 = result.eps_trace[k - 1].eps_mean_u - result.eps_trace[k - 2].eps_mean_u;
        const double d2 = result.eps_trace[k].eps_mean_u - result.eps_trace[k - 1].eps_mean_u;
        if (d1 * d2 < 0.0) result.trace_monotone = false;
    }

    result.w = warm;
    {
        const double mu = m.mean(result.w);
        for (double& x : result.w.v) x -= mu;
    }
    kernels::Workspace ws;
    plan_->prepare(ws);
    ScalarField r = m.make_field();
    plan_->rhs(result.w, r, ws);
    double rp = 0.0;
    for (size_t k = 0; k < m.n_interior(); ++k) {
        rp = std::fmax(rp, std::fabs(r.v[k] - result.lambda_eps));
    }
    result.residual_pde = rp;
    std::vector<double> nd = m.normal_derivative(result.w);
    double rb = 0.0;
    for (int j = 0; j < m.n_theta(); ++j) rb = std::fmax(rb, std::fabs(nd[j] - phi_[j]));
    result.residual_bc = rb;
    result.lambda_integral = lambda_integral(result.w);
    return result;
}

double TranslatorSolver::lambda_integral(const ScalarField& w) const {
    const DiskMesh& m = plan_->mesh();
    m.require_same(w);
    VectorField p = m.partials(w);
    double den = 0.0;
    for (int i = 0; i < m.n_r(); ++i) {
        const double f = m.ring_f(i);
        const double stt = 1.0 / (f * f);
        const double aw = m.area_weight(i);
        for (int j = 0; j < m.n_theta(); ++j) {
            const size_t k = m.index(i, j);
            const double gsq = p.d_r[k] * p.d_r[k] + stt * p.d_theta[k] * p.d_theta[k];
            den += aw / std::sqrt(1.0 + gsq);
        }
    }
    double num = 0.0;
    const double fb = m.ring_f(m.n_r());
    const double sttb = 1.0 / (fb * fb);
    const double bw = m.boundary_weight();
    for (int j = 0; j < m.n_theta(); ++j) {
        const size_t k = m.boundary_index(j);
        const double gsq = p.d_r[k] * p.d_r[k] + sttb * p.d_theta[k] * p.d_theta[k];
        num += bw * phi_[j] / std::sqrt(1.0 + gsq);
    }
    return -num / den + 0.0; // keep a zero numerator from producing -0
}

} // namespace tflow
