#pragma once

#include <array>
#include <limits>
#include <vector>

#include "tflow/flow.hpp"

namespace tflow {

struct EpsTraceEntry {
    double eps = 0.0;
    double eps_mean_u = 0.0; // eps * mean(u_eps), the lambda estimate at this eps
    double sup_grad = 0.0;
};

struct TranslatorResult {
    double lambda_eps = 0.0;      // extrapolated eps -> 0 value
    double lambda_integral = 0.0; // divergence-theorem formula on w
    double lambda_flow = std::numeric_limits<double>::quiet_NaN(); // filled by verify
    ScalarField w;                // zero-mean profile
    double residual_pde = 0.0;    // sup |sum g^{ij} D_i D_j w - lambda_eps|
    double residual_bc = 0.0;     // sup |D_nu w - phi|
    double fit_residual = 0.0;    // extrapolation model misfit
    std::vector<EpsTraceEntry> eps_trace;
    bool trace_monotone = true;   // false flags an unstable extrapolation
};

struct EpsSolveOptions {
    double tol_ell = 1e-9;
    double c_cfl = 0.2;
    int check_stride = 64;
    long max_steps = 400000000L;
};

struct EpsSolveInfo {
    long steps = 0;
    double residual = 0.0;
};

// Solves eps u = sum g^{ij}(Du) D_i D_j u, D_nu u = phi by damped pseudo-time
// marching of the zero-mean deviation; the mean component, whose pseudo-time
// rate is only eps, is recovered in closed form from the same fixed point.
class TranslatorSolver {
public:
    explicit TranslatorSolver(PlanPtr plan);

    const DiskMesh& mesh() const { return plan_->mesh(); }

    void set_phi(std::vector<double> phi);
    const std::vector<double>& phi() const { return phi_; }

    ScalarField solve_eps_bvp(double eps, const ScalarField& u_init,
                              const EpsSolveOptions& opts = {}, EpsSolveInfo* info = nullptr);

    TranslatorResult continuation(const std::vector<double>& eps_schedule,
                                  const ScalarField* u_init = nullptr,
                                  const EpsSolveOptions& opts = {});

    // lambda = -(int_bdry phi / v) / (int_domain 1 / v), v = sqrt(1 + |Dw|^2).
    double lambda_integral(const ScalarField& w) const;

private:
    PlanPtr plan_;
    std::vector<double> phi_;
    kernels::Workspace ws_;
    ScalarField k_;
};

} // namespace tflow
