#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tflow/kernels.hpp"
#include "tflow/mesh.hpp"

namespace tflow {

using PlanPtr = std::shared_ptr<const kernels::OperatorPlan>;

enum class FlowTermination {
    converged,
    t_max_reached,
    blowup,
    compatibility_violation,
};

std::string to_string(FlowTermination t);

struct FlowState {
    double t = 0.0;
    ScalarField u;
    double dt_last = 0.0;
};

struct MonitorSample {
    double t = 0.0;
    double sup_ut = 0.0;
    double osc_ut = 0.0;
    double sup_grad = 0.0;
    double mean_u = 0.0;
    double osc_u = 0.0; // osc(u - lambda t) == osc(u): the drift column
};

struct FlowSnapshot {
    double t = 0.0;
    ScalarField u;
};

struct FlowResult {
    std::vector<MonitorSample> series;
    std::vector<FlowSnapshot> snapshots;
    double lambda_flow = 0.0;     // spatial mean of u_t at termination
    double lambda_flow_fit = 0.0; // slope of mean(u) vs t over the final 20%
    FlowTermination termination = FlowTermination::t_max_reached;
    double t_final = 0.0;
    long steps = 0;
    bool compat_repaired = false;
    double compat_residual = 0.0;
    double dt = 0.0;
};

struct FlowOptions {
    double t_max = 50.0;
    double tol_translate = 1e-7;
    double c_cfl = 0.2;
    int monitor_stride = 100;  // steps per monitor sample
    int snapshot_every = 10;   // monitor samples per stored field snapshot
    bool repair_compatibility = true;
};

// Time integrator for the graphical flow with Neumann data phi on the
// boundary ring. One solver instance runs sequentially; independent runs use
// independent instances.
class FlowSolver {
public:
    explicit FlowSolver(PlanPtr plan);

    const kernels::OperatorPlan& plan() const { return *plan_; }
    const DiskMesh& mesh() const { return plan_->mesh(); }

    void set_phi(std::vector<double> phi);
    const std::vector<double>& phi() const { return phi_; }

    // sum g^{ij}(Du) D_i D_j u; boundary row extrapolated (monitors only).
    ScalarField rhs(const ScalarField& u);

    // H = rhs(u) / v with v = sqrt(1 + |Du|^2).
    ScalarField mean_curvature(const ScalarField& u);

    void enforce_neumann(ScalarField& u) const;

    // One RK2 (midpoint) step; Neumann enforcement and the origin filter are
    // applied after each stage.
    FlowState step(const FlowState& state, double dt);

    // Parabolic step bound from the current coefficients g^{ij}(Du).
    double dt_max(const FlowState& state, double c_cfl = 0.2);

    // State-independent bound used by run(): g <= sigma makes it safe for
    // every reachable state.
    double dt_stable(double c_cfl = 0.2) const { return plan_->dt_stable(c_cfl); }

    FlowResult run(const ScalarField& u0, const FlowOptions& opts);

    // in-place stage update, shared with the translator's pseudo-time march
    void advance(ScalarField& u, double dt);

private:
    MonitorSample measure(const ScalarField& u, double t);

    PlanPtr plan_;
    std::vector<double> phi_;
    kernels::Workspace ws_;
    ScalarField k_, uh_;
};

// sup over all nodes of |Du| with Du from the mesh stencils.
double sup_grad_norm(const DiskMesh& mesh, const ScalarField& u);

} // namespace tflow
