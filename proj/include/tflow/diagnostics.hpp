#pragma once

#include <string>
#include <vector>

#include "tflow/flow.hpp"
#include "tflow/translator.hpp"

namespace tflow {

enum class CheckStatus { pass, fail, not_applicable };

std::string to_string(CheckStatus s);

// margin holds the measured quantity the check compares against its
// tolerance; the comparison direction depends on the check and is recorded
// in the implementation.
struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::not_applicable;
    double margin = 0.0;
    double tolerance = 0.0;
};

struct DiagnosticsReport {
    std::vector<CheckResult> checks;

    bool all_pass() const;
    const CheckResult* find(const std::string& name) const;
};

// D_nu u0 = phi within 10 h^2 (margin: measured sup mismatch).
CheckResult check_compatibility(const DiskMesh& mesh, const ScalarField& u0,
                                const std::vector<double>& phi);

struct HypothesesResult {
    CheckResult ricci_nonneg;    // margin: min Gaussian curvature over nodes
    CheckResult boundary_convex; // margin: kappa_1, measured geodesic curvature of the boundary
    CheckResult barrier_exists;  // margin: k_0, smallest Hessian eigenvalue of the barrier
};

HypothesesResult check_hypotheses(const MetricDescriptor& metric, const DiskMesh& mesh);

// max_t sup|u_t| <= sup|u_t|(0) (1 + 1e-6) + 10 h^2 (margin: observed excess).
CheckResult check_ut_max_principle(const FlowResult& flow, double h);

// running max of sup|Du| gains nothing over the final half of the run.
CheckResult check_gradient_bound_stable(const FlowResult& flow);

// osc(u1 - u2) non-increasing within 10 h^2 at shared snapshot times and
// strictly smaller at the end when it started above the slack.
CheckResult check_osc_contraction(const FlowResult& a, const FlowResult& b, double h);

// running max of |u - lambda t| (monitor surrogate |mean_u - lambda t| + osc u)
// stabilized over the final half.
CheckResult check_drift_bounded(const FlowResult& flow, double lambda, double h);

// osc(u(T) - w) small and the drift series bounded.
CheckResult check_translator_convergence(const FlowResult& flow, const TranslatorResult& tr,
                                         double h);

// The full nine-entry report evaluated on one scenario (two flows with the
// same phi and different initial data, plus a translator continuation).
DiagnosticsReport run_all_checks(const DiskMesh& mesh, const MetricDescriptor& metric,
                                 const ScalarField& u0, const std::vector<double>& phi,
                                 const FlowResult& flow1, const FlowResult& flow2,
                                 const TranslatorResult& tr);

} // namespace tflow
