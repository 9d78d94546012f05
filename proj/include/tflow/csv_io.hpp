#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tflow/diagnostics.hpp"
#include "tflow/flow.hpp"
#include "tflow/translator.hpp"

namespace tflow {

// All CSV output uses '.' decimals, '\n' line endings, UTF-8, and 17
// significant digits for doubles.
std::string format_g17(double x);

void ensure_dir(const std::string& path);

// ScalarField snapshot: header "r,theta,value", row-major over (i, j),
// boundary ring last.
void write_field_csv(const std::string& path, const ScalarField& f);
ScalarField read_field_csv(const std::string& path, MeshPtr mesh);

// header "t,sup_ut,osc_ut,sup_grad,mean_u,osc_drift"
void write_monitor_csv(const std::string& path, const std::vector<MonitorSample>& series);

// header "eps,eps_mean_u,sup_grad"
void write_eps_trace_csv(const std::string& path, const std::vector<EpsTraceEntry>& trace);

// header "key,value"
void write_kv_csv(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& kv);

// header "check,status,margin,tolerance"
void write_diagnostics_csv(const std::string& path, const DiagnosticsReport& report);

struct LambdaRow {
    double a = 0.0;
    double lambda_eps = 0.0;
    double lambda_integral = 0.0;
    double lambda_flow = 0.0;
};

// header "a,lambda_eps,lambda_integral,lambda_flow"
void write_lambda_vs_a_csv(const std::string& path, const std::vector<LambdaRow>& rows);

} // namespace tflow
