#include "tflow/csv_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tflow {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error("io-error", "cannot create directory '" + path + "': " + ec.message());
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // '\n' endings on every platform
    if (!out) throw Error("io-error", "cannot open '" + path + "' for writing");
    return out;
}

} // namespace

void write_field_csv(const std::string& path, const ScalarField& f) {
    const DiskMesh& m = *f.mesh;
    std::ofstream out = open_out(path);
    out << "r,theta,value\n";
    for (int i = 0; i <= m.n_r(); ++i) {
        for (int j = 0; j < m.n_theta(); ++j) {
            out << format_g17(m.ring_r(i)) << ',' << format_g17(m.theta(j)) << ','
                << format_g17(f.v[m.index(i, j)]) << '\n';
        }
    }
}

ScalarField read_field_csv(const std::string& path, MeshPtr mesh) {
    std::ifstream in(path);
    if (!in) throw Error("io-error", "cannot open field file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("r,theta,value", 0) != 0) {
        throw parse_error("field file '" + path + "': missing r,theta,value header");
    }
    ScalarField f(std::move(mesh));
    size_t k = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string r, t, v;
        if (!std::getline(ss, r, ',') || !std::getline(ss, t, ',') || !std::getline(ss, v)) {
            throw parse_error("field file '" + path + "': bad row '" + line + "'");
        }
        if (k >= f.v.size()) throw validation_error("field file '" + path + "': too many rows");
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str()) {
            throw parse_error("field file '" + path + "': bad value '" + v + "'");
        }
        f.v[k++] = x;
    }
    if (k != f.v.size()) {
        throw validation_error("field file '" + path + "': expected " + std::to_string(f.v.size()) +
                               " rows, got " + std::to_string(k));
    }
    for (double x : f.v) {
        if (!std::isfinite(x)) throw validation_error("field file '" + path + "': non-finite value");
    }
    return f;
}

void write_monitor_csv(const std::string& path, const std::vector<MonitorSample>& series) {
    std::ofstream out = open_out(path);
    out << "t,sup_ut,osc_ut,sup_grad,mean_u,osc_drift\n";
    for (const auto& s : series) {
        out << format_g17(s.t) << ',' << format_g17(s.sup_ut) << ',' << format_g17(s.osc_ut) << ','
            << format_g17(s.sup_grad) << ',' << format_g17(s.mean_u) << ',' << format_g17(s.osc_u)
            << '\n';
    }
}

void write_eps_trace_csv(const std::string& path, const std::vector<EpsTraceEntry>& trace) {
    std::ofstream out = open_out(path);
    out << "eps,eps_mean_u,sup_grad\n";
    for (const auto& e : trace) {
        out << format_g17(e.eps) << ',' << format_g17(e.eps_mean_u) << ','
            << format_g17(e.sup_grad) << '\n';
    }
}

void write_kv_csv(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ofstream out = open_out(path);
    out << "key,value\n";
    for (const auto& [k, v] : kv) out << k << ',' << v << '\n';
}

void write_diagnostics_csv(const std::string& path, const DiagnosticsReport& report) {
    std::ofstream out = open_out(path);
    out << "check,status,margin,tolerance\n";
    for (const auto& c : report.checks) {
        out << c.name << ',' << to_string(c.status) << ',' << format_g17(c.margin) << ','
            << format_g17(c.tolerance) << '\n';
    }
}

void write_lambda_vs_a_csv(const std::string& path, const std::vector<LambdaRow>& rows) {
    std::ofstream out = open_out(path);
    out << "a,lambda_eps,lambda_integral,lambda_flow\n";
    for (const auto& r : rows) {
        out << format_g17(r.a) << ',' << format_g17(r.lambda_eps) << ','
            << format_g17(r.lambda_integral) << ',' << format_g17(r.lambda_flow) << '\n';
    }
}

} // namespace tflow
