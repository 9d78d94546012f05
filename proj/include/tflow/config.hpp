#pragma once

#include <string>
#include <vector>

#include "tflow/mesh.hpp"

namespace tflow {

enum class PhiKind { constant, cosine };

// Boundary data tag: const(a) or cosine(a, k) = a cos(k theta).
struct PhiSpec {
    PhiKind kind = PhiKind::constant;
    double a = 0.0;
    int k = 1;

    std::vector<double> sample(const DiskMesh& mesh) const;
    std::string text() const;
};

enum class U0Kind { zero, linear, custom_file };

// Initial data tag: zero, linear(a) = a r cos(theta), or custom-file(path).
struct U0Spec {
    U0Kind kind = U0Kind::zero;
    double a = 0.0;
    std::string path;

    ScalarField sample(MeshPtr mesh) const;
    std::string text() const;
};

struct RunConfig {
    MetricFamily family = MetricFamily::flat;
    std::vector<double> params; // family parameters (scale)
    RadialProfile profile = RadialProfile::sinh_profile;
    double R = 1.0;
    int n_r = 32;
    int n_theta = 64;
    PhiSpec phi;
    U0Spec u0;
    double t_max = 50.0;
    double tol_translate = 1e-7;
    double c_cfl = 0.2;
    int snapshot_stride = 100;
    bool repair_compatibility = true;
    std::vector<double> eps_schedule = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
    double tol_ell = 1e-9;
    std::string output_dir = "out";

    MetricDescriptor metric() const;
    // normalized key/value echo for the manifest
    std::vector<std::pair<std::string, std::string>> echo() const;
};

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
RunConfig parse_config(const std::string& path);

} // namespace tflow
