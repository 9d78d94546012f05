#include "tflow/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tflow/csv_io.hpp"

namespace tflow {

std::vector<double> PhiSpec::sample(const DiskMesh& mesh) const {
    std::vector<double> out(mesh.n_theta(), 0.0);
    for (int j = 0; j < mesh.n_theta(); ++j) {
        out[j] = kind == PhiKind::constant ? a : a * std::cos(k * mesh.theta(j));
    }
    return out;
}

std::string PhiSpec::text() const {
    char buf[80];
    if (kind == PhiKind::constant) {
        std::snprintf(buf, sizeof buf, "const(%.17g)", a);
    } else {
        std::snprintf(buf, sizeof buf, "cosine(%.17g,%d)", a, k);
    }
    return buf;
}

ScalarField U0Spec::sample(MeshPtr mesh) const {
    if (kind == U0Kind::custom_file) return read_field_csv(path, mesh);
    ScalarField f(mesh);
    if (kind == U0Kind::linear) {
        for (int i = 0; i <= mesh->n_r(); ++i) {
            const double r = mesh->ring_r(i);
            for (int j = 0; j < mesh->n_theta(); ++j) {
                f.v[mesh->index(i, j)] = a * r * std::cos(mesh->theta(j));
            }
        }
    }
    return f;
}

std::string U0Spec::text() const {
    if (kind == U0Kind::zero) return "zero";
    if (kind == U0Kind::custom_file) return "custom-file(" + path + ")";
    char buf[64];
    std::snprintf(buf, sizeof buf, "linear(%.17g)", a);
    return buf;
}

MetricDescriptor RunConfig::metric() const {
    const double scale = params.empty() ? 1.0 : params[0];
    switch (family) {
        case MetricFamily::flat: return MetricDescriptor::flat();
        case MetricFamily::sphere_cap: return MetricDescriptor::sphere_cap(scale);
        case MetricFamily::custom_diagonal: return MetricDescriptor::custom_diagonal(profile, scale);
    }
    return MetricDescriptor::flat();
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& s) {
    char* end = nullptr;
    const std::string t = trim(s);
    const double x = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || t.empty() || !std::isfinite(x)) {
        throw validation_error("field '" + field + "': not a finite number: '" + t + "'");
    }
    return x;
}

long parse_int(const std::string& field, const std::string& s) {
    const double x = parse_double(field, s);
    if (x != std::floor(x)) throw validation_error("field '" + field + "': not an integer");
    return long(x);
}

bool parse_bool(const std::string& field, const std::string& s) {
    const std::string t = trim(s);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    throw validation_error("field '" + field + "': expected true/false");
}

std::vector<double> parse_list(const std::string& field, const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(field, item));
    if (out.empty()) throw validation_error("field '" + field + "': empty list");
    return out;
}

// "tag(arg1,arg2)" -> tag, args; plain "tag" gives no args
bool split_call(const std::string& s, std::string& tag, std::vector<std::string>& args) {
    const size_t open = s.find('(');
    if (open == std::string::npos) {
        tag = trim(s);
        args.clear();
        return true;
    }
    if (s.back() != ')') return false;
    tag = trim(s.substr(0, open));
    args.clear();
    std::stringstream ss(s.substr(open + 1, s.size() - open - 2));
    std::string item;
    while (std::getline(ss, item, ',')) args.push_back(trim(item));
    return true;
}

PhiSpec parse_phi(const std::string& s) {
    std::string tag;
    std::vector<std::string> args;
    if (!split_call(trim(s), tag, args)) throw validation_error("field 'boundary_phi': bad syntax");
    PhiSpec p;
    if (tag == "const" && args.size() == 1) {
        p.kind = PhiKind::constant;
        p.a = parse_double("boundary_phi", args[0]);
    } else if (tag == "cosine" && args.size() == 2) {
        p.kind = PhiKind::cosine;
        p.a = parse_double("boundary_phi", args[0]);
        p.k = int(parse_int("boundary_phi", args[1]));
        if (p.k < 0) throw validation_error("field 'boundary_phi': cosine mode must be >= 0");
    } else {
        throw validation_error("field 'boundary_phi': expected const(a) or cosine(a,k)");
    }
    return p;
}

U0Spec parse_u0(const std::string& s) {
    std::string tag;
    std::vector<std::string> args;
    if (!split_call(trim(s), tag, args)) throw validation_error("field 'initial_u0': bad syntax");
    U0Spec u;
    if (tag == "zero" && args.empty()) {
        u.kind = U0Kind::zero;
    } else if (tag == "linear" && args.size() == 1) {
        u.kind = U0Kind::linear;
        u.a = parse_double("initial_u0", args[0]);
    } else if (tag == "custom-file" && args.size() == 1) {
        u.kind = U0Kind::custom_file;
        u.path = args[0];
    } else {
        throw validation_error("field 'initial_u0': expected zero, linear(a) or custom-file(path)");
    }
    return u;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw parse_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "metric.family") {
            if (val == "flat") {
                cfg.family = MetricFamily::flat;
            } else if (val == "sphere-cap") {
                cfg.family = MetricFamily::sphere_cap;
            } else if (val == "custom-diagonal") {
                cfg.family = MetricFamily::custom_diagonal;
            } else {
                throw validation_error("field 'metric.family': unknown family '" + val + "'");
            }
        } else if (key == "metric.params") {
            cfg.params = parse_list(key, val);
        } else if (key == "metric.profile") {
            if (val == "sinh") {
                cfg.profile = RadialProfile::sinh_profile;
            } else {
                throw validation_error("field 'metric.profile': unknown profile '" + val + "'");
            }
        } else if (key == "metric.R") {
            cfg.R = parse_double(key, val);
        } else if (key == "mesh.n_r") {
            cfg.n_r = int(parse_int(key, val));
        } else if (key == "mesh.n_theta") {
            cfg.n_theta = int(parse_int(key, val));
        } else if (key == "boundary_phi") {
            cfg.phi = parse_phi(val);
        } else if (key == "initial_u0") {
            cfg.u0 = parse_u0(val);
        } else if (key == "flow.t_max") {
            cfg.t_max = parse_double(key, val);
        } else if (key == "flow.tol_translate") {
            cfg.tol_translate = parse_double(key, val);
        } else if (key == "flow.c_cfl") {
            cfg.c_cfl = parse_double(key, val);
        } else if (key == "flow.snapshot_stride") {
            cfg.snapshot_stride = int(parse_int(key, val));
        } else if (key == "flow.repair_compatibility") {
            cfg.repair_compatibility = parse_bool(key, val);
        } else if (key == "translator.eps_schedule") {
            cfg.eps_schedule = parse_list(key, val);
        } else if (key == "translator.tol_ell") {
            cfg.tol_ell = parse_double(key, val);
        } else if (key == "output_dir") {
            cfg.output_dir = val;
        } else {
            throw parse_error(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }

    // validation beyond per-field parsing
    if (!(cfg.R > 0.0)) throw validation_error("field 'metric.R': must be positive");
    if (cfg.n_r < 8) throw validation_error("field 'mesh.n_r': must be >= 8");
    if (cfg.n_theta < 16 || cfg.n_theta % 2 != 0) {
        throw validation_error("field 'mesh.n_theta': must be even and >= 16");
    }
    if (!(cfg.t_max > 0.0)) throw validation_error("field 'flow.t_max': must be positive");
    if (!(cfg.tol_translate > 0.0)) {
        throw validation_error("field 'flow.tol_translate': must be positive");
    }
    if (!(cfg.c_cfl > 0.0 && cfg.c_cfl <= 0.45)) {
        throw validation_error("field 'flow.c_cfl': must lie in (0, 0.45]");
    }
    if (cfg.snapshot_stride < 1) {
        throw validation_error("field 'flow.snapshot_stride': must be >= 1");
    }
    for (size_t k = 0; k < cfg.eps_schedule.size(); ++k) {
        if (!(cfg.eps_schedule[k] > 0.0)) {
            throw validation_error("field 'translator.eps_schedule': entries must be positive");
        }
        if (k > 0 && !(cfg.eps_schedule[k] < cfg.eps_schedule[k - 1])) {
            throw validation_error("field 'translator.eps_schedule': must be strictly decreasing");
        }
    }
    if (!(cfg.tol_ell > 0.0)) throw validation_error("field 'translator.tol_ell': must be positive");
    for (double p : cfg.params) {
        if (!std::isfinite(p)) throw validation_error("field 'metric.params': non-finite entry");
    }
    cfg.metric(); // constructs, validating family parameters
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    auto fmt = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    std::vector<std::pair<std::string, std::string>> kv;
    const char* fam = family == MetricFamily::flat          ? "flat"
                      : family == MetricFamily::sphere_cap ? "sphere-cap"
                                                            : "custom-diagonal";
    kv.emplace_back("metric.family", fam);
    std::string ps;
    for (size_t k = 0; k < params.size(); ++k) ps += (k ? "," : "") + fmt(params[k]);
    if (!ps.empty()) kv.emplace_back("metric.params", ps);
    if (family == MetricFamily::custom_diagonal) kv.emplace_back("metric.profile", "sinh");
    kv.emplace_back("metric.R", fmt(R));
    kv.emplace_back("mesh.n_r", std::to_string(n_r));
    kv.emplace_back("mesh.n_theta", std::to_string(n_theta));
    kv.emplace_back("boundary_phi", phi.text());
    kv.emplace_back("initial_u0", u0.text());
    kv.emplace_back("flow.t_max", fmt(t_max));
    kv.emplace_back("flow.tol_translate", fmt(tol_translate));
    kv.emplace_back("flow.c_cfl", fmt(c_cfl));
    kv.emplace_back("flow.snapshot_stride", std::to_string(snapshot_stride));
    kv.emplace_back("flow.repair_compatibility", repair_compatibility ? "true" : "false");
    std::string es;
    for (size_t k = 0; k < eps_schedule.size(); ++k) es += (k ? "," : "") + fmt(eps_schedule[k]);
    kv.emplace_back("translator.eps_schedule", es);
    kv.emplace_back("translator.tol_ell", fmt(tol_ell));
    kv.emplace_back("output_dir", output_dir);
    return kv;
}

} // namespace tflow
