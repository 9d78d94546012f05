#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "tflow/config.hpp"
#include "tflow/csv_io.hpp"

using namespace tflow;

TEST_CASE("minimal config fills documented defaults") {
    RunConfig cfg = parse_config_text("metric.family = flat\n");
    CHECK(cfg.family == MetricFamily::flat);
    CHECK(cfg.c_cfl == 0.2);
    CHECK(cfg.tol_translate == 1e-7);
    CHECK(cfg.tol_ell == 1e-9);
    CHECK(cfg.eps_schedule.size() == 5);
    CHECK(cfg.eps_schedule.front() == 1e-1);
    CHECK(cfg.eps_schedule.back() == 1e-3);
    CHECK(cfg.repair_compatibility);
    CHECK(cfg.n_r == 32);
    CHECK(cfg.n_theta == 64);
}

TEST_CASE("comments, blank lines, and a full round trip") {
    const char* text =
        "# scenario\n"
        "metric.family = sphere-cap\n"
        "metric.params = 1.0\n"
        "metric.R = 1.0   # chart radius\n"
        "mesh.n_r = 48\n"
        "mesh.n_theta = 96\n"
        "boundary_phi = const(0.1)\n"
        "initial_u0 = linear(0.1)\n"
        "flow.t_max = 20\n"
        "translator.eps_schedule = 1e-1,1e-2,1e-3\n"
        "output_dir = runs/cap\n";
    RunConfig cfg = parse_config_text(text);
    CHECK(cfg.family == MetricFamily::sphere_cap);
    CHECK(cfg.n_r == 48);
    CHECK(cfg.phi.kind == PhiKind::constant);
    CHECK(cfg.phi.a == 0.1);
    CHECK(cfg.u0.kind == U0Kind::linear);
    CHECK(cfg.output_dir == "runs/cap");
    CHECK(cfg.eps_schedule.size() == 3);
}

TEST_CASE("unknown keys are parse errors with a line number") {
    try {
        parse_config_text("metric.family = flat\nmesh.nr = 3\n", "cfg");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == "parse-error");
        CHECK(std::string(e.what()).find("cfg:2") != std::string::npos);
        CHECK(std::string(e.what()).find("mesh.nr") != std::string::npos);
    }
}

TEST_CASE("validation failures name the field") {
    auto expect_validation = [](const char* text, const char* field) {
        try {
            parse_config_text(text);
            FAIL_CHECK("expected validation error for ", field);
        } catch (const Error& e) {
            CHECK(e.code() == "validation-error");
            CHECK(std::string(e.what()).find(field) != std::string::npos);
        }
    };
    expect_validation("translator.eps_schedule = 1e-3,1e-2\n", "eps_schedule"); // not decreasing
    expect_validation("translator.eps_schedule = 1e-2,-1e-3\n", "eps_schedule");
    expect_validation("mesh.n_theta = 63\n", "n_theta");
    expect_validation("mesh.n_r = 4\n", "n_r");
    expect_validation("flow.c_cfl = 0.9\n", "c_cfl");
    expect_validation("metric.R = -1\n", "metric.R");
    expect_validation("flow.t_max = nonsense\n", "t_max");
    expect_validation("boundary_phi = warble(1)\n", "boundary_phi");
    expect_validation("initial_u0 = linear(1,2)\n", "initial_u0");
}

TEST_CASE("cosine boundary data samples a cos(k theta) on the ring") {
    RunConfig cfg = parse_config_text("boundary_phi = cosine(0.1, 1)\n");
    CHECK(cfg.phi.kind == PhiKind::cosine);
    auto mesh = DiskMesh::build(cfg.metric(), cfg.R, cfg.n_r, cfg.n_theta);
    auto phi = cfg.phi.sample(*mesh);
    for (int j = 0; j < mesh->n_theta(); ++j) {
        CHECK(phi[j] == doctest::Approx(0.1 * std::cos(mesh->theta(j))).epsilon(1e-14));
    }
}

TEST_CASE("custom-file initial data round-trips through the snapshot format") {
    const std::string path = "/tmp/tflow_test_u0.csv";
    RunConfig cfg = parse_config_text("initial_u0 = custom-file(" + path + ")\n");
    CHECK(cfg.u0.kind == U0Kind::custom_file);

    auto mesh = DiskMesh::build(cfg.metric(), cfg.R, cfg.n_r, cfg.n_theta);
    ScalarField orig(mesh);
    for (size_t k = 0; k < orig.v.size(); ++k) orig.v[k] = std::sin(0.01 * double(k)) * 1.37;
    write_field_csv(path, orig);

    ScalarField loaded = cfg.u0.sample(mesh);
    for (size_t k = 0; k < orig.v.size(); ++k) CHECK(loaded.v[k] == orig.v[k]);

    // wrong mesh size is a validation error
    auto small = DiskMesh::build(cfg.metric(), cfg.R, 16, 32);
    CHECK_THROWS_AS(cfg.u0.sample(small), Error);
    std::remove(path.c_str());
}

TEST_CASE("config file parsing reports the path in errors") {
    const std::string path = "/tmp/tflow_test_cfg.txt";
    {
        std::ofstream out(path);
        out << "metric.family = flat\nbogus = 1\n";
    }
    try {
        parse_config(path);
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(path + ":2") != std::string::npos);
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(parse_config("/nonexistent/deeply/nested.cfg"), Error);
}
