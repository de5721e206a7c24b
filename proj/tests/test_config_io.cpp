#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "bclab/config.hpp"
#include "bclab/errors.hpp"
#include "bclab/io.hpp"
#include "bclab/threshold.hpp"

using namespace bcl;

TEST_CASE("key=value parsing and overrides") {
    KeyValueConfig cfg = KeyValueConfig::from_string(
        "# run setup\n"
        "nu = 1e-3\n"
        "m = 64   # modes\n"
        "nus = 1e-2, 1e-3\n"
        "nonlinear = true\n");
    CHECK(cfg.get_double("nu", 0.0) == 1e-3);
    CHECK(cfg.get_int("m", 0) == 64);
    CHECK(cfg.get_bool("nonlinear", false));
    const auto nus = cfg.get_list("nus", {});
    REQUIRE(nus.size() == 2);
    CHECK(nus[1] == 1e-3);
    cfg.reject_unknown();

    cfg.set("nu=5e-4");
    CHECK(cfg.get_double("nu", 0.0) == 5e-4);

    CHECK_THROWS_AS(KeyValueConfig::from_string("garbage line\n"), config_error);
    CHECK_THROWS_AS(cfg.get_int("nu", 0), config_error);   // 5e-4 is not integral
}

TEST_CASE("unknown keys are rejected") {
    KeyValueConfig cfg = KeyValueConfig::from_string("nu=1e-3\ntypo_key=1\n");
    CHECK(cfg.get_double("nu", 0.0) == 1e-3);
    CHECK_THROWS_AS(cfg.reject_unknown(), config_error);
}

TEST_CASE("config hash is stable and order independent") {
    KeyValueConfig a = KeyValueConfig::from_string("x=1\ny=2\n");
    KeyValueConfig b = KeyValueConfig::from_string("y=2\nx=1\n");
    CHECK(config_hash(a) == config_hash(b));
    b.set("x", "3");
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("full precision formatting") {
    CHECK(format_g17(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_g17(M_PI)) == M_PI);
    CHECK(std::stod(format_g17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv writer") {
    const auto path = std::filesystem::temp_directory_path() / "bclab_test.csv";
    {
        CsvWriter csv(path, {"a", "b"});
        csv.row(std::vector<double>{1.5, 2.5});
        CHECK_THROWS_AS(csv.row(std::vector<double>{1.0}), dimension_error);
    }
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
    std::getline(in, line);
    CHECK(line == "1.5,2.5");
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint round trip") {
    auto grid = std::make_shared<const ChebGrid>(build_cheb_grid(24));
    const XGrid xg = build_x_grid(4.0 * M_PI, 16);
    const SimState s = make_initial_data(grid, xg, InitialDataSpec{}, 0.5, 0.25);

    const auto path = std::filesystem::temp_directory_path() / "bclab_test.chk";
    save_checkpoint(s, 1e-3, path);
    double nu = 0.0;
    const SimState r = load_checkpoint(path, &nu);
    std::filesystem::remove(path);

    CHECK(nu == 1e-3);
    CHECK(r.time == s.time);
    CHECK(r.xgrid.m == s.xgrid.m);
    CHECK(r.grid->n == s.grid->n);
    // complex64 payload: single precision round trip
    CHECK((r.theta - s.theta).cwiseAbs().maxCoeff() < 1e-6 * s.theta.cwiseAbs().maxCoeff());
    CHECK((r.omega - s.omega).cwiseAbs().maxCoeff() < 1e-6 * s.omega.cwiseAbs().maxCoeff());
    CHECK((r.psi - s.psi).cwiseAbs().maxCoeff() < 1e-6 * std::max(1e-30, s.psi.cwiseAbs().maxCoeff()));

    CHECK_THROWS_AS(load_checkpoint("/nonexistent/path.chk"), config_error);
}
