#include <doctest.h>

#include "mfg/scenario.hpp"

using namespace mfg;

TEST_CASE("config parsing: sections, comments, overrides") {
    ConfigMap map = ConfigMap::parse_text("# comment\n[grid]\nn = 32\ndim = 2\n"
                                          "[f]\nkind = power\na = 2.0 # trailing\n");
    CHECK(map.get_int("grid.n", 0) == 32);
    CHECK(map.get_int("grid.dim", 0) == 2);
    CHECK(map.get_string("f.kind", "") == "power");
    CHECK(map.get_double("f.a", 0.0) == doctest::Approx(2.0));
    map.set_override("grid.n=48");
    CHECK(map.get_int("grid.n", 0) == 48);

    CHECK_THROWS_AS(ConfigMap::parse_text("[broken\nn = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(ConfigMap::parse_text("novalue\n"), std::invalid_argument);
    CHECK_THROWS_AS(map.set_override("nonsense"), std::invalid_argument);

    ConfigMap bad = ConfigMap::parse_text("[grid]\nn = x\n");
    CHECK_THROWS_AS(bad.get_int("grid.n", 0), std::invalid_argument);
}

TEST_CASE("scenario: defaults, unknown keys, echo round trip") {
    // defaults build the canonical scenario
    ScenarioConfig cfg = ScenarioConfig::from_map(ConfigMap{});
    CHECK(cfg.n == 64);
    CHECK(cfg.r == doctest::Approx(1.4));
    Grid g = cfg.make_grid();
    CHECK(g.is_periodic());
    ProblemData data = cfg.make_data();
    CHECK(data.floor_c > 0.0);

    // unknown keys are rejected with a listing
    ConfigMap bad = ConfigMap::parse_text("[grid]\nnn = 32\n");
    try {
        ScenarioConfig::from_map(bad);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("grid.nn") != std::string::npos);
    }

    // echo -> parse -> echo is a fixed point
    std::string echo1 = cfg.echo();
    ScenarioConfig cfg2 = ScenarioConfig::from_map(ConfigMap::parse_text(echo1));
    CHECK(cfg2.echo() == echo1);

    // and a modified scenario round-trips its modifications
    ConfigMap mod = ConfigMap::parse_text(echo1);
    mod.set_override("time.K=16");
    mod.set_override("hamiltonian.alpha=1.0");
    ScenarioConfig cfg3 = ScenarioConfig::from_map(mod);
    CHECK(cfg3.K == 16);
    CHECK(cfg3.alpha == doctest::Approx(1.0));
    ScenarioConfig cfg4 = ScenarioConfig::from_map(ConfigMap::parse_text(cfg3.echo()));
    CHECK(cfg4.echo() == cfg3.echo());
}

TEST_CASE("scenario: builder validation") {
    ScenarioConfig cfg;
    cfg.boundary = "weird";
    CHECK_THROWS_AS(cfg.make_grid(), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.scheme = "explicit";
    CHECK_THROWS_AS(cfg.make_solver(), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.m0_kind = "dirac";
    CHECK_THROWS_AS(cfg.make_data(), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.f_kind = "log";
    CHECK_THROWS_AS(cfg.make_data(), std::invalid_argument);
}
