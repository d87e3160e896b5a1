#include <doctest.h>

#include "polykin/config.hpp"

using namespace polykin;
using nlohmann::json;

namespace {

json minimal() {
    return json{{"scenario", "equilibrium"}, {"solver", "fokker_planck"}};
}

} // namespace

TEST_CASE("minimal configuration and defaults") {
    const RunConfig cfg = parse_config(minimal());
    CHECK(cfg.scenario == Scenario::Equilibrium);
    CHECK(cfg.solver == SolverKind::FokkerPlanck);
    CHECK(cfg.mode == CouplingMode::Solvent);
    CHECK(cfg.geom.kind == Geometry::Kind::FreeSpace);
    CHECK(cfg.num.ny == 32);
    CHECK(cfg.num.tol == doctest::Approx(1e-8));
    CHECK(cfg.seed == 0);
    CHECK(cfg.output_dir == "out");
}

TEST_CASE("unknown keys are rejected by name") {
    json j = minimal();
    j["frobnicate"] = 1;
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("frobnicate"), ConfigError);

    j = minimal();
    j["numerical"] = {{"n_partciles", 100}};
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("numerical.n_partciles"),
                         ConfigError);

    j = minimal();
    j["physical"] = {{"zeta", 4.0}, {"zeat", 1.0}};
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("physical.zeat"), ConfigError);
}

TEST_CASE("value validation") {
    json j = minimal();
    j["spring"] = {{"law", "fene"}, {"H", 1.0}};
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("q0"), ConfigError);

    j["spring"] = {{"law", "hookean"}, {"H", 1.0}, {"q0", 5.0}};
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("q0"), ConfigError);

    j = minimal();
    j["geometry"] = {{"kind", "channel"}, {"gap", -2.0}};
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("gap"), ConfigError);

    j = minimal();
    j["geometry"] = {{"kind", "torus"}};
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("torus"), ConfigError);

    j = minimal();
    j["numerical"] = {{"tol", 0.0}};
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("tol"), ConfigError);

    j = minimal();
    j["seed"] = -3;
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("seed"), ConfigError);
}

TEST_CASE("combination checks") {
    json j = minimal();
    j["scenario"] = "couette";
    CHECK_THROWS_AS(parse_config(j), ConfigError);  // needs channel + coupled/sde

    j["geometry"] = {{"kind", "channel"}, {"gap", 4.0}};
    j["solver"] = "coupled";
    j["numerical"] = {{"wall_velocity_hi", 0.5}};
    CHECK_NOTHROW(parse_config(j));

    j["solver"] = "langevin";
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = minimal();
    j["scenario"] = "epsilon_ladder";
    j["solver"] = "langevin";
    j["spring"] = {{"law", "fene"}, {"H", 1.0}, {"q0", 5.0}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = minimal();
    j["physical"] = {{"dim", 3}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);  // grid solver is planar only

    j = minimal();
    j["scenario"] = "couette";
    j["solver"] = "coupled";
    j["geometry"] = {{"kind", "channel"}, {"gap", 4.0}};
    const RunConfig cfg = parse_config(j);
    REQUIRE(cfg.warnings.size() >= 1);  // zero wall velocity
}

TEST_CASE("dimensionless groups from the configuration") {
    json j = minimal();
    j["scenario"] = "couette";
    j["solver"] = "coupled";
    j["geometry"] = {{"kind", "channel"}, {"gap", 1.0}};
    j["physical"] = {{"zeta", 4.0}};
    j["spring"] = {{"law", "hookean"}, {"H", 1.0}};
    j["numerical"] = {{"wall_velocity_hi", 1.0}};
    const RunConfig cfg = parse_config(j);
    const NondimGroups g = config_groups(cfg);
    CHECK(g.De == doctest::Approx(1.0));
    CHECK(g.ell_ratio == doctest::Approx(1.0));
    CHECK(g.lambda_H == doctest::Approx(1.0));
}

TEST_CASE("echo round-trips through the parser") {
    json j = minimal();
    j["scenario"] = "poiseuille";
    j["solver"] = "coupled";
    j["mode"] = "solution";
    j["geometry"] = {{"kind", "channel"}, {"gap", 8.0}};
    j["spring"] = {{"law", "fene"}, {"H", 2.0}, {"q0", 7.0}};
    j["numerical"] = {{"dpdx", -0.3}, {"ny", 48}};
    j["seed"] = 42;
    const RunConfig a = parse_config(j);
    const RunConfig b = parse_config(config_echo(a));
    CHECK(b.scenario == a.scenario);
    CHECK(b.mode == a.mode);
    CHECK(b.law.q0 == doctest::Approx(a.law.q0));
    CHECK(b.num.forcing.dpdx == doctest::Approx(a.num.forcing.dpdx));
    CHECK(b.num.ny == a.num.ny);
    CHECK(b.seed == a.seed);
}
