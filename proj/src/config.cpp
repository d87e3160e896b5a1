#include "polykin/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace polykin {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) fail("unknown key \"" + where + key + "\"");
    }
}

template <typename T>
T enum_from(const json& j, const std::string& key, const std::map<std::string, T>& values) {
    if (!j.at(key).is_string()) fail("\"" + key + "\" must be a string");
    const std::string s = j.at(key).get<std::string>();
    const auto it = values.find(s);
    if (it == values.end()) {
        std::ostringstream os;
        os << "\"" << key << "\": unknown value \"" << s << "\" (expected one of:";
        for (const auto& [name, v] : values) {
            (void)v;
            os << ' ' << name;
        }
        os << ')';
        fail(os.str());
    }
    return it->second;
}

double get_number(const json& j, const std::string& where, const std::string& key,
                  double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail("\"" + where + key + "\" must be a number");
    return j.at(key).get<double>();
}

std::int64_t get_integer(const json& j, const std::string& where, const std::string& key,
                         std::int64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) fail("\"" + where + key + "\" must be an integer");
    return j.at(key).get<std::int64_t>();
}

PhysicalParams parse_physical(const json& j) {
    require_keys(j, "physical.",
                 {"zeta", "kBT", "mass", "eta_s", "rho_s", "rho_p", "V_d", "N_av", "dim"});
    PhysicalParams p;
    p.zeta = get_number(j, "physical.", "zeta", p.zeta);
    p.kBT = get_number(j, "physical.", "kBT", p.kBT);
    p.mass = get_number(j, "physical.", "mass", p.mass);
    p.eta_s = get_number(j, "physical.", "eta_s", p.eta_s);
    p.rho_s = get_number(j, "physical.", "rho_s", p.rho_s);
    p.rho_p = get_number(j, "physical.", "rho_p", p.rho_p);
    p.V_d = get_number(j, "physical.", "V_d", p.V_d);
    p.N_av = get_number(j, "physical.", "N_av", p.N_av);
    p.dim = static_cast<int>(get_integer(j, "physical.", "dim", p.dim));
    try {
        p.validate();
    } catch (const std::exception& e) {
        fail(std::string("physical: ") + e.what());
    }
    return p;
}

SpringLaw parse_spring(const json& j) {
    require_keys(j, "spring.", {"law", "H", "q0"});
    if (!j.contains("law")) fail("\"spring.law\" is required");
    const auto kind = enum_from<SpringLaw::Kind>(
        j, "law", {{"hookean", SpringLaw::Kind::Hookean}, {"fene", SpringLaw::Kind::FENE}});
    const double H = get_number(j, "spring.", "H", 1.0);
    if (!(H > 0.0)) fail("\"spring.H\" must be positive");
    if (kind == SpringLaw::Kind::Hookean) {
        if (j.contains("q0")) fail("\"spring.q0\" is only valid for the fene law");
        return SpringLaw::hookean(H);
    }
    const double q0 = get_number(j, "spring.", "q0", 0.0);
    if (!(q0 > 0.0)) fail("\"spring.q0\" must be positive for the fene law");
    return SpringLaw::fene(H, q0);
}

Geometry parse_geometry(const json& j) {
    require_keys(j, "geometry.", {"kind", "gap", "side"});
    if (!j.contains("kind")) fail("\"geometry.kind\" is required");
    const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
    if (kind == "channel") {
        const double gap = get_number(j, "geometry.", "gap", 0.0);
        if (!(gap > 0.0)) fail("\"geometry.gap\" must be positive");
        if (j.contains("side")) fail("\"geometry.side\" is only valid for periodic_box");
        return Geometry::channel(gap);
    }
    if (kind == "periodic_box") {
        const double side = get_number(j, "geometry.", "side", 0.0);
        if (!(side > 0.0)) fail("\"geometry.side\" must be positive");
        if (j.contains("gap")) fail("\"geometry.gap\" is only valid for channel");
        return Geometry::periodic_box(side);
    }
    if (kind == "free_space") {
        if (j.contains("gap") || j.contains("side"))
            fail("free_space geometry takes no size keys");
        return Geometry::free_space();
    }
    fail("\"geometry.kind\": unknown value \"" + kind +
         "\" (expected one of: channel periodic_box free_space)");
}

NumericalParams parse_numerical(const json& j) {
    require_keys(j, "numerical.",
                 {"ny", "nq", "q_max", "n_particles", "dt", "t_final", "tol", "macro_dt",
                  "gammadot", "dpdx", "wall_velocity_lo", "wall_velocity_hi", "s_nodes",
                  "snapshot_every", "under_relax", "threads"});
    NumericalParams n;
    n.ny = static_cast<int>(get_integer(j, "numerical.", "ny", n.ny));
    n.nq = static_cast<int>(get_integer(j, "numerical.", "nq", n.nq));
    n.q_max = get_number(j, "numerical.", "q_max", n.q_max);
    const std::int64_t np =
        get_integer(j, "numerical.", "n_particles", static_cast<std::int64_t>(n.n_particles));
    if (np <= 0) fail("\"numerical.n_particles\" must be positive");
    n.n_particles = static_cast<std::uint64_t>(np);
    n.dt = get_number(j, "numerical.", "dt", n.dt);
    n.t_final = get_number(j, "numerical.", "t_final", n.t_final);
    n.tol = get_number(j, "numerical.", "tol", n.tol);
    n.macro_dt = get_number(j, "numerical.", "macro_dt", n.macro_dt);
    n.gammadot = get_number(j, "numerical.", "gammadot", n.gammadot);
    n.forcing.dpdx = get_number(j, "numerical.", "dpdx", 0.0);
    n.forcing.wall_velocity_lo = get_number(j, "numerical.", "wall_velocity_lo", 0.0);
    n.forcing.wall_velocity_hi = get_number(j, "numerical.", "wall_velocity_hi", 0.0);
    n.s_nodes = static_cast<int>(get_integer(j, "numerical.", "s_nodes", n.s_nodes));
    n.snapshot_every =
        static_cast<int>(get_integer(j, "numerical.", "snapshot_every", n.snapshot_every));
    n.under_relax = get_number(j, "numerical.", "under_relax", n.under_relax);
    n.threads = static_cast<int>(get_integer(j, "numerical.", "threads", n.threads));
    if (n.ny <= 0 || n.nq <= 0) fail("\"numerical.ny\" and \"numerical.nq\" must be positive");
    if (!(n.q_max > 0.0)) fail("\"numerical.q_max\" must be positive");
    if (n.dt < 0.0 || n.t_final < 0.0 || n.macro_dt < 0.0)
        fail("time step keys must be non-negative");
    if (!(n.tol > 0.0)) fail("\"numerical.tol\" must be positive");
    if (n.s_nodes < 1) fail("\"numerical.s_nodes\" must be >= 1");
    if (n.threads < 0) fail("\"numerical.threads\" must be >= 0");
    if (!(n.under_relax > 0.0 && n.under_relax <= 1.0))
        fail("\"numerical.under_relax\" must be in (0, 1]");
    return n;
}

void check_combinations(RunConfig& cfg) {
    const bool channel = cfg.geom.kind == Geometry::Kind::Channel;
    if (cfg.solver == SolverKind::FokkerPlanck && cfg.physical.dim == 3)
        fail("solver \"fokker_planck\" supports dim = 2 only");
    switch (cfg.scenario) {
        case Scenario::Couette:
        case Scenario::Poiseuille:
            if (!channel) fail("couette/poiseuille scenarios require channel geometry");
            if (cfg.solver == SolverKind::FokkerPlanck || cfg.solver == SolverKind::Langevin)
                fail("couette/poiseuille scenarios support solver \"coupled\" or "
                     "\"inertialess_sde\"");
            break;
        case Scenario::HomogeneousShear:
            if (cfg.solver == SolverKind::Coupled)
                fail("homogeneous_shear is incompatible with solver \"coupled\"");
            if (channel)
                cfg.warnings.push_back(
                    "homogeneous_shear ignores the channel walls (treated as unbounded)");
            break;
        case Scenario::EpsilonLadder:
            if (cfg.solver != SolverKind::Langevin)
                fail("epsilon_ladder requires solver \"langevin\"");
            if (cfg.law.kind != SpringLaw::Kind::Hookean)
                fail("epsilon_ladder requires the hookean spring law");
            break;
        case Scenario::Equilibrium:
        case Scenario::IdentitySuite:
            break;
    }
    if (cfg.stress_mode == StressModeKind::WallAware && !channel)
        cfg.warnings.push_back(
            "stress_mode \"wall_aware\" without walls reduces to the homogeneous form");
    if (cfg.solver == SolverKind::Coupled && cfg.scenario != Scenario::Equilibrium &&
        cfg.scenario != Scenario::Couette && cfg.scenario != Scenario::Poiseuille)
        fail("solver \"coupled\" supports equilibrium, couette, poiseuille scenarios");
    if (cfg.scenario == Scenario::Couette &&
        cfg.num.forcing.wall_velocity_lo == 0.0 && cfg.num.forcing.wall_velocity_hi == 0.0)
        cfg.warnings.push_back("couette scenario with zero wall velocities");
    if (cfg.scenario == Scenario::Poiseuille && cfg.num.forcing.dpdx == 0.0)
        cfg.warnings.push_back("poiseuille scenario with zero pressure gradient");
}

} // namespace

RunConfig parse_config(const json& j) {
    require_keys(j, "",
                 {"scenario", "solver", "mode", "stress_mode", "physical", "spring", "geometry",
                  "numerical", "seed", "output_dir"});
    if (!j.contains("scenario")) fail("\"scenario\" is required");
    if (!j.contains("solver")) fail("\"solver\" is required");

    RunConfig cfg;
    cfg.scenario = enum_from<Scenario>(j, "scenario",
                                       {{"equilibrium", Scenario::Equilibrium},
                                        {"couette", Scenario::Couette},
                                        {"poiseuille", Scenario::Poiseuille},
                                        {"homogeneous_shear", Scenario::HomogeneousShear},
                                        {"epsilon_ladder", Scenario::EpsilonLadder},
                                        {"identity_suite", Scenario::IdentitySuite}});
    cfg.solver = enum_from<SolverKind>(j, "solver",
                                       {{"langevin", SolverKind::Langevin},
                                        {"inertialess_sde", SolverKind::InertialessSde},
                                        {"fokker_planck", SolverKind::FokkerPlanck},
                                        {"coupled", SolverKind::Coupled}});
    if (j.contains("mode"))
        cfg.mode = enum_from<CouplingMode>(
            j, "mode", {{"solvent", CouplingMode::Solvent}, {"solution", CouplingMode::Solution}});
    if (j.contains("stress_mode"))
        cfg.stress_mode = enum_from<StressModeKind>(j, "stress_mode",
                                                    {{"wall_aware", StressModeKind::WallAware},
                                                     {"homogeneous", StressModeKind::Homogeneous},
                                                     {"taylor0", StressModeKind::Taylor0},
                                                     {"taylor2", StressModeKind::Taylor2}});
    cfg.physical = j.contains("physical") ? parse_physical(j.at("physical")) : PhysicalParams{};
    cfg.law = j.contains("spring") ? parse_spring(j.at("spring")) : SpringLaw::hookean(1.0);
    cfg.geom = j.contains("geometry") ? parse_geometry(j.at("geometry")) : Geometry::free_space();
    cfg.num = j.contains("numerical") ? parse_numerical(j.at("numerical")) : NumericalParams{};
    const std::int64_t seed = get_integer(j, "", "seed", 0);
    if (seed < 0) fail("\"seed\" must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) fail("\"output_dir\" must be a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
        if (cfg.output_dir.empty()) fail("\"output_dir\" must not be empty");
    }
    check_combinations(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read \"" + path + "\"");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail("malformed JSON in \"" + path + "\": " + e.what());
    }
    return parse_config(j);
}

nlohmann::json config_echo(const RunConfig& cfg) {
    json j;
    j["scenario"] = to_string(cfg.scenario);
    j["solver"] = to_string(cfg.solver);
    j["mode"] = to_string(cfg.mode);
    j["stress_mode"] = to_string(cfg.stress_mode);
    j["physical"] = {{"zeta", cfg.physical.zeta},   {"kBT", cfg.physical.kBT},
                     {"mass", cfg.physical.mass},   {"eta_s", cfg.physical.eta_s},
                     {"rho_s", cfg.physical.rho_s}, {"rho_p", cfg.physical.rho_p},
                     {"V_d", cfg.physical.V_d},     {"N_av", cfg.physical.N_av},
                     {"dim", cfg.physical.dim}};
    j["spring"] = {{"law", cfg.law.kind == SpringLaw::Kind::Hookean ? "hookean" : "fene"},
                   {"H", cfg.law.H}};
    if (cfg.law.kind == SpringLaw::Kind::FENE) j["spring"]["q0"] = cfg.law.q0;
    switch (cfg.geom.kind) {
        case Geometry::Kind::Channel:
            j["geometry"] = {{"kind", "channel"}, {"gap", cfg.geom.gap}};
            break;
        case Geometry::Kind::PeriodicBox:
            j["geometry"] = {{"kind", "periodic_box"}, {"side", cfg.geom.side}};
            break;
        case Geometry::Kind::FreeSpace:
            j["geometry"] = {{"kind", "free_space"}};
            break;
    }
    j["numerical"] = {{"ny", cfg.num.ny},
                      {"nq", cfg.num.nq},
                      {"q_max", cfg.num.q_max},
                      {"n_particles", cfg.num.n_particles},
                      {"dt", cfg.num.dt},
                      {"t_final", cfg.num.t_final},
                      {"tol", cfg.num.tol},
                      {"macro_dt", cfg.num.macro_dt},
                      {"gammadot", cfg.num.gammadot},
                      {"dpdx", cfg.num.forcing.dpdx},
                      {"wall_velocity_lo", cfg.num.forcing.wall_velocity_lo},
                      {"wall_velocity_hi", cfg.num.forcing.wall_velocity_hi},
                      {"s_nodes", cfg.num.s_nodes},
                      {"snapshot_every", cfg.num.snapshot_every},
                      {"under_relax", cfg.num.under_relax},
                      {"threads", cfg.num.threads}};
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    return j;
}

NondimGroups config_groups(const RunConfig& cfg) {
    const double L = cfg.geom.kind == Geometry::Kind::Channel
                         ? cfg.geom.gap
                         : (cfg.geom.kind == Geometry::Kind::PeriodicBox ? cfg.geom.side : 1.0);
    const ChannelForcing& f = cfg.num.forcing;
    double V = std::max(std::abs(f.wall_velocity_lo), std::abs(f.wall_velocity_hi));
    V = std::max(V, std::abs(f.dpdx) * L * L / (8.0 * cfg.physical.eta_s));
    V = std::max(V, std::abs(cfg.num.gammadot) * L);
    if (V == 0.0)
        V = ell0(cfg.physical, cfg.law) / cfg.physical.lambda_H(cfg.law.H);
    return nondim_groups(cfg.physical, cfg.law, V, L);
}

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::Equilibrium: return "equilibrium";
        case Scenario::Couette: return "couette";
        case Scenario::Poiseuille: return "poiseuille";
        case Scenario::HomogeneousShear: return "homogeneous_shear";
        case Scenario::EpsilonLadder: return "epsilon_ladder";
        case Scenario::IdentitySuite: return "identity_suite";
    }
    return "?";
}

const char* to_string(SolverKind s) {
    switch (s) {
        case SolverKind::Langevin: return "langevin";
        case SolverKind::InertialessSde: return "inertialess_sde";
        case SolverKind::FokkerPlanck: return "fokker_planck";
        case SolverKind::Coupled: return "coupled";
    }
    return "?";
}

const char* to_string(StressModeKind s) {
    switch (s) {
        case StressModeKind::WallAware: return "wall_aware";
        case StressModeKind::Homogeneous: return "homogeneous";
        case StressModeKind::Taylor0: return "taylor0";
        case StressModeKind::Taylor2: return "taylor2";
    }
    return "?";
}

const char* to_string(CouplingMode m) {
    return m == CouplingMode::Solvent ? "solvent" : "solution";
}

} // namespace polykin
