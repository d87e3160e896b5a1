#pragma once

#include "polykin/core.hpp"
#include "polykin/inertialess.hpp"
#include "polykin/transport.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace polykin {

/// Any structural or semantic problem in a run configuration. The message
/// names the offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scenario {
    Equilibrium,
    Couette,
    Poiseuille,
    HomogeneousShear,
    EpsilonLadder,
    IdentitySuite,
};

enum class SolverKind { Langevin, InertialessSde, FokkerPlanck, Coupled };

enum class StressModeKind { WallAware, Homogeneous, Taylor0, Taylor2 };

/// Numerical knobs; zeros mean "solver default" where documented.
struct NumericalParams {
    int ny = 32;
    int nq = 64;
    double q_max = 6.0;              ///< in units of the coil size ell0
    std::uint64_t n_particles = 20000;
    double dt = 0.0;                 ///< particle/field step; 0 picks a stable default
    double t_final = 0.0;            ///< 0 picks a solver default
    double tol = 1e-8;
    double macro_dt = 0.0;
    double gammadot = 0.0;           ///< imposed shear rate (homogeneous scenarios)
    ChannelForcing forcing;
    int s_nodes = 8;
    int snapshot_every = 0;
    double under_relax = 0.5;
    int threads = 0;                 ///< worker cap; 0 = hardware concurrency
};

struct RunConfig {
    Scenario scenario = Scenario::Equilibrium;
    SolverKind solver = SolverKind::FokkerPlanck;
    CouplingMode mode = CouplingMode::Solvent;
    StressModeKind stress_mode = StressModeKind::WallAware;
    PhysicalParams physical;
    SpringLaw law = SpringLaw::hookean(1.0);
    Geometry geom = Geometry::free_space();
    NumericalParams num;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::vector<std::string> warnings;  ///< filled during validation
};

/// Parse and validate a configuration object. Unknown keys anywhere are
/// rejected; invalid values and unsupported combinations throw ConfigError
/// naming the key. Non-fatal oddities land in RunConfig::warnings.
RunConfig parse_config(const nlohmann::json& j);

/// Load from a file path (throws ConfigError on unreadable file or bad JSON).
RunConfig load_config(const std::string& path);

/// Serialize back to the canonical JSON layout (for metadata echo).
nlohmann::json config_echo(const RunConfig& cfg);

/// Dimensionless groups for the configured run: the length scale is the
/// channel gap (1 in free space), the velocity scale comes from the forcing
/// (wall speed, Poiseuille centerline, or gammadot * L), falling back to the
/// thermal coil speed ell0/lambda_H for unforced runs.
NondimGroups config_groups(const RunConfig& cfg);

const char* to_string(Scenario s);
const char* to_string(SolverKind s);
const char* to_string(StressModeKind s);
const char* to_string(CouplingMode m);

} // namespace polykin
