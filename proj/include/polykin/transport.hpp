#pragma once

#include "polykin/core.hpp"
#include "polykin/field.hpp"
#include "polykin/inertialess.hpp"
#include "polykin/stress.hpp"
#include "polykin/vec.hpp"

#include <cstdint>
#include <vector>

namespace polykin {

/// Drag-coupling hypothesis: beads see the solvent velocity, or the
/// volume-averaged solution velocity.
enum class CouplingMode { Solvent, Solution };

/// Macroscopic state across the channel, one value per y cell.
struct FieldProfile {
    int ny = 0;
    double Ly = 0.0;
    std::vector<double> N;    ///< dumbbell number density [1/m^2]
    std::vector<double> phi;  ///< polymer volume fraction N V_d
    std::vector<Vec2> v_s;    ///< solvent velocity
    std::vector<Vec2> v_p;    ///< polymer phase velocity
    std::vector<Vec2> u;      ///< volume-averaged velocity phi v_p + (1-phi) v_s
    std::vector<double> p_s, p_p, p;
    std::vector<Mat2> tau;    ///< elastic stress (in the mode's convention)
    std::vector<std::uint8_t> defined;

    double hy() const { return Ly / ny; }
};

struct VelocityProfileResult {
    std::vector<Vec2> v_p;
    std::vector<std::uint8_t> defined;  ///< zero where N = 0 (v_p undefined)
};

/// v_p = v_s + (1/(2 zeta N)) div tau - (kBT/(2 zeta N)) grad N.
VelocityProfileResult polymer_velocity(const std::vector<Vec2>& v_s,
                                       const std::vector<Mat2>& tau,
                                       const std::vector<double>& N, double hy,
                                       const PhysicalParams& params);

/// Conservative flux-form update of
///   dN/dt + d(v_{s,y} N)/dy = (kBT/(2 zeta)) d2N/dy2 - (1/(2 zeta)) d2 tau_yy/dy2
/// with zero total flux through the walls (the flux is N v_p by construction).
/// Throws on a violated stability bound.
std::vector<double> density_step(const std::vector<double>& N,
                                 const std::vector<Vec2>& v_s,
                                 const std::vector<Mat2>& tau, double dt, double hy,
                                 const PhysicalParams& params);

struct ChannelForcing {
    double dpdx = 0.0;          ///< applied streamwise pressure gradient [Pa/m]
    double wall_velocity_lo = 0.0;  ///< x-velocity of the wall at y = 0
    double wall_velocity_hi = 0.0;  ///< x-velocity of the wall at y = Ly
};

/// Semi-implicit streamwise momentum update (implicit viscous term,
/// tridiagonal solve, no-slip walls), then the wall-normal velocity from the
/// mixture incompressibility constraint (u_y = 0 in the channel). Fills v_s,
/// v_p, u, p_s, p on the profile. Throws if phi >= 1 anywhere.
void solvent_momentum_step(FieldProfile& prof, double dt, const PhysicalParams& params,
                           CouplingMode mode, const ChannelForcing& forcing);

struct DivergenceConstraint {
    std::vector<double> target;    ///< required div v_s from N and tau
    std::vector<double> residual;  ///< d(v_{s,y})/dy minus target
    std::vector<double> div_u;     ///< discrete divergence of the mixture velocity
};

DivergenceConstraint divergence_constraint(const std::vector<double>& N,
                                           const std::vector<Mat2>& tau,
                                           const std::vector<Vec2>& v_s,
                                           const std::vector<Vec2>& u, double hy,
                                           const PhysicalParams& params);

struct CoupledConfig {
    Geometry geom = Geometry::channel(1.0);
    CouplingMode mode = CouplingMode::Solvent;
    VelocityMode velocity_mode = VelocityMode::ExactBead;
    int ny = 32;
    int nq = 48;
    double q_max = 6.0;       ///< in units of the equilibrium connector length
    double N_av = 1.0;        ///< mean number density
    ChannelForcing forcing;
    double macro_dt = 0.0;    ///< 0 picks 0.1 lambda_H
    double t_final = 0.0;
    double tol = 1e-8;        ///< steady-state residual (relative change per lambda_H)
    double under_relax = 0.5;
    int s_nodes = 8;
    int snapshot_every = 0;   ///< macro steps between stored snapshots (0: last only)
};

struct CoupledResult {
    std::vector<FieldProfile> snapshots;
    std::vector<double> times;
    KineticField field;
    std::vector<double> residual_history;
    bool converged = false;
    int macro_steps = 0;
};

/// Operator-splitting loop: kinetic field advanced with the mode's velocity
/// (v_s or u), stress and N diagnosed from psi, solvent momentum updated
/// semi-implicitly with under-relaxation. Runs to t_final or until the
/// velocity residual drops below tol. Throws on a diverging loop, with the
/// residual history in the message.
CoupledResult coupled_solve(const CoupledConfig& cfg, const PhysicalParams& params,
                            const SpringLaw& law);

} // namespace polykin
