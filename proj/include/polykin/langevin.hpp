#pragma once

#include "polykin/core.hpp"
#include "polykin/flow.hpp"
#include "polykin/stats.hpp"
#include "polykin/vec.hpp"

#include <cstdint>
#include <vector>

namespace polykin {

/// One dumbbell with bead inertia: positions and velocities of both beads.
struct DumbbellStateInertial {
    Vec2 r1, r2, V1, V2;
};

struct EnsembleInertial {
    std::vector<DumbbellStateInertial> p;
    double time = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t step_count = 0;
};

enum class InertialScheme {
    EulerMaruyama,  ///< plain explicit step
    Splitting,      ///< kick / drift / exact velocity relaxation / drift / kick
};

/// Draw an equilibrium ensemble: connectors from the Boltzmann weight of the
/// spring (rejection sampling for the finitely extensible law), velocities
/// Maxwellian, centers uniform over the gap (Channel) or over [0, Ly_free).
EnsembleInertial equilibrium_ensemble(std::size_t n, const PhysicalParams& params,
                                      const SpringLaw& law, const Geometry& geom,
                                      std::uint64_t seed, double Ly_free = 1.0);

/// One step of the inertial bead dynamics
///   m dV_i = (-zeta (V_i - v(r_i)) + F_i) dt + sqrt(2 zeta kBT) dW_i,
///   dr_i = V_i dt,
/// with F_1 = -F_2 = F(r2 - r1) and specular wall reflection (position folded,
/// wall-normal velocity reversed). Finite-extensibility violations retry the
/// particle with halved dt (bounded); persistent failure throws.
/// The Splitting scheme relaxes velocities exactly toward v(r_i) over dt and
/// stays accurate with dt comparable to the velocity relaxation time.
void step_inertial(EnsembleInertial& ens, double dt, const FlowField& v_field,
                   const PhysicalParams& params, const SpringLaw& law,
                   const Geometry& geom, InertialScheme scheme = InertialScheme::EulerMaruyama);

/// Per-bin ensemble estimates over uniform bins on [0, Ly]. Bins a bead never
/// visited are flagged undefined rather than zeroed.
struct BinnedProfile {
    int bins = 0;
    double Ly = 0.0;
    std::vector<double> N;          ///< dumbbells per unit length (1/2 weight per bead)
    std::vector<Vec2> v_p;          ///< mean bead velocity
    std::vector<Mat2> var_V;        ///< bead velocity covariance about v_p
    std::vector<Vec2> v_s_bar;      ///< solvent velocity averaged over bead positions
    std::vector<Vec2> f_direct;     ///< zeta sum of (V_b - v_s(r_b)) per unit length
    std::vector<Vec2> f_friction;   ///< 2 N zeta (v_p - v_s_bar)
    std::vector<Mat2> tau_s;        ///< line-deposited spring stress
    std::vector<std::uint8_t> defined;

    double hy() const { return Ly / bins; }
};

BinnedProfile estimate_profiles(const EnsembleInertial& ens, int bins, double Ly,
                                const FlowField& v_s, const PhysicalParams& params,
                                const SpringLaw& law);

/// Line deposition of q (x) F(q): each dumbbell spreads its tensor uniformly
/// along the bead-to-bead segment, split across bins by overlap fraction.
std::vector<Mat2> estimate_spring_stress(const EnsembleInertial& ens, int bins,
                                         double Ly, const SpringLaw& law);

/// Discrete residual of the polymer-phase momentum balance
///   rho_p phi (dv_p/dt + v_p . grad v_p) + 2 N zeta (v_p - v_s)
///     - div tau_s + rho_p div(phi Var(V))
/// evaluated per bin from a time series of profiles, with batch-means error
/// bars over the series. rho_p phi = 2 m N.
struct MomentumResidual {
    std::vector<Vec2> mean;
    std::vector<Vec2> stderr_est;
    std::vector<std::uint8_t> defined;
};

MomentumResidual momentum_residual(const std::vector<BinnedProfile>& snapshots,
                                   const std::vector<double>& times,
                                   const PhysicalParams& params, int n_batches = 16);

} // namespace polykin
