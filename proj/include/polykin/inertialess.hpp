#pragma once

#include "polykin/core.hpp"
#include "polykin/field.hpp"
#include "polykin/flow.hpp"
#include "polykin/rng.hpp"

#include <string>
#include <vector>

namespace polykin {

/// How the solvent velocity enters the configuration-space equation.
enum class VelocityMode {
    ExactBead,        ///< v evaluated at the bead positions x -/+ q/2
    TruncatedOrder2,  ///< leading velocity terms only: (q.grad)v in q, v in x
};

struct FpOptions {
    VelocityMode mode = VelocityMode::ExactBead;
    bool q_terms = true;  ///< test hook: disable connector-space fluxes
    bool x_terms = true;  ///< test hook: disable position-space fluxes
    double cfl = 0.45;
};

struct FpStability {
    double dt_max = 0.0;
    std::string limiting;  ///< "q-diffusion", "x-diffusion" or "advection CFL"
};

/// Explicit conservative finite-volume solver for the inertialess
/// configuration-space equation. The spring drift and connector diffusion
/// are combined into an exponentially fitted (well-balanced) face flux, so
/// the discrete equilibrium is the Boltzmann weight at the cell centers
/// exactly; flow advection uses upwind-biased 2nd-order reconstruction with
/// a minmod limiter, and position-space diffusion is central. Zero-flux
/// boundaries in y (walls) and at the q-domain boundary.
class FpSolver {
public:
    FpSolver(const PhysicalParams& params, const SpringLaw& law, FpOptions opts = {});

    /// Cache velocity tables for the current flow; call whenever the flow or
    /// the grid changes.
    void set_flow(const KineticField& field, const FlowField& flow);

    FpStability stability(const KineticField& field) const;

    /// One explicit step. Throws std::runtime_error (naming the limiting
    /// term) when dt exceeds the stability bound.
    void step(KineticField& field, double dt);

    const PhysicalParams& params() const { return params_; }
    const SpringLaw& law() const { return law_; }

private:
    void build_force_tables(const KineticField& field);

    PhysicalParams params_;
    SpringLaw law_;
    FpOptions opts_;

    // cached grid signature
    int ny_ = -1, nq_ = -1;
    double qmax_ = 0.0, Ly_ = 0.0;

    // spring force at q faces: fx_face[(ix_face)*nq + iq], fy_face[ix*(nq+1)+iq_face]
    std::vector<double> fx_face_, fy_face_;
    // spring potential difference across q faces in kBT units (same layout)
    std::vector<double> dux_face_, duy_face_;
    // velocity difference v2 - v1 at qy centers / qy faces, per y cell
    std::vector<Vec2> dv_c_, dv_f_;
    // mean bead velocity y-component at y faces, per qy center
    std::vector<double> vmy_f_;
    std::vector<double> scratch_;
};

struct FpSteadyReport {
    int steps = 0;
    double dt = 0.0;
    std::vector<double> residual_history;  ///< relative change per unit time
    bool converged = false;
};

/// Time-march to steady state: repeated steps until the relative change of
/// psi per unit time drops below tol. Throws on non-convergence, with the
/// residual history in the message.
FpSteadyReport fp_steady(KineticField& field, FpSolver& solver, const FlowField& flow,
                         double tol, double t_max);

/// Inertialess dumbbell ensemble: centers of mass and connectors.
struct EnsembleInertialess {
    std::vector<Vec2> x;
    std::vector<Vec2> q;
    double time = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t step_count = 0;
};

/// Draw an ensemble from a kinetic field (inverse-CDF over cells, uniform
/// within a cell).
EnsembleInertialess sample_from_field(const KineticField& field, std::size_t n_particles,
                                      std::uint64_t seed);

/// One Euler-Maruyama step of the equivalent stochastic process:
///   dq = (-2F/zeta + v2 - v1) dt + sqrt(4 kBT/zeta) dWq,
///   dx = ((v1+v2)/2) dt + sqrt(kBT/zeta) dWx,
/// with wall reflection of both bead endpoints and a semi-implicit connector
/// update for the finitely extensible spring.
void step_inertialess_sde(EnsembleInertialess& ens, double dt, const FlowField& flow,
                          const PhysicalParams& params, const SpringLaw& law,
                          const Geometry& geom);

/// Histogram of center-of-mass y over uniform bins (counts per bin).
std::vector<double> density_histogram(const EnsembleInertialess& ens, int bins, double Ly);

/// Ensemble average of q outer q.
Mat2 ensemble_second_moment(const EnsembleInertialess& ens);

} // namespace polykin
