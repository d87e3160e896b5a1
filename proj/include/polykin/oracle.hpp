#pragma once

#include "polykin/core.hpp"
#include "polykin/vec.hpp"

#include <vector>

namespace polykin::oracle {

/// Dimensionless conformation tensor A = (H/kBT) <q q> with its stress.
struct ConformationState {
    Mat2 A = Mat2::identity();
    Mat2 tau;          ///< N kBT (g(A) A - delta)
    double time = 0.0;
};

enum class ClosureModel { OldroydB, FENE_P };

/// Closed moment equation of the locally homogeneous limit:
///   dA/dt = kappa A + A kappa^T - (1/lambda_H)(g(A) A - delta),
/// g = 1 (OldroydB) or 1/(1 - tr A / b) (FENE_P). Integrated with RK4,
/// dt = lambda_H/100. kappa is the imposed velocity gradient of simple shear,
/// kappa = [[0, gammadot], [0, 0]].
ConformationState constitutive_ode(double gammadot, double lambda_H, ClosureModel model,
                                   double fene_b, double N_kBT, double t_final);

/// Steady state of the same equation (integrates until the update stalls).
ConformationState constitutive_steady(double gammadot, double lambda_H, ClosureModel model,
                                      double fene_b, double N_kBT);

/// Equilibrium second-moment tensor <q q> of the Boltzmann density
/// (analytic for Hookean, radial quadrature for the finitely extensible law).
Mat2 equilibrium_moments(const SpringLaw& law, const PhysicalParams& params);

/// Exact steady <q q> of the inertial Hookean dumbbell in simple shear.
/// The bead-level model is linear in (q, V2-V1), so the stationary
/// covariance solves a 4x4 Lyapunov equation; no time stepping, no
/// sampling noise. Recovers the Oldroyd-B conformation as mass -> 0 and
/// (kBT/H) delta at zero shear for any mass.
Mat2 inertial_shear_steady(double gammadot, const PhysicalParams& params, double H);

/// Gridded function of the momentum variable p on a uniform 1D or 2D grid
/// spanning |p_i| <= p_max, used by the discrete collision operator.
struct MomentumGrid {
    int dim = 1;
    int n = 128;
    double p_max = 6.0;

    double h() const { return 2.0 * p_max / n; }
    double center(int i) const { return -p_max + (i + 0.5) * h(); }
    std::size_t size() const { return dim == 1 ? n : static_cast<std::size_t>(n) * n; }
};

/// Discrete collision operator Q(Phi) = div_p(p Phi) + kBT lap_p Phi with
/// zero-flux boundaries; conservative flux form.
std::vector<double> collision_apply(const std::vector<double>& phi, const MomentumGrid& grid,
                                    double kBT);

/// Normalized Maxwellian exp(-p^2/2kBT) sampled on the grid.
std::vector<double> maxwellian(const MomentumGrid& grid, double kBT);

/// Least-squares slope of log(error) against log(spacing).
/// Requires >= 3 points, strictly decreasing spacings, positive errors.
struct OrderFit {
    double order = 0.0;      ///< fitted slope
    double half_width = 0.0; ///< 95% confidence half-width of the slope
};
OrderFit convergence_order(const std::vector<double>& errors, const std::vector<double>& spacings);

} // namespace polykin::oracle
