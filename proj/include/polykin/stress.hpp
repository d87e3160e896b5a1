#pragma once

#include "polykin/core.hpp"
#include "polykin/field.hpp"
#include "polykin/vec.hpp"

#include <functional>
#include <vector>

namespace polykin {

/// Which isotropic term is subtracted from the s-integral:
/// Solvent subtracts N kBT (elastic stress vanishing at bulk equilibrium),
/// Solution subtracts 2 N kBT (the closed-solution form of the momentum
/// equations is written with the larger pressure-like term; the two modes
/// differ by exactly N kBT on the same psi).
enum class StressMode { Solvent, Solution };

/// Stress profile across the channel: one tensor per y sample.
struct StressField {
    std::vector<double> y;    ///< sample locations [m]
    std::vector<Mat2> tau;    ///< elastic stress [Pa]
    std::vector<double> p_p;  ///< polymer pressure N kBT [Pa]
    std::vector<double> N;    ///< dumbbell number density [1/m^3]
};

/// psi(y, q) evaluator carrying its own q-quadrature grid (midpoint rule on
/// nq x nq cells over [-q_max, q_max]^2). Lets the stress integrals run on
/// either a discrete kinetic field or a closed-form manufactured field.
class PsiEvaluator {
public:
    PsiEvaluator(int nq, double q_max) : nq_(nq), q_max_(q_max) {}
    virtual ~PsiEvaluator() = default;

    virtual double value(double y, const Vec2& q) const = 0;
    /// Second y-derivative; default is a central difference with spacing h.
    virtual double d2y(double y, const Vec2& q) const;

    int nq() const { return nq_; }
    double q_max() const { return q_max_; }
    double hq() const { return 2.0 * q_max_ / nq_; }
    double qc(int i) const { return -q_max_ + (i + 0.5) * hq(); }
    double fd_step() const { return fd_h_; }
    void set_fd_step(double h) { fd_h_ = h; }

private:
    int nq_;
    double q_max_;
    double fd_h_ = 1e-3;
};

/// Field-backed evaluator: cell-center values in q, linear interpolation in
/// y between cell centers (one-sided extension in the wall half-cells), zero
/// outside the domain and on masked cells.
class GridPsi : public PsiEvaluator {
public:
    explicit GridPsi(const KineticField& field);
    double value(double y, const Vec2& q) const override;

private:
    const KineticField& f_;
};

/// Closed-form evaluator for manufactured-solution studies.
class AnalyticPsi : public PsiEvaluator {
public:
    AnalyticPsi(int nq, double q_max, std::function<double(double, Vec2)> value,
                std::function<double(double, Vec2)> d2y = nullptr);
    double value(double y, const Vec2& q) const override;
    double d2y(double y, const Vec2& q) const override;

private:
    std::function<double(double, Vec2)> v_, d2_;
};

/// Number density N(y) = integral of psi over the admissible connector set.
double number_density_at(const PsiEvaluator& psi, double y, const Geometry& geom,
                         const SpringLaw& law);

/// The s-integral spring stress tau^s(y) (no isotropic subtraction):
/// tau^s = int_{-1/2}^{1/2} int_{Q_s(y)} psi(y + s q_y, q) q (x) F dq ds,
/// where Q_s(y) admits connectors with both bead endpoints inside the domain.
/// Gauss-Legendre quadrature with s_nodes points in s.
Mat2 spring_stress_at(const PsiEvaluator& psi, double y, const Geometry& geom,
                      const SpringLaw& law, int s_nodes);

/// Elastic stress at one point: tau^s minus the mode's isotropic term.
Mat2 stress_wall_aware_at(const PsiEvaluator& psi, double y, const Geometry& geom,
                          const SpringLaw& law, double kBT, int s_nodes,
                          StressMode mode = StressMode::Solvent);

/// Taylor-truncated stress: order 0 keeps the Kramers term; order 2 adds
/// (1/24) int q (x) F qy^2 d2y psi dq. No wall indicator beyond the
/// connector admissibility at y itself.
Mat2 stress_taylor_at(const PsiEvaluator& psi, double y, const Geometry& geom,
                      const SpringLaw& law, double kBT, int order,
                      StressMode mode = StressMode::Solvent);

/// Direct bead-pair spring force density:
/// f^s(y) = int F(q) [psi(y + q_y/2, q) - psi(y - q_y/2, q)] dq,
/// with the corresponding one-endpoint-at-y admissibility indicators.
Vec2 spring_force_direct_at(const PsiEvaluator& psi, double y, const Geometry& geom,
                            const SpringLaw& law);

/// Per-cell profiles of the above over a kinetic field.
StressField stress_wall_aware(const KineticField& field, const Geometry& geom,
                              const SpringLaw& law, double kBT, int s_nodes = 8,
                              StressMode mode = StressMode::Solvent);

/// Kramers form per y-cell: tau = <q (x) F> - N kBT delta (Solvent mode).
StressField stress_homogeneous(const KineticField& field, const SpringLaw& law,
                               double kBT, StressMode mode = StressMode::Solvent);

StressField stress_taylor(const KineticField& field, const Geometry& geom,
                          const SpringLaw& law, double kBT, int order,
                          StressMode mode = StressMode::Solvent);

/// f^t = -2 kBT dN/dy (central differences, one-sided 2nd order at the ends).
std::vector<double> thermal_force(const std::vector<double>& N, double hy, double kBT);

struct PolymerForce {
    std::vector<Vec2> f;   ///< total force density on the solvent
    std::vector<Vec2> fs;  ///< spring part, divergence of tau^s
    std::vector<double> ft;  ///< thermal part (y-component), -2 kBT dN/dy
};

/// Force decomposition from a stress profile.
/// Solvent mode: f = div tau - grad(N kBT); fs = div tau + kBT grad N.
/// Solution mode: f = div tau / (1 - phi); throws std::invalid_argument if
/// phi >= 1 anywhere.
PolymerForce total_polymer_force(const StressField& tau, const std::vector<double>& N,
                                 double hy, double kBT, StressMode mode,
                                 const std::vector<double>& phi = {});

/// Residual of the identity f^s = div tau^s in weak form:
/// |int f^s . g dy + int tau^s : grad g dy| / (||tau^s|| ||grad g||)
/// with L2 norms, g and its y-derivative supplied in closed form, midpoint
/// quadrature on ny_quad cells over [0, Ly].
double weak_identity_residual(const PsiEvaluator& psi, const Geometry& geom,
                              const SpringLaw& law, double Ly,
                              const std::function<Vec2(double)>& g,
                              const std::function<Vec2(double)>& dg,
                              int ny_quad = 256, int s_nodes = 8);

double weak_identity_residual(const KineticField& field, const Geometry& geom,
                              const SpringLaw& law,
                              const std::function<Vec2(double)>& g,
                              const std::function<Vec2(double)>& dg,
                              int s_nodes = 8);

/// d/dy of a cell-centered profile: central differences inside, one-sided
/// 2nd order at the ends. Shared by every profile-level operator so discrete
/// identities between force, stress divergence and the divergence constraint
/// hold exactly.
std::vector<double> derivative_profile(const std::vector<double>& v, double hy);

/// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace polykin
