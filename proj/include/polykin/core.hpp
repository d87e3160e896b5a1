#pragma once

#include "polykin/vec.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace polykin {

/// Dimensional constants of the dumbbell solution model (SI units).
struct PhysicalParams {
    double zeta = 1.0;   ///< bead drag coefficient [kg/s]
    double kBT = 1.0;    ///< thermal energy [J]
    double mass = 1.0;   ///< bead mass m [kg]
    double eta_s = 1.0;  ///< solvent viscosity [Pa s]
    double rho_s = 1.0;  ///< solvent density [kg/m^d]
    double rho_p = 0.0;  ///< polymer density, 2 m / V_d (derived when 0)
    double V_d = 1.0;    ///< volume of a single dumbbell [m^d]
    double N_av = 1.0;   ///< average number density [1/m^d]
    int dim = 2;         ///< spatial dimension, 2 or 3

    void validate() const;

    /// Dumbbell relaxation time zeta/(4H).
    double lambda_H(double H) const { return zeta / (4.0 * H); }
    /// Velocity-fluctuation time m/zeta.
    double lambda_B() const { return mass / zeta; }
    /// sqrt(lambda_B/lambda_H), the nondimensional inertia parameter.
    double epsilon(double H) const { return std::sqrt(lambda_B() / lambda_H(H)); }
    /// Polymer density; 2 m / V_d.
    double polymer_density() const { return rho_p > 0.0 ? rho_p : 2.0 * mass / V_d; }
};

/// Spring force law of the connector.
struct SpringLaw {
    enum class Kind { Hookean, FENE };

    Kind kind = Kind::Hookean;
    double H = 1.0;   ///< spring constant [N/m]
    double q0 = 0.0;  ///< FENE maximum extension [m]

    static SpringLaw hookean(double H) { return {Kind::Hookean, H, 0.0}; }
    static SpringLaw fene(double H, double q0) { return {Kind::FENE, H, q0}; }

    /// Finite-extensibility parameter H q0^2 / kBT.
    double fene_b(double kBT) const { return H * q0 * q0 / kBT; }

    /// Largest admissible |q| (infinity for Hookean).
    double max_extension() const {
        return kind == Kind::Hookean ? std::numeric_limits<double>::infinity() : q0;
    }
};

/// Spring force on bead 1 for connector q = r2 - r1. Odd and central:
/// Hookean F = H q, finitely extensible F = H q / (1 - |q|^2/q0^2).
/// Throws std::domain_error for an overextended finitely extensible spring.
Vec2 spring_force(const Vec2& q, const SpringLaw& law);

/// Scalar factor F(q) = fscale(|q|^2) * q.
double spring_force_scale(double q_norm2, const SpringLaw& law);

/// Equilibrium coil size: sqrt(kBT/H).
double ell0(const PhysicalParams& params, const SpringLaw& law);

/// Flow domain.
struct Geometry {
    enum class Kind { Channel, PeriodicBox, FreeSpace };

    Kind kind = Kind::FreeSpace;
    double gap = 0.0;   ///< channel gap L_y, walls at y=0 and y=L_y
    double side = 0.0;  ///< periodic box side

    static Geometry channel(double gap);
    static Geometry periodic_box(double side);
    static Geometry free_space() { return {}; }

    /// Point membership; the channel interior is the open slab 0 < y < L_y.
    bool contains(const Vec2& r) const {
        if (kind == Kind::Channel) return r.y > 0.0 && r.y < gap;
        return true;  // periodic box and free space have no excluded points
    }

    bool has_walls() const { return kind == Kind::Channel; }
};

/// Membership of q in the configuration set at (x, s): both bead positions
/// x + (s -/+ 1/2) q must lie inside the domain.
bool in_configuration_set(const Vec2& x, const Vec2& q, double s, const Geometry& geom);

/// Dimensionless groups of the rescaled equations.
struct NondimGroups {
    double De = 0.0;          ///< zeta V / (4 H L)
    double Re = 0.0;          ///< rho_s V L / eta, eta = eta_s + N_av kBT zeta/(4H)
    double ell_ratio = 0.0;   ///< ell0 / L
    double eta_s_star = 0.0;  ///< eta_s / eta
    double eta_p_star = 0.0;  ///< N_av kBT zeta / (4 H eta)
    double lambda_H = 0.0;    ///< zeta/(4H) [s]
    double lambda_B = 0.0;    ///< m/zeta [s]
    double epsilon = 0.0;     ///< sqrt(lambda_B/lambda_H)
};

/// Derive all groups from dimensional inputs and the (V, L) scales.
NondimGroups nondim_groups(const PhysicalParams& params, const SpringLaw& law,
                           double V, double L);

} // namespace polykin
