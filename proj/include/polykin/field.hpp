#pragma once

#include "polykin/core.hpp"
#include "polykin/vec.hpp"

#include <cstdint>
#include <vector>

namespace polykin {

/// Configuration-space distribution psi(y, qx, qy) on a cell-centered grid:
/// channel coordinate y in [0, Ly] (ny cells; ny == 1 means a statistically
/// homogeneous state with no y transport) and connector q in the square
/// [-q_max, q_max]^2 (nq cells per axis). Cells whose dumbbell endpoints
/// leave the domain, or whose connector exceeds the spring extensibility,
/// are masked out: psi = 0 there and no flux crosses the mask boundary.
struct KineticField {
    int ny = 1;
    double Ly = 1.0;
    bool periodic_y = false;
    int nq = 64;
    double q_max = 6.0;
    double time = 0.0;
    std::vector<double> psi;
    std::vector<std::uint8_t> active;

    static KineticField create(const Geometry& geom, const SpringLaw& law,
                               int ny, int nq, double q_max, double Ly_free = 1.0);

    double hy() const { return Ly / ny; }
    double hq() const { return 2.0 * q_max / nq; }
    double yc(int iy) const { return (iy + 0.5) * hy(); }
    double qc(int i) const { return -q_max + (i + 0.5) * hq(); }
    std::size_t idx(int iy, int ix, int iq) const {
        return (static_cast<std::size_t>(iy) * nq + ix) * nq + iq;
    }
    std::size_t size() const { return static_cast<std::size_t>(ny) * nq * nq; }

    /// Cell volume element in (q) space.
    double dq() const { return hq() * hq(); }

    /// N(y) = integral of psi over q by the grid quadrature.
    std::vector<double> marginal_density() const;
    /// Total dumbbell count per unit cross-section: integral of N over y.
    double total_mass() const;
    /// Second moment <q q>(y) (normalized by N(y); zero tensor where N = 0).
    std::vector<Mat2> second_moment() const;
    /// Domain-averaged <q q> over all y cells.
    Mat2 mean_second_moment() const;

    /// Fill with C * exp(-U(q)/kBT) on active cells (the no-flow equilibrium).
    void set_boltzmann(const PhysicalParams& params, const SpringLaw& law, double C);
    /// Fill with N0 * normalized Gaussian of covariance cov*I in q, uniform in y.
    void set_gaussian(double N0, double cov);
    /// Normalize so that the mean of N(y) equals N_target.
    void scale_mean_density(double N_target);
};

} // namespace polykin
