#include "polykin/field.hpp"

#include <cmath>
#include <stdexcept>

namespace polykin {

KineticField KineticField::create(const Geometry& geom, const SpringLaw& law,
                                  int ny, int nq, double q_max, double Ly_free) {
    if (ny < 1 || nq < 4) throw std::invalid_argument("KineticField: grid too small");
    KineticField f;
    f.ny = ny;
    f.nq = nq;
    f.q_max = q_max;
    switch (geom.kind) {
    case Geometry::Kind::Channel:
        f.Ly = geom.gap;
        f.periodic_y = false;
        break;
    case Geometry::Kind::PeriodicBox:
        f.Ly = geom.side;
        f.periodic_y = true;
        break;
    case Geometry::Kind::FreeSpace:
        f.Ly = Ly_free;
        f.periodic_y = true;
        break;
    }
    f.psi.assign(f.size(), 0.0);
    f.active.assign(f.size(), 1);
    const bool fene = law.kind == SpringLaw::Kind::FENE;
    const double q0eff = fene ? law.q0 * (1.0 - 1e-6) : 0.0;
    for (int iy = 0; iy < ny; ++iy) {
        const double y = f.yc(iy);
        for (int ix = 0; ix < nq; ++ix) {
            for (int iq = 0; iq < nq; ++iq) {
                const Vec2 q{f.qc(ix), f.qc(iq)};
                bool ok = true;
                if (fene && norm(q) >= q0eff) ok = false;
                if (ok && geom.kind == Geometry::Kind::Channel)
                    ok = in_configuration_set({0.0, y}, q, 0.0, geom);
                f.active[f.idx(iy, ix, iq)] = ok ? 1 : 0;
            }
        }
    }
    return f;
}

std::vector<double> KineticField::marginal_density() const {
    std::vector<double> N(ny, 0.0);
    const double w = dq();
    for (int iy = 0; iy < ny; ++iy) {
        double s = 0.0;
        const double* p = psi.data() + idx(iy, 0, 0);
        for (int c = 0; c < nq * nq; ++c) s += p[c];
        N[iy] = s * w;
    }
    return N;
}

double KineticField::total_mass() const {
    double s = 0.0;
    for (double v : psi) s += v;
    return s * dq() * hy();
}

std::vector<Mat2> KineticField::second_moment() const {
    std::vector<Mat2> M(ny);
    for (int iy = 0; iy < ny; ++iy) {
        Mat2 m;
        double n = 0.0;
        for (int ix = 0; ix < nq; ++ix) {
            for (int iq = 0; iq < nq; ++iq) {
                const double p = psi[idx(iy, ix, iq)];
                const Vec2 q{qc(ix), qc(iq)};
                m += p * outer(q, q);
                n += p;
            }
        }
        if (n > 0.0) M[iy] = (1.0 / n) * m;
    }
    return M;
}

Mat2 KineticField::mean_second_moment() const {
    Mat2 m;
    double n = 0.0;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nq; ++ix) {
            for (int iq = 0; iq < nq; ++iq) {
                const double p = psi[idx(iy, ix, iq)];
                const Vec2 q{qc(ix), qc(iq)};
                m += p * outer(q, q);
                n += p;
            }
        }
    }
    if (n > 0.0) m = (1.0 / n) * m;
    return m;
}

void KineticField::set_boltzmann(const PhysicalParams& params, const SpringLaw& law, double C) {
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nq; ++ix) {
            for (int iq = 0; iq < nq; ++iq) {
                const std::size_t k = idx(iy, ix, iq);
                if (!active[k]) { psi[k] = 0.0; continue; }
                const Vec2 q{qc(ix), qc(iq)};
                double U;
                if (law.kind == SpringLaw::Kind::Hookean) {
                    U = 0.5 * law.H * norm2(q);
                } else {
                    U = -0.5 * law.H * law.q0 * law.q0 *
                        std::log(1.0 - norm2(q) / (law.q0 * law.q0));
                }
                psi[k] = C * std::exp(-U / params.kBT);
            }
        }
    }
}

void KineticField::set_gaussian(double N0, double cov) {
    const double norm_c = 1.0 / (2.0 * 3.14159265358979323846 * cov);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nq; ++ix)
            for (int iq = 0; iq < nq; ++iq) {
                const std::size_t k = idx(iy, ix, iq);
                if (!active[k]) { psi[k] = 0.0; continue; }
                const Vec2 q{qc(ix), qc(iq)};
                psi[k] = N0 * norm_c * std::exp(-norm2(q) / (2.0 * cov));
            }
}

void KineticField::scale_mean_density(double N_target) {
    const auto N = marginal_density();
    double m = 0.0;
    for (double v : N) m += v;
    m /= ny;
    if (m <= 0.0) throw std::runtime_error("scale_mean_density: empty field");
    const double s = N_target / m;
    for (double& v : psi) v *= s;
}

} // namespace polykin
