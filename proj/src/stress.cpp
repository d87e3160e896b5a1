#include "polykin/stress.hpp"

#include "polykin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polykin {

namespace {

inline bool connector_ok(const Vec2& q, const SpringLaw& law) {
    if (law.kind != SpringLaw::Kind::FENE) return true;
    return norm(q) < law.q0 * (1.0 - 1e-6);
}

} // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

double PsiEvaluator::d2y(double y, const Vec2& q) const {
    const double h = fd_h_;
    return (value(y + h, q) - 2.0 * value(y, q) + value(y - h, q)) / (h * h);
}

GridPsi::GridPsi(const KineticField& field) : PsiEvaluator(field.nq, field.q_max), f_(field) {}

double GridPsi::value(double y, const Vec2& q) const {
    if (std::abs(q.x) >= f_.q_max || std::abs(q.y) >= f_.q_max) return 0.0;
    const double h = f_.hq();
    const int ix = std::clamp(static_cast<int>((q.x + f_.q_max) / h), 0, f_.nq - 1);
    const int iq = std::clamp(static_cast<int>((q.y + f_.q_max) / h), 0, f_.nq - 1);
    if (f_.ny == 1) return f_.psi[f_.idx(0, ix, iq)];

    double u = y / f_.hy() - 0.5;
    if (f_.periodic_y) {
        u -= f_.ny * std::floor(u / f_.ny);
        const int i0 = static_cast<int>(u) % f_.ny;
        const int i1 = (i0 + 1) % f_.ny;
        const double t = u - std::floor(u);
        return (1.0 - t) * f_.psi[f_.idx(i0, ix, iq)] + t * f_.psi[f_.idx(i1, ix, iq)];
    }
    if (y < 0.0 || y > f_.Ly) return 0.0;
    // constant extension in the wall half-cells
    if (u <= 0.0) return f_.psi[f_.idx(0, ix, iq)];
    if (u >= f_.ny - 1) return f_.psi[f_.idx(f_.ny - 1, ix, iq)];
    const int i0 = static_cast<int>(u);
    const double t = u - i0;
    return (1.0 - t) * f_.psi[f_.idx(i0, ix, iq)] + t * f_.psi[f_.idx(i0 + 1, ix, iq)];
}

AnalyticPsi::AnalyticPsi(int nq, double q_max, std::function<double(double, Vec2)> value,
                         std::function<double(double, Vec2)> d2y)
    : PsiEvaluator(nq, q_max), v_(std::move(value)), d2_(std::move(d2y)) {
    if (!v_) throw std::invalid_argument("AnalyticPsi: value function required");
}

double AnalyticPsi::value(double y, const Vec2& q) const { return v_(y, q); }

double AnalyticPsi::d2y(double y, const Vec2& q) const {
    return d2_ ? d2_(y, q) : PsiEvaluator::d2y(y, q);
}

double number_density_at(const PsiEvaluator& psi, double y, const Geometry& geom,
                         const SpringLaw& law) {
    const int nq = psi.nq();
    const double w = psi.hq() * psi.hq();
    double N = 0.0;
    for (int ix = 0; ix < nq; ++ix) {
        for (int iq = 0; iq < nq; ++iq) {
            const Vec2 q{psi.qc(ix), psi.qc(iq)};
            if (!connector_ok(q, law)) continue;
            if (!in_configuration_set({0.0, y}, q, 0.0, geom)) continue;
            N += psi.value(y, q);
        }
    }
    return N * w;
}

Mat2 spring_stress_at(const PsiEvaluator& psi, double y, const Geometry& geom,
                      const SpringLaw& law, int s_nodes) {
    std::vector<double> sn, sw;
    gauss_legendre(s_nodes, sn, sw);
    const int nq = psi.nq();
    const double w = psi.hq() * psi.hq();
    const bool walls = geom.has_walls();
    Mat2 tau;
    for (int ix = 0; ix < nq; ++ix) {
        for (int iq = 0; iq < nq; ++iq) {
            const Vec2 q{psi.qc(ix), psi.qc(iq)};
            if (!connector_ok(q, law)) continue;
            // the admissible set {s : both endpoints inside} is an interval;
            // integrate over the clipped range so the quadrature only sees a
            // continuous integrand
            double s_lo = -0.5, s_hi = 0.5;
            if (walls) {
                if (!(y > 0.0 && y < geom.gap)) continue;
                if (q.y != 0.0) {
                    const double a1 = -y / q.y, a2 = (geom.gap - y) / q.y;
                    const double b1 = std::min(a1, a2), b2 = std::max(a1, a2);
                    s_lo = std::max(s_lo, b1 + 0.5);
                    s_hi = std::min(s_hi, b2 - 0.5);
                    if (s_hi <= s_lo) continue;
                }
            }
            const Mat2 qF = outer(q, spring_force(q, law));
            const double mid = 0.5 * (s_lo + s_hi), half = 0.5 * (s_hi - s_lo);
            double acc = 0.0;
            for (int k = 0; k < s_nodes; ++k)
                acc += half * sw[k] * psi.value(y + (mid + half * sn[k]) * q.y, q);
            tau += acc * qF;
        }
    }
    return w * tau;
}

Mat2 stress_wall_aware_at(const PsiEvaluator& psi, double y, const Geometry& geom,
                          const SpringLaw& law, double kBT, int s_nodes, StressMode mode) {
    Mat2 tau = spring_stress_at(psi, y, geom, law, s_nodes);
    const double N = number_density_at(psi, y, geom, law);
    const double c = mode == StressMode::Solvent ? 1.0 : 2.0;
    const double iso = c * N * kBT;
    tau.xx -= iso;
    tau.yy -= iso;
    return tau;
}

Mat2 stress_taylor_at(const PsiEvaluator& psi, double y, const Geometry& geom,
                      const SpringLaw& law, double kBT, int order, StressMode mode) {
    if (order != 0 && order != 2)
        throw std::invalid_argument("stress_taylor_at: order must be 0 or 2");
    const int nq = psi.nq();
    const double w = psi.hq() * psi.hq();
    Mat2 tau;
    double N = 0.0;
    for (int ix = 0; ix < nq; ++ix) {
        for (int iq = 0; iq < nq; ++iq) {
            const Vec2 q{psi.qc(ix), psi.qc(iq)};
            if (!connector_ok(q, law)) continue;
            if (!in_configuration_set({0.0, y}, q, 0.0, geom)) continue;
            const double p = psi.value(y, q);
            N += p;
            const Mat2 qF = outer(q, spring_force(q, law));
            tau += p * qF;
            if (order == 2)
                tau += (q.y * q.y / 24.0 * psi.d2y(y, q)) * qF;
        }
    }
    const double c = mode == StressMode::Solvent ? 1.0 : 2.0;
    const double iso = c * N * w * kBT;
    tau *= w;
    tau.xx -= iso;
    tau.yy -= iso;
    return tau;
}

Vec2 spring_force_direct_at(const PsiEvaluator& psi, double y, const Geometry& geom,
                            const SpringLaw& law) {
    const int nq = psi.nq();
    const double w = psi.hq() * psi.hq();
    Vec2 fs;
    if (!geom.contains({0.0, y})) return fs;
    for (int ix = 0; ix < nq; ++ix) {
        for (int iq = 0; iq < nq; ++iq) {
            const Vec2 q{psi.qc(ix), psi.qc(iq)};
            if (!connector_ok(q, law)) continue;
            const Vec2 F = spring_force(q, law);
            double diff = 0.0;
            if (geom.contains({0.0, y + q.y}))
                diff += psi.value(y + 0.5 * q.y, q);
            if (geom.contains({0.0, y - q.y}))
                diff -= psi.value(y - 0.5 * q.y, q);
            fs += diff * F;
        }
    }
    return w * fs;
}

namespace {

StressField profile_from(const KineticField& field,
                         const std::function<Mat2(double)>& tau_at,
                         const Geometry& geom, const SpringLaw& law, double kBT) {
    StressField out;
    out.y.resize(field.ny);
    out.tau.resize(field.ny);
    out.p_p.resize(field.ny);
    out.N.resize(field.ny);
    GridPsi psi(field);
    parallel_for(field.ny, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double y = field.yc(static_cast<int>(i));
            out.y[i] = y;
            out.tau[i] = tau_at(y);
            out.N[i] = number_density_at(psi, y, geom, law);
            out.p_p[i] = out.N[i] * kBT;
        }
    });
    return out;
}

} // namespace

StressField stress_wall_aware(const KineticField& field, const Geometry& geom,
                              const SpringLaw& law, double kBT, int s_nodes,
                              StressMode mode) {
    GridPsi psi(field);
    return profile_from(field,
                        [&](double y) {
                            return stress_wall_aware_at(psi, y, geom, law, kBT, s_nodes, mode);
                        },
                        geom, law, kBT);
}

StressField stress_homogeneous(const KineticField& field, const SpringLaw& law,
                               double kBT, StressMode mode) {
    StressField out;
    out.y.resize(field.ny);
    out.tau.resize(field.ny);
    out.p_p.resize(field.ny);
    out.N.resize(field.ny);
    const double w = field.dq();
    const double c = mode == StressMode::Solvent ? 1.0 : 2.0;
    for (int iy = 0; iy < field.ny; ++iy) {
        Mat2 tau;
        double N = 0.0;
        for (int ix = 0; ix < field.nq; ++ix) {
            for (int iq = 0; iq < field.nq; ++iq) {
                const std::size_t k = field.idx(iy, ix, iq);
                if (!field.active[k]) continue;
                const double p = field.psi[k];
                const Vec2 q{field.qc(ix), field.qc(iq)};
                if (!connector_ok(q, law)) continue;
                tau += p * outer(q, spring_force(q, law));
                N += p;
            }
        }
        tau *= w;
        N *= w;
        tau.xx -= c * N * kBT;
        tau.yy -= c * N * kBT;
        out.y[iy] = field.yc(iy);
        out.tau[iy] = tau;
        out.N[iy] = N;
        out.p_p[iy] = N * kBT;
    }
    return out;
}

StressField stress_taylor(const KineticField& field, const Geometry& geom,
                          const SpringLaw& law, double kBT, int order, StressMode mode) {
    GridPsi psi(field);
    return profile_from(field,
                        [&](double y) {
                            return stress_taylor_at(psi, y, geom, law, kBT, order, mode);
                        },
                        geom, law, kBT);
}

std::vector<double> thermal_force(const std::vector<double>& N, double hy, double kBT) {
    const int n = static_cast<int>(N.size());
    if (n < 3) throw std::invalid_argument("thermal_force: need at least 3 samples");
    std::vector<double> ft(n);
    const double c = -2.0 * kBT / (2.0 * hy);
    ft[0] = c * (-3.0 * N[0] + 4.0 * N[1] - N[2]);
    for (int i = 1; i < n - 1; ++i) ft[i] = c * (N[i + 1] - N[i - 1]);
    ft[n - 1] = c * (3.0 * N[n - 1] - 4.0 * N[n - 2] + N[n - 3]);
    return ft;
}

namespace {

// y-derivative of a sampled profile: central interior, one-sided 2nd order ends
template <class Get>
std::vector<double> ddy(int n, double hy, Get v) {
    std::vector<double> d(n);
    d[0] = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * hy);
    for (int i = 1; i < n - 1; ++i) d[i] = (v(i + 1) - v(i - 1)) / (2.0 * hy);
    d[n - 1] = (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / (2.0 * hy);
    return d;
}

} // namespace

std::vector<double> derivative_profile(const std::vector<double>& v, double hy) {
    if (v.size() < 3) throw std::invalid_argument("derivative_profile: need >= 3 samples");
    return ddy(static_cast<int>(v.size()), hy, [&](int i) { return v[i]; });
}

PolymerForce total_polymer_force(const StressField& tau, const std::vector<double>& N,
                                 double hy, double kBT, StressMode mode,
                                 const std::vector<double>& phi) {
    const int n = static_cast<int>(tau.tau.size());
    if (static_cast<int>(N.size()) != n)
        throw std::invalid_argument("total_polymer_force: grid mismatch");
    if (n < 3) throw std::invalid_argument("total_polymer_force: need at least 3 cells");
    if (mode == StressMode::Solution) {
        if (static_cast<int>(phi.size()) != n && !phi.empty())
            throw std::invalid_argument("total_polymer_force: phi grid mismatch");
        for (double p : phi)
            if (p >= 1.0)
                throw std::invalid_argument("total_polymer_force: polymer fraction >= 1");
    }

    const auto dtx = ddy(n, hy, [&](int i) { return tau.tau[i].yx; });
    const auto dty = ddy(n, hy, [&](int i) { return tau.tau[i].yy; });
    const auto dN = ddy(n, hy, [&](int i) { return N[i]; });
    const double c = mode == StressMode::Solvent ? 1.0 : 2.0;

    PolymerForce out;
    out.f.resize(n);
    out.fs.resize(n);
    out.ft.resize(n);
    for (int i = 0; i < n; ++i) {
        const Vec2 divtau{dtx[i], dty[i]};
        out.fs[i] = divtau + Vec2{0.0, c * kBT * dN[i]};
        out.ft[i] = -2.0 * kBT * dN[i];
        if (mode == StressMode::Solvent) {
            out.f[i] = divtau - Vec2{0.0, kBT * dN[i]};
        } else {
            const double ph = phi.empty() ? 0.0 : phi[i];
            out.f[i] = (1.0 / (1.0 - ph)) * divtau;
        }
    }
    return out;
}

double weak_identity_residual(const PsiEvaluator& psi, const Geometry& geom,
                              const SpringLaw& law, double Ly,
                              const std::function<Vec2(double)>& g,
                              const std::function<Vec2(double)>& dg,
                              int ny_quad, int s_nodes) {
    const double h = Ly / ny_quad;
    std::vector<double> part_i(ny_quad), part_tau2(ny_quad), part_dg2(ny_quad);
    parallel_for(ny_quad, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double y = (i + 0.5) * h;
            const Vec2 fs = spring_force_direct_at(psi, y, geom, law);
            const Mat2 ts = spring_stress_at(psi, y, geom, law, s_nodes);
            const Vec2 gp = dg(y);
            // grad g has only the d/dy row; tau : grad g = tau_yx gx' + tau_yy gy'
            part_i[i] = dot(fs, g(y)) + ts.yx * gp.x + ts.yy * gp.y;
            part_tau2[i] = frobenius_norm(ts) * frobenius_norm(ts);
            part_dg2[i] = norm2(gp);
        }
    });
    double I = 0.0, t2 = 0.0, g2 = 0.0;
    for (int i = 0; i < ny_quad; ++i) {
        I += part_i[i];
        t2 += part_tau2[i];
        g2 += part_dg2[i];
    }
    const double denom = std::sqrt(t2 * h) * std::sqrt(g2 * h);
    if (denom == 0.0) return 0.0;
    return std::abs(I * h) / denom;
}

double weak_identity_residual(const KineticField& field, const Geometry& geom,
                              const SpringLaw& law,
                              const std::function<Vec2(double)>& g,
                              const std::function<Vec2(double)>& dg, int s_nodes) {
    GridPsi psi(field);
    const int ny_quad = std::max(256, 2 * field.ny);
    return weak_identity_residual(psi, geom, law, field.Ly, g, dg, ny_quad, s_nodes);
}

} // namespace polykin
