#include "polykin/inertialess.hpp"

#include "polykin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polykin {

namespace {

inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

// Bernoulli function x / (e^x - 1) of the fitted flux
inline double bern(double x) {
    if (std::abs(x) < 1e-5) return 1.0 - 0.5 * x + x * x / 12.0;
    return x / std::expm1(x);
}

} // namespace

FpSolver::FpSolver(const PhysicalParams& params, const SpringLaw& law, FpOptions opts)
    : params_(params), law_(law), opts_(opts) {
    params_.validate();
}

void FpSolver::build_force_tables(const KineticField& f) {
    const int nq = f.nq;
    fx_face_.assign(static_cast<std::size_t>(nq + 1) * nq, 0.0);
    fy_face_.assign(static_cast<std::size_t>(nq) * (nq + 1), 0.0);
    const double q02 = law_.q0 * law_.q0;
    auto fscale = [&](double r2) {
        if (law_.kind == SpringLaw::Kind::Hookean) return law_.H;
        if (r2 >= q02) return 0.0;  // masked region, value never used
        return law_.H / (1.0 - r2 / q02);
    };
    for (int fx = 0; fx <= nq; ++fx) {
        const double qx = -f.q_max + fx * f.hq();
        for (int iq = 0; iq < nq; ++iq) {
            const double qy = f.qc(iq);
            fx_face_[static_cast<std::size_t>(fx) * nq + iq] = fscale(qx * qx + qy * qy) * qx;
        }
    }
    for (int ix = 0; ix < nq; ++ix) {
        const double qx = f.qc(ix);
        for (int fy = 0; fy <= nq; ++fy) {
            const double qy = -f.q_max + fy * f.hq();
            fy_face_[static_cast<std::size_t>(ix) * (nq + 1) + fy] = fscale(qx * qx + qy * qy) * qy;
        }
    }

    // spring potential difference between adjacent cell centers, in kBT
    auto ukbt = [&](double r2) {
        if (law_.kind == SpringLaw::Kind::Hookean)
            return 0.5 * law_.H * r2 / params_.kBT;
        if (r2 >= q02) return 0.0;  // masked region, flux never evaluated
        return -0.5 * law_.fene_b(params_.kBT) * std::log(1.0 - r2 / q02);
    };
    dux_face_.assign(static_cast<std::size_t>(nq + 1) * nq, 0.0);
    duy_face_.assign(static_cast<std::size_t>(nq) * (nq + 1), 0.0);
    for (int fx = 1; fx < nq; ++fx)
        for (int iq = 0; iq < nq; ++iq) {
            const double qy = f.qc(iq), qL = f.qc(fx - 1), qR = f.qc(fx);
            dux_face_[static_cast<std::size_t>(fx) * nq + iq] =
                ukbt(qR * qR + qy * qy) - ukbt(qL * qL + qy * qy);
        }
    for (int ix = 0; ix < nq; ++ix)
        for (int fy = 1; fy < nq; ++fy) {
            const double qx = f.qc(ix), qL = f.qc(fy - 1), qR = f.qc(fy);
            duy_face_[static_cast<std::size_t>(ix) * (nq + 1) + fy] =
                ukbt(qx * qx + qR * qR) - ukbt(qx * qx + qL * qL);
        }
}

void FpSolver::set_flow(const KineticField& f, const FlowField& flow) {
    const int ny = f.ny, nq = f.nq;
    if (ny != ny_ || nq != nq_ || f.q_max != qmax_ || f.Ly != Ly_) {
        build_force_tables(f);
        ny_ = ny; nq_ = nq; qmax_ = f.q_max; Ly_ = f.Ly;
    }
    dv_c_.assign(static_cast<std::size_t>(ny) * nq, Vec2{});
    dv_f_.assign(static_cast<std::size_t>(ny) * (nq + 1), Vec2{});
    vmy_f_.assign(static_cast<std::size_t>(ny + 1) * nq, 0.0);
    const bool truncated = opts_.mode == VelocityMode::TruncatedOrder2;
    const double hfd = f.ny > 1 ? f.hy() : 0.1 * f.hq();
    for (int iy = 0; iy < ny; ++iy) {
        const double y = f.yc(iy);
        const Vec2 grad = truncated ? flow.dy({0.0, y}, hfd) : Vec2{};
        for (int iq = 0; iq < nq; ++iq) {
            const double qy = f.qc(iq);
            dv_c_[static_cast<std::size_t>(iy) * nq + iq] =
                truncated ? qy * grad
                          : flow.at({0.0, y + 0.5 * qy}) - flow.at({0.0, y - 0.5 * qy});
        }
        for (int fq = 0; fq <= nq; ++fq) {
            const double qy = -f.q_max + fq * f.hq();
            dv_f_[static_cast<std::size_t>(iy) * (nq + 1) + fq] =
                truncated ? qy * grad
                          : flow.at({0.0, y + 0.5 * qy}) - flow.at({0.0, y - 0.5 * qy});
        }
    }
    for (int fy = 0; fy <= ny; ++fy) {
        const double y = fy * f.hy();
        for (int iq = 0; iq < nq; ++iq) {
            const double qy = f.qc(iq);
            vmy_f_[static_cast<std::size_t>(fy) * nq + iq] =
                truncated ? flow.at({0.0, y}).y
                          : 0.5 * (flow.at({0.0, y + 0.5 * qy}).y + flow.at({0.0, y - 0.5 * qy}).y);
        }
    }
}

FpStability FpSolver::stability(const KineticField& f) const {
    if (dv_c_.empty())
        throw std::runtime_error("FpSolver: set_flow must be called before stepping");
    const double Dq = 2.0 * params_.kBT / params_.zeta;
    const double Dx = 0.5 * params_.kBT / params_.zeta;
    const double hq = f.hq(), hy = f.hy();
    const int nq = f.nq, ny = f.ny;

    double uq_max = 0.0, uy_max = 0.0;
    // bound the advection speed over faces adjacent to active cells
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nq; ++ix) {
            for (int iq = 0; iq < nq; ++iq) {
                if (!f.active[f.idx(iy, ix, iq)]) continue;
                const double ux = std::abs(-2.0 / params_.zeta * fx_face_[static_cast<std::size_t>(ix) * nq + iq]) +
                                  std::abs(dv_c_[static_cast<std::size_t>(iy) * nq + iq].x);
                const double uy = std::abs(-2.0 / params_.zeta * fy_face_[static_cast<std::size_t>(ix) * (nq + 1) + iq]) +
                                  std::abs(dv_f_[static_cast<std::size_t>(iy) * (nq + 1) + iq].y);
                uq_max = std::max({uq_max, ux, uy});
            }
        }
    }
    for (double v : vmy_f_) uy_max = std::max(uy_max, std::abs(v));

    double r_q = opts_.q_terms ? 2.0 * Dq / (hq * hq) * 2.0 : 0.0;
    double r_x = (opts_.x_terms && ny > 1) ? 2.0 * Dx / (hy * hy) : 0.0;
    double r_adv = (opts_.q_terms ? 2.0 * uq_max / hq : 0.0) +
                   ((opts_.x_terms && ny > 1) ? uy_max / hy : 0.0);
    FpStability st;
    const double total = r_q + r_x + r_adv;
    st.dt_max = total > 0.0 ? opts_.cfl / total : std::numeric_limits<double>::infinity();
    if (r_q >= r_x && r_q >= r_adv) st.limiting = "q-diffusion";
    else if (r_x >= r_adv) st.limiting = "x-diffusion";
    else st.limiting = "advection CFL";
    return st;
}

void FpSolver::step(KineticField& f, double dt) {
    const FpStability st = stability(f);
    if (dt > st.dt_max * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "fp_step: dt " << dt << " exceeds stability bound " << st.dt_max
           << " (limiting term: " << st.limiting << ")";
        throw std::runtime_error(os.str());
    }

    const int ny = f.ny, nq = f.nq;
    const double hq = f.hq(), hy = f.hy();
    const double Dq = 2.0 * params_.kBT / params_.zeta;
    const double Dx = 0.5 * params_.kBT / params_.zeta;

    scratch_.assign(f.size(), 0.0);
    double* out = scratch_.data();
    const double* psi = f.psi.data();
    const std::uint8_t* act = f.active.data();

    // generic face update along a strided line; pe_at_face carries the spring
    // potential drop of the exponentially fitted drift-diffusion flux
    auto sweep_line = [&](std::size_t base, std::ptrdiff_t stride, int n,
                          auto u_at_face, auto pe_at_face, double D, double h, bool periodic) {
        const int f0 = periodic ? 0 : 1;
        for (int fc = f0; fc < n; ++fc) {
            const int iR = fc;
            const int iL = periodic ? (fc + n - 1) % n : fc - 1;
            const std::size_t kL = base + static_cast<std::size_t>(iL) * stride;
            const std::size_t kR = base + static_cast<std::size_t>(iR) * stride;
            if (!act[kL] || !act[kR]) continue;
            const double pL = psi[kL], pR = psi[kR];
            const double pe = pe_at_face(fc);
            double flux = pe == 0.0 ? -D * (pR - pL) / h
                                    : D / h * (bern(-pe) * pL - bern(pe) * pR);
            const double u = u_at_face(fc);
            if (u != 0.0) {
                double pf;
                if (u > 0.0) {
                    double slope = 0.0;
                    const int iLL = periodic ? (iL + n - 1) % n : iL - 1;
                    if (iLL >= 0) {
                        const std::size_t kLL = base + static_cast<std::size_t>(iLL) * stride;
                        if (act[kLL]) slope = minmod(pL - psi[kLL], pR - pL);
                    }
                    pf = pL + 0.5 * slope;
                } else {
                    double slope = 0.0;
                    const int iRR = periodic ? (iR + 1) % n : iR + 1;
                    if (iRR < n || periodic) {
                        const std::size_t kRR = base + static_cast<std::size_t>(periodic ? iRR % n : iRR) * stride;
                        if (iRR < n || periodic) {
                            if (act[kRR]) slope = minmod(pR - pL, psi[kRR] - pR);
                        }
                    }
                    pf = pR - 0.5 * slope;
                }
                flux += u * pf;
            }
            out[kL] -= flux / h;
            out[kR] += flux / h;
        }
    };

    if (opts_.q_terms) {
        parallel_for(ny, [&](std::size_t y0, std::size_t y1) {
            for (std::size_t iy = y0; iy < y1; ++iy) {
                // qy axis (stride 1)
                for (int ix = 0; ix < nq; ++ix) {
                    const std::size_t base = f.idx(static_cast<int>(iy), ix, 0);
                    const double* duf = duy_face_.data() + static_cast<std::size_t>(ix) * (nq + 1);
                    const Vec2* dvf = dv_f_.data() + iy * (nq + 1);
                    sweep_line(base, 1, nq,
                               [&](int fc) { return dvf[fc].y; },
                               [&](int fc) { return -duf[fc]; },
                               Dq, hq, false);
                }
                // qx axis (stride nq)
                for (int iq = 0; iq < nq; ++iq) {
                    const std::size_t base = f.idx(static_cast<int>(iy), 0, iq);
                    const Vec2 dvc = dv_c_[iy * nq + iq];
                    const double* duf = dux_face_.data();
                    sweep_line(base, nq, nq,
                               [&](int) { return dvc.x; },
                               [&](int fc) { return -duf[static_cast<std::size_t>(fc) * nq + iq]; },
                               Dq, hq, false);
                }
            }
        });
    }

    if (opts_.x_terms && ny > 1) {
        // y axis (stride nq*nq); parallelize over qx columns
        parallel_for(nq, [&](std::size_t x0, std::size_t x1) {
            for (std::size_t ix = x0; ix < x1; ++ix) {
                for (int iq = 0; iq < nq; ++iq) {
                    const std::size_t base = f.idx(0, static_cast<int>(ix), iq);
                    sweep_line(base, static_cast<std::ptrdiff_t>(nq) * nq, ny,
                               [&](int fc) { return vmy_f_[static_cast<std::size_t>(fc) * nq + iq]; },
                               [&](int) { return 0.0; },
                               Dx, hy, f.periodic_y);
                }
            }
        });
    }

    for (std::size_t k = 0; k < f.size(); ++k) f.psi[k] += dt * out[k];
    f.time += dt;
}

FpSteadyReport fp_steady(KineticField& field, FpSolver& solver, const FlowField& flow,
                         double tol, double t_max) {
    if (!(tol > 0.0)) throw std::invalid_argument("fp_steady: tol must be positive");
    solver.set_flow(field, flow);
    const double lambda_H = solver.params().lambda_H(solver.law().H);
    FpSteadyReport rep;
    const double dt = 0.95 * solver.stability(field).dt_max;
    rep.dt = dt;
    const int check_every = std::max(1, static_cast<int>(0.2 * lambda_H / dt));
    std::vector<double> prev = field.psi;
    double norm1 = 0.0;
    for (double v : prev) norm1 += std::abs(v);
    double t_since = 0.0;
    double t = 0.0;
    while (t < t_max) {
        for (int i = 0; i < check_every && t < t_max; ++i) {
            solver.step(field, dt);
            t += dt;
            t_since += dt;
        }
        double diff = 0.0, nrm = 0.0;
        for (std::size_t k = 0; k < prev.size(); ++k) {
            diff += std::abs(field.psi[k] - prev[k]);
            nrm += std::abs(field.psi[k]);
        }
        const double res = diff / (std::max(nrm, 1e-300) * t_since);
        rep.residual_history.push_back(res);
        rep.steps += check_every;
        if (res * lambda_H < tol) {
            rep.converged = true;
            return rep;
        }
        prev = field.psi;
        t_since = 0.0;
    }
    std::ostringstream os;
    os << "fp_steady: no convergence after t=" << t << "; residuals:";
    for (std::size_t i = rep.residual_history.size() > 8 ? rep.residual_history.size() - 8 : 0;
         i < rep.residual_history.size(); ++i)
        os << ' ' << rep.residual_history[i];
    throw std::runtime_error(os.str());
}

EnsembleInertialess sample_from_field(const KineticField& field, std::size_t n_particles,
                                      std::uint64_t seed) {
    std::vector<double> cdf(field.size() + 1, 0.0);
    for (std::size_t k = 0; k < field.size(); ++k)
        cdf[k + 1] = cdf[k] + std::max(0.0, field.psi[k]);
    const double total = cdf.back();
    if (!(total > 0.0)) throw std::invalid_argument("sample_from_field: empty field");

    EnsembleInertialess ens;
    ens.seed = seed;
    ens.x.resize(n_particles);
    ens.q.resize(n_particles);
    const CounterRng rng(seed, 0x5eedf1e1dull);
    const int nq = field.nq;
    for (std::size_t i = 0; i < n_particles; ++i) {
        const double u = rng.uniform(4 * i) * total;
        const std::size_t k =
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin() - 1;
        const int iy = static_cast<int>(k / (static_cast<std::size_t>(nq) * nq));
        const int ix = static_cast<int>((k / nq) % nq);
        const int iq = static_cast<int>(k % nq);
        const double uy = rng.uniform(4 * i + 1), ux = rng.uniform(4 * i + 2),
                     uq = rng.uniform(4 * i + 3);
        ens.x[i] = {0.0, (iy + uy) * field.hy()};
        ens.q[i] = {-field.q_max + (ix + ux) * field.hq(),
                    -field.q_max + (iq + uq) * field.hq()};
    }
    return ens;
}

namespace {

inline double fold_wall(double y, double L) {
    while (y < 0.0 || y > L) {
        if (y < 0.0) y = -y;
        if (y > L) y = 2.0 * L - y;
    }
    return y;
}

// semi-implicit radial solve for the finitely extensible connector:
// r (1 + c / (1 - r^2/q0^2)) = R, r in [0, q0)
double fene_radial_solve(double R, double c, double q0) {
    double lo = 0.0, hi = q0 * (1.0 - 1e-14);
    double r = std::min(R / (1.0 + c), hi);
    for (int it = 0; it < 100; ++it) {
        const double d = 1.0 - r * r / (q0 * q0);
        const double g = r * (1.0 + c / d) - R;
        if (std::abs(g) < 1e-14 * (R + 1.0)) break;
        if (g > 0.0) hi = r; else lo = r;
        const double dg = 1.0 + c / d + r * c * (2.0 * r / (q0 * q0)) / (d * d);
        double rn = r - g / dg;
        if (!(rn > lo) || !(rn < hi)) rn = 0.5 * (lo + hi);
        r = rn;
    }
    return r;
}

} // namespace

void step_inertialess_sde(EnsembleInertialess& ens, double dt, const FlowField& flow,
                          const PhysicalParams& params, const SpringLaw& law,
                          const Geometry& geom) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_inertialess_sde: dt must be positive");
    const double kBT = params.kBT, zeta = params.zeta;
    const double sq_q = std::sqrt(4.0 * kBT / zeta);
    const double sq_x = std::sqrt(kBT / zeta);
    const std::uint64_t base_ctr = ens.step_count * 16;
    const double tiny = 1e-12;

    parallel_for(ens.x.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const CounterRng rng(ens.seed, i);
            Vec2 x = ens.x[i], q = ens.q[i];

            // sub-step with halved dt on finite-extensibility failure
            int slot = 0;
            std::function<void(Vec2&, Vec2&, double, int)> advance =
                [&](Vec2& xs, Vec2& qs, double h, int depth) {
                    const Vec2 gq = rng.normal_pair(base_ctr + slot++);
                    const Vec2 gx = rng.normal_pair(base_ctr + slot++);
                    if (slot > 14) slot = 14;  // bounded counter budget
                    const Vec2 v1 = flow.at(xs - 0.5 * qs);
                    const Vec2 v2 = flow.at(xs + 0.5 * qs);
                    Vec2 xn = xs + 0.5 * h * (v1 + v2) + (sq_x * std::sqrt(h)) * gx;
                    Vec2 qn;
                    if (law.kind == SpringLaw::Kind::Hookean) {
                        qn = qs + h * ((-2.0 * law.H / zeta) * qs + (v2 - v1)) +
                             (sq_q * std::sqrt(h)) * gq;
                    } else {
                        const Vec2 rhs = qs + h * (v2 - v1) + (sq_q * std::sqrt(h)) * gq;
                        const double R = norm(rhs);
                        const double c = 2.0 * law.H * h / zeta;
                        const double r = fene_radial_solve(R, c, law.q0);
                        qn = R > 0.0 ? (r / R) * rhs : Vec2{};
                    }
                    // reflect both bead endpoints at the walls
                    if (geom.kind == Geometry::Kind::Channel) {
                        double y1 = fold_wall(xn.y - 0.5 * qn.y, geom.gap);
                        double y2 = fold_wall(xn.y + 0.5 * qn.y, geom.gap);
                        y1 = std::clamp(y1, tiny * geom.gap, (1.0 - tiny) * geom.gap);
                        y2 = std::clamp(y2, tiny * geom.gap, (1.0 - tiny) * geom.gap);
                        xn.y = 0.5 * (y1 + y2);
                        qn.y = y2 - y1;
                    } else if (geom.kind == Geometry::Kind::PeriodicBox) {
                        xn.x -= geom.side * std::floor(xn.x / geom.side);
                        xn.y -= geom.side * std::floor(xn.y / geom.side);
                    }
                    if (law.kind == SpringLaw::Kind::FENE && norm(qn) >= law.q0) {
                        if (depth >= 8)
                            throw std::runtime_error("step_inertialess_sde: connector overextended after retries");
                        advance(xs, qs, 0.5 * h, depth + 1);
                        advance(xs, qs, 0.5 * h, depth + 1);
                        return;
                    }
                    xs = xn;
                    qs = qn;
                };
            advance(x, q, dt, 0);
            ens.x[i] = x;
            ens.q[i] = q;
        }
    });
    ens.time += dt;
    ens.step_count += 1;
}

std::vector<double> density_histogram(const EnsembleInertialess& ens, int bins, double Ly) {
    std::vector<double> h(bins, 0.0);
    for (const Vec2& x : ens.x) {
        int b = static_cast<int>(x.y / Ly * bins);
        b = std::clamp(b, 0, bins - 1);
        h[b] += 1.0;
    }
    return h;
}

Mat2 ensemble_second_moment(const EnsembleInertialess& ens) {
    Mat2 m;
    for (const Vec2& q : ens.q) m += outer(q, q);
    if (!ens.q.empty()) m *= 1.0 / static_cast<double>(ens.q.size());
    return m;
}

} // namespace polykin
