#include "polykin/langevin.hpp"

#include "polykin/parallel.hpp"
#include "polykin/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polykin {

namespace {

double domain_height(const Geometry& geom, double Ly_free) {
    switch (geom.kind) {
    case Geometry::Kind::Channel: return geom.gap;
    case Geometry::Kind::PeriodicBox: return geom.side;
    case Geometry::Kind::FreeSpace: return Ly_free;
    }
    return Ly_free;
}

// fold a position into (0, L), reversing the velocity sign on each bounce
void reflect(double& y, double& vy, double L) {
    int guard = 0;
    while (y < 0.0 || y > L) {
        if (y < 0.0) { y = -y; vy = -vy; }
        if (y > L) { y = 2.0 * L - y; vy = -vy; }
        if (++guard > 64) throw std::runtime_error("step_inertial: runaway wall reflection");
    }
}

} // namespace

EnsembleInertial equilibrium_ensemble(std::size_t n, const PhysicalParams& params,
                                      const SpringLaw& law, const Geometry& geom,
                                      std::uint64_t seed, double Ly_free) {
    params.validate();
    EnsembleInertial ens;
    ens.seed = seed;
    ens.p.resize(n);
    const double L = domain_height(geom, Ly_free);
    const double sv = std::sqrt(params.kBT / params.mass);
    const double lq = std::sqrt(params.kBT / law.H);
    const double b = law.kind == SpringLaw::Kind::FENE ? law.fene_b(params.kBT) : 0.0;

    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const CounterRng rng(seed, i ^ 0xe9a5eb1ull);
            std::uint64_t c = 0;
            auto u = [&] { return rng.uniform(c++); };
            auto npair = [&] {
                const double u1 = u(), u2 = u();
                const double r = std::sqrt(-2.0 * std::log(u1));
                const double ph = 6.283185307179586476925286766559 * u2;
                return Vec2{r * std::cos(ph), r * std::sin(ph)};
            };
            DumbbellStateInertial& d = ens.p[i];
            d.V1 = sv * npair();
            d.V2 = sv * npair();
            // connector and center drawn jointly: rejection against the
            // wall-restricted Boltzmann density.  Redrawing q on every
            // attempt matters: a connector longer than the gap can never
            // be placed.
            for (std::uint64_t t = 0;; ++t) {
                if (t > 1000000)
                    throw std::runtime_error("equilibrium_ensemble: cannot place dumbbell in gap");
                Vec2 q;
                if (law.kind == SpringLaw::Kind::Hookean) {
                    q = lq * npair();
                } else {
                    // rejection from the uniform disk against (1 - r^2/q0^2)^{b/2}
                    const double ux = 2.0 * u() - 1.0;
                    const double uy = 2.0 * u() - 1.0;
                    const double ua = u();
                    const double r2 = ux * ux + uy * uy;
                    if (r2 >= 1.0 || ua >= std::pow(1.0 - r2, 0.5 * b)) continue;
                    q = {law.q0 * ux, law.q0 * uy};
                }
                const double yc = L * u();
                const double xc = L * u();
                d.r1 = Vec2{xc, yc} - 0.5 * q;
                d.r2 = Vec2{xc, yc} + 0.5 * q;
                if (geom.kind != Geometry::Kind::Channel) break;
                if (geom.contains(d.r1) && geom.contains(d.r2)) break;
            }
        }
    });
    return ens;
}

namespace {

struct StepCtx {
    double dt;
    const FlowField& v;
    const PhysicalParams& par;
    const SpringLaw& law;
    const Geometry& geom;
    InertialScheme scheme;
};

// advance one dumbbell by h; counter slots are consumed from *slot
void advance_one(DumbbellStateInertial& d, double h, const StepCtx& c,
                 const CounterRng& rng, std::uint64_t base, int& slot, int depth) {
    const DumbbellStateInertial saved = d;
    const double m = c.par.mass, zeta = c.par.zeta;
    const Vec2 g1 = rng.normal_pair(base + slot++);
    const Vec2 g2 = rng.normal_pair(base + slot++);
    if (slot > 30) slot = 30;

    bool overextended = false;
    if (c.scheme == InertialScheme::EulerMaruyama) {
        const Vec2 q = d.r2 - d.r1;
        Vec2 F{};
        if (c.law.kind == SpringLaw::Kind::FENE && norm(q) >= c.law.q0)
            overextended = true;
        else
            F = spring_force(q, c.law);
        if (!overextended) {
            const double sn = std::sqrt(2.0 * zeta * c.par.kBT * h) / m;
            const Vec2 V1n = d.V1 + (h / m) * (-zeta * (d.V1 - c.v.at(d.r1)) + F) + sn * g1;
            const Vec2 V2n = d.V2 + (h / m) * (-zeta * (d.V2 - c.v.at(d.r2)) - F) + sn * g2;
            d.r1 += h * d.V1;
            d.r2 += h * d.V2;
            d.V1 = V1n;
            d.V2 = V2n;
        }
    } else {
        // kick / drift / exact velocity relaxation toward v(r) / drift / kick
        const Vec2 q0v = d.r2 - d.r1;
        if (c.law.kind == SpringLaw::Kind::FENE && norm(q0v) >= c.law.q0) {
            overextended = true;
        } else {
            const Vec2 F0 = spring_force(q0v, c.law);
            d.V1 += (0.5 * h / m) * F0;
            d.V2 -= (0.5 * h / m) * F0;
            d.r1 += 0.5 * h * d.V1;
            d.r2 += 0.5 * h * d.V2;
            const double e = std::exp(-zeta * h / m);
            const double s = std::sqrt(c.par.kBT / m * (1.0 - e * e));
            const Vec2 u1 = c.v.at(d.r1), u2 = c.v.at(d.r2);
            d.V1 = u1 + e * (d.V1 - u1) + s * g1;
            d.V2 = u2 + e * (d.V2 - u2) + s * g2;
            d.r1 += 0.5 * h * d.V1;
            d.r2 += 0.5 * h * d.V2;
            const Vec2 q1v = d.r2 - d.r1;
            if (c.law.kind == SpringLaw::Kind::FENE && norm(q1v) >= c.law.q0) {
                overextended = true;
            } else {
                const Vec2 F1 = spring_force(q1v, c.law);
                d.V1 += (0.5 * h / m) * F1;
                d.V2 -= (0.5 * h / m) * F1;
            }
        }
    }

    if (!overextended && c.geom.kind == Geometry::Kind::Channel) {
        reflect(d.r1.y, d.V1.y, c.geom.gap);
        reflect(d.r2.y, d.V2.y, c.geom.gap);
        if (c.law.kind == SpringLaw::Kind::FENE && norm(d.r2 - d.r1) >= c.law.q0)
            overextended = true;
    } else if (!overextended && c.law.kind == SpringLaw::Kind::FENE &&
               norm(d.r2 - d.r1) >= c.law.q0) {
        overextended = true;
    }

    if (overextended) {
        if (depth >= 8)
            throw std::runtime_error("step_inertial: connector overextended after retries");
        d = saved;
        advance_one(d, 0.5 * h, c, rng, base, slot, depth + 1);
        advance_one(d, 0.5 * h, c, rng, base, slot, depth + 1);
    }
}

} // namespace

void step_inertial(EnsembleInertial& ens, double dt, const FlowField& v_field,
                   const PhysicalParams& params, const SpringLaw& law,
                   const Geometry& geom, InertialScheme scheme) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_inertial: dt must be positive");
    const StepCtx ctx{dt, v_field, params, law, geom, scheme};
    const std::uint64_t base = ens.step_count * 32;
    parallel_for(ens.p.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const CounterRng rng(ens.seed, i);
            int slot = 0;
            advance_one(ens.p[i], dt, ctx, rng, base, slot, 0);
        }
    });
    ens.time += dt;
    ens.step_count += 1;
}

BinnedProfile estimate_profiles(const EnsembleInertial& ens, int bins, double Ly,
                                const FlowField& v_s, const PhysicalParams& params,
                                const SpringLaw& law) {
    if (ens.p.empty()) throw std::invalid_argument("estimate_profiles: empty ensemble");
    if (bins < 1 || !(Ly > 0.0)) throw std::invalid_argument("estimate_profiles: bad bins");
    BinnedProfile out;
    out.bins = bins;
    out.Ly = Ly;
    out.N.assign(bins, 0.0);
    out.v_p.assign(bins, Vec2{});
    out.var_V.assign(bins, Mat2{});
    out.v_s_bar.assign(bins, Vec2{});
    out.f_direct.assign(bins, Vec2{});
    out.f_friction.assign(bins, Vec2{});
    out.defined.assign(bins, 0);

    const double hy = Ly / bins;
    std::vector<double> cnt(bins, 0.0);
    std::vector<Vec2> sumV(bins), sumVs(bins);
    std::vector<Mat2> sumVV(bins);

    auto bead = [&](const Vec2& r, const Vec2& V) {
        int b = std::clamp(static_cast<int>(r.y / hy), 0, bins - 1);
        cnt[b] += 1.0;
        sumV[b] += V;
        sumVs[b] += v_s.at(r);
        sumVV[b] += outer(V, V);
    };
    for (const auto& d : ens.p) {
        bead(d.r1, d.V1);
        bead(d.r2, d.V2);
    }
    for (int b = 0; b < bins; ++b) {
        if (cnt[b] == 0.0) continue;
        out.defined[b] = 1;
        out.N[b] = 0.5 * cnt[b] / hy;
        out.v_p[b] = (1.0 / cnt[b]) * sumV[b];
        out.v_s_bar[b] = (1.0 / cnt[b]) * sumVs[b];
        out.var_V[b] = (1.0 / cnt[b]) * sumVV[b] - outer(out.v_p[b], out.v_p[b]);
        // same samples, two forms: per-bead sum vs 2 N zeta (v_p - v_s)
        out.f_direct[b] = (params.zeta / hy) * (sumV[b] - sumVs[b]);
        out.f_friction[b] = 2.0 * out.N[b] * params.zeta * (out.v_p[b] - out.v_s_bar[b]);
    }
    out.tau_s = estimate_spring_stress(ens, bins, Ly, law);
    return out;
}

std::vector<Mat2> estimate_spring_stress(const EnsembleInertial& ens, int bins,
                                         double Ly, const SpringLaw& law) {
    if (bins < 1 || !(Ly > 0.0))
        throw std::invalid_argument("estimate_spring_stress: bad bins");
    const double hy = Ly / bins;
    std::vector<Mat2> tau(bins);
    for (const auto& d : ens.p) {
        const Vec2 q = d.r2 - d.r1;
        if (law.kind == SpringLaw::Kind::FENE && norm(q) >= law.q0) continue;
        const Mat2 T = outer(q, spring_force(q, law));
        const double yc = 0.5 * (d.r1.y + d.r2.y);
        if (std::abs(q.y) < 1e-300) {
            const int b = std::clamp(static_cast<int>(yc / hy), 0, bins - 1);
            tau[b] += (1.0 / hy) * T;
            continue;
        }
        // y(s) = yc + s q_y, s in [-1/2, 1/2]; split the unit s-interval by bins
        const double ylo = std::min(d.r1.y, d.r2.y), yhi = std::max(d.r1.y, d.r2.y);
        const int blo = std::clamp(static_cast<int>(ylo / hy), 0, bins - 1);
        const int bhi = std::clamp(static_cast<int>(yhi / hy), 0, bins - 1);
        const double aqy = std::abs(q.y);
        for (int b = blo; b <= bhi; ++b) {
            const double seg =
                std::max(0.0, std::min(yhi, (b + 1) * hy) - std::max(ylo, b * hy));
            if (seg > 0.0) tau[b] += (seg / aqy / hy) * T;
        }
    }
    return tau;
}

MomentumResidual momentum_residual(const std::vector<BinnedProfile>& snapshots,
                                   const std::vector<double>& times,
                                   const PhysicalParams& params, int n_batches) {
    const int ns = static_cast<int>(snapshots.size());
    if (ns < 3 || times.size() != snapshots.size())
        throw std::invalid_argument("momentum_residual: need >= 3 matching snapshots");
    const int bins = snapshots[0].bins;
    const double hy = snapshots[0].hy();
    for (const auto& s : snapshots)
        if (s.bins != bins)
            throw std::invalid_argument("momentum_residual: bin mismatch");

    MomentumResidual out;
    out.mean.assign(bins, Vec2{});
    out.stderr_est.assign(bins, Vec2{});
    out.defined.assign(bins, 1);

    // residual series per bin over the interior snapshots
    std::vector<std::vector<double>> rx(bins), ry(bins);
    for (int k = 1; k < ns - 1; ++k) {
        const BinnedProfile& s = snapshots[k];
        for (int b = 0; b < bins; ++b) {
            const int bm = std::max(0, b - 1), bp = std::min(bins - 1, b + 1);
            if (!s.defined[b] || !snapshots[k - 1].defined[b] || !snapshots[k + 1].defined[b] ||
                !s.defined[bm] || !s.defined[bp]) {
                out.defined[b] = 0;
                continue;
            }
            const double rhophi = 2.0 * params.mass * s.N[b];
            const Vec2 dvdt = (1.0 / (times[k + 1] - times[k - 1])) *
                              (snapshots[k + 1].v_p[b] - snapshots[k - 1].v_p[b]);
            const double dy = (bp - bm) * hy;
            const Vec2 adv = (s.v_p[b].y / dy) * (s.v_p[bp] - s.v_p[bm]);
            const Vec2 fric = 2.0 * s.N[b] * params.zeta * (s.v_p[b] - s.v_s_bar[b]);
            const Vec2 divtau{(s.tau_s[bp].yx - s.tau_s[bm].yx) / dy,
                              (s.tau_s[bp].yy - s.tau_s[bm].yy) / dy};
            // rho_p phi Var(V) = 2 m N Var(V); take the y-divergence row
            auto mvar = [&](int bb) {
                return Mat2{2.0 * params.mass * s.N[bb] * snapshots[k].var_V[bb].xx,
                            2.0 * params.mass * s.N[bb] * snapshots[k].var_V[bb].xy,
                            2.0 * params.mass * s.N[bb] * snapshots[k].var_V[bb].yx,
                            2.0 * params.mass * s.N[bb] * snapshots[k].var_V[bb].yy};
            };
            const Mat2 vp = mvar(bp), vm = mvar(bm);
            const Vec2 divvar{(vp.yx - vm.yx) / dy, (vp.yy - vm.yy) / dy};
            const Vec2 res = rhophi * (dvdt + adv) + fric - divtau + divvar;
            rx[b].push_back(res.x);
            ry[b].push_back(res.y);
        }
    }
    for (int b = 0; b < bins; ++b) {
        if (!out.defined[b] || rx[b].empty()) {
            out.defined[b] = 0;
            continue;
        }
        out.mean[b] = {mean(rx[b]), mean(ry[b])};
        out.stderr_est[b] = {batch_means_stderr(rx[b], n_batches),
                             batch_means_stderr(ry[b], n_batches)};
    }
    return out;
}

} // namespace polykin
