#include "polykin/acceptance.hpp"

#include "polykin/config.hpp"
#include "polykin/inertialess.hpp"
#include "polykin/io.hpp"
#include "polykin/langevin.hpp"
#include "polykin/oracle.hpp"
#include "polykin/stress.hpp"
#include "polykin/transport.hpp"

#include <cmath>
#include <sstream>

namespace polykin::acceptance {

namespace {

PhysicalParams base_params() {
    PhysicalParams p;
    p.zeta = 4.0;   // lambda_H = 1 at H = 1
    p.mass = 0.04;  // lambda_B = 0.01
    p.V_d = 1e-3;
    return p;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// 1: kinetic energy of the bead velocities at equilibrium
CriterionResult c1_equipartition(bool quick) {
    CriterionResult r{1, "equipartition of bead velocities", false, false, ""};
    const PhysicalParams p = base_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry fs = Geometry::free_space();
    EnsembleInertial ens = equilibrium_ensemble(quick ? 4000 : 20000, p, law, fs, 101);
    ZeroFlow flow;
    const double dt = 0.5 * p.lambda_B();
    for (int i = 0; i < 100; ++i)
        step_inertial(ens, dt, flow, p, law, fs, InertialScheme::Splitting);
    double s = 0.0;
    std::size_t cnt = 0;
    for (int k = 0; k < 6; ++k) {
        for (int i = 0; i < 20; ++i)
            step_inertial(ens, dt, flow, p, law, fs, InertialScheme::Splitting);
        for (const auto& d : ens.p) {
            s += p.mass * (norm2(d.V1) + norm2(d.V2));
            cnt += 2;
        }
    }
    const double ratio = s / (static_cast<double>(cnt) * 2.0) / p.kBT;
    r.pass = std::abs(ratio - 1.0) <= 0.02;
    r.detail = "m<|V|^2>/(d kBT) = " + fmt(ratio) + " over " + std::to_string(cnt) + " samples";
    return r;
}

// 2: equilibrium coil moments on the grid and by the configuration SDE,
//    plus the vanishing of the elastic stress on the equilibrium density
CriterionResult c2_equilibrium_moments(bool quick) {
    CriterionResult r{2, "equilibrium moments and stress", false, false, ""};
    const PhysicalParams p = base_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry fs = Geometry::free_space();
    ZeroFlow flow;

    KineticField f = KineticField::create(fs, law, 1, 128, 5.0);
    f.set_gaussian(1.0, 0.5);
    FpSolver solver(p, law, {});
    fp_steady(f, solver, flow, 1e-7, 100.0);
    const Mat2 Mg = f.mean_second_moment();
    const double err_grid =
        std::max({std::abs(Mg.xx - 1.0), std::abs(Mg.yy - 1.0), std::abs(Mg.xy)});

    KineticField fb = KineticField::create(fs, law, 1, 128, 5.0);
    fb.set_boltzmann(p, law, 1.0);
    EnsembleInertialess ens = sample_from_field(fb, quick ? 20000 : 100000, 11);
    for (int i = 0; i < 400; ++i) step_inertialess_sde(ens, 0.005, flow, p, law, fs);
    const std::size_t n = ens.q.size();
    double mxx = 0.0, myy = 0.0, mxy = 0.0, vxx = 0.0, vyy = 0.0, vxy = 0.0;
    for (const Vec2& q : ens.q) {
        mxx += q.x * q.x;
        myy += q.y * q.y;
        mxy += q.x * q.y;
    }
    mxx /= n; myy /= n; mxy /= n;
    for (const Vec2& q : ens.q) {
        vxx += (q.x * q.x - mxx) * (q.x * q.x - mxx);
        vyy += (q.y * q.y - myy) * (q.y * q.y - myy);
        vxy += (q.x * q.y - mxy) * (q.x * q.y - mxy);
    }
    const double z =
        std::max({std::abs(mxx - 1.0) / std::sqrt(vxx / (n - 1.0) / n),
                  std::abs(myy - 1.0) / std::sqrt(vyy / (n - 1.0) / n),
                  std::abs(mxy) / std::sqrt(vxy / (n - 1.0) / n)});

    KineticField fe = KineticField::create(fs, law, 1, 96, 7.0);
    fe.set_boltzmann(p, law, 1.0);
    const StressField st = stress_homogeneous(fe, law, p.kBT);
    const double tau_ratio = frobenius_norm(st.tau[0]) / (st.N[0] * p.kBT);
    const StressField st_fp = stress_homogeneous(f, law, p.kBT);
    const double tau_fp = frobenius_norm(st_fp.tau[0]) / (st_fp.N[0] * p.kBT);

    r.pass = err_grid <= 0.01 && z <= 3.0 && tau_ratio <= 1e-3;
    r.detail = "grid moment error " + fmt(err_grid) + ", sde z-score " + fmt(z) +
               ", |tau|/(N kBT) " + fmt(tau_ratio) + " on the Boltzmann density (" +
               fmt(tau_fp) + " on the marched field, grid bias)";
    return r;
}

// 3: vanishing-inertia ladder in steady shear against the overdamped moments
CriterionResult c3_inertia_ladder(bool quick) {
    CriterionResult r{3, "vanishing-inertia limit order", false, false, ""};
    PhysicalParams p = base_params();
    const double H = 1.0, gd = 1.0;
    const oracle::ConformationState ref =
        oracle::constitutive_steady(gd, 1.0, oracle::ClosureModel::OldroydB, 0.0, 1.0);
    const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
    std::vector<double> errs;
    bool decreasing = true;
    for (double e : eps) {
        p.mass = 4.0 * e * e;
        const Mat2 M = oracle::inertial_shear_steady(gd, p, H);
        const double err = frobenius_norm((H / p.kBT) * M - ref.A);
        if (!errs.empty() && !(err < errs.back())) decreasing = false;
        errs.push_back(err);
    }
    const oracle::OrderFit fit = oracle::convergence_order(errs, eps);

    // Monte Carlo spot check of the simulator against the exact inertial
    // covariance at the coarsest ladder point
    p.mass = 4.0 * 0.4 * 0.4;
    const Mat2 Mref = oracle::inertial_shear_steady(gd, p, H);
    const SpringLaw law = SpringLaw::hookean(H);
    const Geometry fs = Geometry::free_space();
    EnsembleInertial ens = equilibrium_ensemble(quick ? 5000 : 20000, p, law, fs, 33);
    LinearShearFlow flow(gd);
    const double dt = 0.1 * p.lambda_B();
    const int per_snap = static_cast<int>(0.5 / dt);
    for (int i = 0; i < 10 * per_snap; ++i)
        step_inertial(ens, dt, flow, p, law, fs, InertialScheme::Splitting);
    std::vector<double> sx, sy, sxy;
    for (int k = 0; k < 40; ++k) {
        for (int i = 0; i < per_snap; ++i)
            step_inertial(ens, dt, flow, p, law, fs, InertialScheme::Splitting);
        Mat2 m;
        for (const auto& d : ens.p) m += outer(d.r2 - d.r1, d.r2 - d.r1);
        m *= 1.0 / static_cast<double>(ens.p.size());
        sx.push_back(m.xx);
        sy.push_back(m.yy);
        sxy.push_back(m.xy);
    }
    const double zmc = std::max(
        {std::abs(mean(sx) - Mref.xx) / batch_means_stderr(sx, 10),
         std::abs(mean(sy) - Mref.yy) / batch_means_stderr(sy, 10),
         std::abs(mean(sxy) - Mref.xy) / batch_means_stderr(sxy, 10)});

    r.pass = decreasing && fit.order >= 0.8 && zmc <= 4.0;
    r.detail = "fitted order " + fmt(fit.order) + " (errors " + fmt(errs[0]) + " .. " +
               fmt(errs[3]) + "), simulator z-score " + fmt(zmc) + " at the coarsest point";
    return r;
}

// 4: steady-shear stress of the grid solver against the closed moment models
CriterionResult c4_homogeneous_rheology(bool quick) {
    CriterionResult r{4, "homogeneous shear rheology", false, false, ""};
    (void)quick;
    const PhysicalParams p = base_params();
    const Geometry fs = Geometry::free_space();
    std::ostringstream os;
    bool ok = true;
    for (int model = 0; model < 2; ++model) {
        const bool fene = model == 1;
        const double b = 200.0;
        const SpringLaw law =
            fene ? SpringLaw::fene(1.0, std::sqrt(b * p.kBT / 1.0)) : SpringLaw::hookean(1.0);
        const double tol = fene ? 0.04 : 0.02;
        double worst = 0.0;
        for (double De : {0.1, 0.5, 1.0}) {
            const double qmax = 4.0 + 2.0 * De;
            KineticField f = KineticField::create(fs, law, 1, 64, qmax);
            f.set_boltzmann(p, law, 1.0);
            FpSolver solver(p, law, {});
            LinearShearFlow flow(De);  // lambda_H = 1
            fp_steady(f, solver, flow, 1e-7, 300.0);
            const StressField st = stress_homogeneous(f, law, p.kBT);
            const double NkT = st.N[0] * p.kBT;
            const oracle::ConformationState oc = oracle::constitutive_steady(
                De, 1.0, fene ? oracle::ClosureModel::FENE_P : oracle::ClosureModel::OldroydB,
                fene ? b : 0.0, NkT);
            const double err =
                frobenius_norm(st.tau[0] - oc.tau) / std::max(frobenius_norm(oc.tau), NkT);
            worst = std::max(worst, err);
        }
        ok = ok && worst <= tol;
        os << (fene ? ", finitely extensible " : "infinitely extensible ") << fmt(worst)
           << " (tol " << fmt(tol) << ")";
    }
    r.pass = ok;
    r.detail = os.str();
    return r;
}

// manufactured smooth channel density shared by criteria 5 and 8
AnalyticPsi manufactured_channel_psi(double L) {
    const double pi = 3.14159265358979323846;
    return AnalyticPsi(64, 6.0, [=](double y, Vec2 q) {
        if (y <= 0.0 || y >= L) return 0.0;
        const double env = std::pow(std::sin(pi * y / L), 2);
        return (1.0 + 0.5 * env) * std::exp(-0.5 * norm2(q)) * (1.0 + 0.1 * q.x * q.y * env);
    });
}

// 5: weak pairing of the spring force density with random test functions
CriterionResult c5_weak_identity(bool quick) {
    CriterionResult r{5, "weak spring-force identity", false, false, ""};
    const SpringLaw law = SpringLaw::hookean(1.0);
    const double L = 10.0;
    const Geometry ch = Geometry::channel(L);
    const AnalyticPsi psi = manufactured_channel_psi(L);
    const double pi = 3.14159265358979323846;
    const CounterRng rng(2024, 0x5eedc0de);
    const int n_tests = quick ? 4 : 10;
    double worst = 0.0;
    for (int t = 0; t < n_tests; ++t) {
        double a[6];
        for (int k = 0; k < 6; ++k) a[k] = 2.0 * rng.uniform(8 * t + k) - 1.0;
        auto g = [=](double y) {
            Vec2 v;
            for (int n = 1; n <= 3; ++n) {
                v.x += a[n - 1] * std::sin(n * pi * y / L);
                v.y += a[n + 2] * std::sin(n * pi * y / L);
            }
            return v;
        };
        auto dg = [=](double y) {
            Vec2 v;
            for (int n = 1; n <= 3; ++n) {
                v.x += a[n - 1] * (n * pi / L) * std::cos(n * pi * y / L);
                v.y += a[n + 2] * (n * pi / L) * std::cos(n * pi * y / L);
            }
            return v;
        };
        worst = std::max(worst, weak_identity_residual(psi, ch, law, L, g, dg, 512, 8));
    }
    r.pass = worst <= 1e-3;
    r.detail = "max residual " + fmt(worst) + " over " + std::to_string(n_tests) +
               " random test functions";
    return r;
}

// 6: isotropy of the total stress in the wall cells of a coupled channel run
CriterionResult c6_wall_stress(bool quick) {
    (void)quick;
    CriterionResult r{6, "wall-cell stress isotropy", false, true, ""};
    const PhysicalParams p = base_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    std::vector<double> rels;
    for (int ny : {16, 32, 64}) {
        CoupledConfig cfg;
        cfg.geom = Geometry::channel(8.0);
        cfg.ny = ny;
        cfg.nq = 48;  // wall cells at 64 y-cells need this q-resolution for N > 0
        cfg.q_max = 5.0;
        cfg.N_av = 1.0;
        cfg.t_final = 2.0;
        cfg.tol = 1e-8;
        const CoupledResult res = coupled_solve(cfg, p, law);
        const StressField st = stress_wall_aware(res.field, cfg.geom, law, p.kBT, 8);
        double rel = 0.0;
        for (int iy : {0, ny - 1}) {
            Mat2 dev = st.tau[iy];
            dev.xx += st.N[iy] * p.kBT;
            dev.yy += st.N[iy] * p.kBT;
            rel = std::max(rel, frobenius_norm(dev) / (st.N[iy] * p.kBT));
        }
        rels.push_back(rel);
    }
    const bool decreasing = rels[1] < rels[0] && rels[2] < rels[1];
    r.pass = decreasing && rels[2] <= 0.05;
    r.detail = "||tau + N kBT I||/(N kBT) at wall cells = " + fmt(rels[0]) + ", " +
               fmt(rels[1]) + ", " + fmt(rels[2]) + " for 16, 32, 64 cells; the identity is "
               "degenerate off the wall (see docs/verification_notes.md)";
    return r;
}

// 7: polymer mass conservation and mixture incompressibility
CriterionResult c7_conservation(bool quick) {
    CriterionResult r{7, "mass conservation and divergence", false, false, ""};
    const PhysicalParams p = base_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const int steps = quick ? 2000 : 10000;
    CoupledConfig cfg;
    cfg.geom = Geometry::channel(6.0);
    cfg.ny = 16;
    cfg.nq = 24;
    cfg.q_max = 4.0;
    cfg.N_av = 1.0;
    cfg.forcing.wall_velocity_hi = 0.2;
    cfg.macro_dt = 0.02;
    cfg.t_final = steps * cfg.macro_dt;
    cfg.tol = 0.0;  // never converge early: run the full step budget
    const CoupledResult res = coupled_solve(cfg, p, law);
    const double mass0 = cfg.N_av * cfg.geom.gap;
    const double drift = std::abs(res.field.total_mass() - mass0) / mass0;
    const FieldProfile& prof = res.snapshots.back();
    const DivergenceConstraint dc =
        divergence_constraint(prof.N, prof.tau, prof.v_s, prof.u, prof.hy(), p);
    double maxdiv = 0.0;
    for (double v : dc.div_u) maxdiv = std::max(maxdiv, std::abs(v));
    r.pass = res.macro_steps >= steps && drift <= 1e-9 && maxdiv <= 1e-8;
    r.detail = "relative mass drift " + fmt(drift) + " over " +
               std::to_string(res.macro_steps) + " macro steps, max |div u| " + fmt(maxdiv);
    return r;
}

// 8: friction-force estimator identity and force = stress divergence
CriterionResult c8_force_identities(bool quick) {
    CriterionResult r{8, "force identities", false, false, ""};
    const PhysicalParams p = base_params();
    const SpringLaw law = SpringLaw::hookean(1.0);

    const Geometry ch4 = Geometry::channel(4.0);
    EnsembleInertial ens = equilibrium_ensemble(quick ? 2000 : 5000, p, law, ch4, 9);
    CallableFlow flow([](double y) { return Vec2{0.1 * y * (4.0 - y), 0.0}; });
    for (int i = 0; i < 50; ++i)
        step_inertial(ens, 0.2 * p.lambda_B(), flow, p, law, ch4, InertialScheme::Splitting);
    const BinnedProfile prof = estimate_profiles(ens, 16, 4.0, flow, p, law);
    double fmax = 0.0, fdiff = 0.0;
    for (int b = 0; b < prof.bins; ++b) {
        if (!prof.defined[b]) continue;
        fmax = std::max({fmax, std::abs(prof.f_direct[b].x), std::abs(prof.f_direct[b].y)});
        fdiff = std::max({fdiff, std::abs(prof.f_direct[b].x - prof.f_friction[b].x),
                          std::abs(prof.f_direct[b].y - prof.f_friction[b].y)});
    }
    const double est_err = fdiff / fmax;

    // pointwise force = stress divergence on a smooth periodic density
    // (the strong form needs smoothness; walls are covered by the weak test)
    const double pi = 3.14159265358979323846;
    const double L = 16.0, k = 2.0 * pi / L;
    const Geometry fs = Geometry::free_space();
    const AnalyticPsi psi(64, 6.0, [=](double y, Vec2 q) {
        const double a = 1.0 + 0.5 * std::sin(k * y) + 0.2 * std::cos(2.0 * k * y);
        const double b = 0.1 * std::sin(k * y);
        return std::exp(-0.5 * norm2(q)) * (a + b * q.x * q.y);
    });
    const int ne = 256;
    const double hy = L / ne;
    std::vector<double> tyx(ne), tyy(ne);
    std::vector<Vec2> fd(ne);
    for (int i = 0; i < ne; ++i) {
        const double y = (i + 0.5) * hy;
        const Mat2 ts = spring_stress_at(psi, y, fs, law, 16);
        tyx[i] = ts.yx;
        tyy[i] = ts.yy;
        fd[i] = spring_force_direct_at(psi, y, fs, law);
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < ne; ++i) {
        const int ip = (i + 1) % ne, im = (i + ne - 1) % ne;
        const double dx = (tyx[ip] - tyx[im]) / (2.0 * hy);
        const double dy = (tyy[ip] - tyy[im]) / (2.0 * hy);
        num += (fd[i].x - dx) * (fd[i].x - dx) + (fd[i].y - dy) * (fd[i].y - dy);
        den += fd[i].x * fd[i].x + fd[i].y * fd[i].y;
    }
    const double div_err = std::sqrt(num / den);

    r.pass = est_err <= 1e-10 && div_err <= 1e-3;
    r.detail = "estimator identity " + fmt(est_err) + " (exact), force vs stress divergence " +
               fmt(div_err);
    return r;
}

// 9: ensemble residual of the polymer-phase momentum balance
CriterionResult c9_momentum_balance(bool quick) {
    CriterionResult r{9, "polymer momentum balance residual", false, false, ""};
    const PhysicalParams p = base_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry ch = Geometry::channel(6.0);
    ZeroFlow flow;
    const double dt = 0.25 * p.lambda_B();
    std::vector<double> rms_list, spacing;
    double zx = 0.0, zy = 0.0;
    const std::vector<std::size_t> sizes =
        quick ? std::vector<std::size_t>{500, 5000, 50000}
              : std::vector<std::size_t>{1000, 10000, 100000};
    for (std::size_t np : sizes) {
        EnsembleInertial ens = equilibrium_ensemble(np, p, law, ch, 21 + np);
        for (int i = 0; i < 100; ++i)
            step_inertial(ens, dt, flow, p, law, ch, InertialScheme::Splitting);
        std::vector<BinnedProfile> snaps;
        std::vector<double> times;
        for (int k = 0; k < 66; ++k) {
            for (int i = 0; i < 10; ++i)
                step_inertial(ens, dt, flow, p, law, ch, InertialScheme::Splitting);
            snaps.push_back(estimate_profiles(ens, 8, 6.0, flow, p, law));
            times.push_back(ens.time);
        }
        const MomentumResidual mr = momentum_residual(snaps, times, p);
        double rms = 0.0, mx = 0.0, my = 0.0, sx2 = 0.0, sy2 = 0.0, Nbar = 0.0;
        int nb = 0;
        for (int b = 2; b < 6; ++b) {
            if (!mr.defined[b]) continue;
            rms += norm2(mr.mean[b]);
            mx += mr.mean[b].x;
            my += mr.mean[b].y;
            sx2 += mr.stderr_est[b].x * mr.stderr_est[b].x;
            sy2 += mr.stderr_est[b].y * mr.stderr_est[b].y;
            Nbar += snaps.back().N[b];
            ++nb;
        }
        // per-particle friction-force units: the raw residual is a force
        // density and scales with the number density
        rms = std::sqrt(rms / nb) / (2.0 * p.zeta * (Nbar / nb));
        rms_list.push_back(rms);
        spacing.push_back(1.0 / std::sqrt(static_cast<double>(np)));
        if (np == sizes.back()) {
            zx = std::abs(mx / nb) / (std::sqrt(sx2) / nb);
            zy = std::abs(my / nb) / (std::sqrt(sy2) / nb);
        }
    }
    const oracle::OrderFit fit = oracle::convergence_order(rms_list, spacing);
    r.pass = zx <= 3.0 && zy <= 3.0 && fit.order >= 0.6 && fit.order <= 1.4;
    r.detail = "z-scores " + fmt(zx) + ", " + fmt(zy) + " at the largest ensemble; rms " +
               fmt(rms_list[0]) + ", " + fmt(rms_list[1]) + ", " + fmt(rms_list[2]) +
               " (slope " + fmt(fit.order) + " vs 1/sqrt(n), expect 1)";
    return r;
}

// 10: refinement order of the expansion-based stress forms
CriterionResult c10_taylor_orders(bool quick) {
    CriterionResult r{10, "expansion-stress refinement orders", false, false, ""};
    (void)quick;
    const PhysicalParams p = base_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry fs = Geometry::free_space();
    const double pi = 3.14159265358979323846;
    std::vector<double> e0s, e2s, inv_l;
    for (double L : {8.0, 11.3137085, 16.0, 22.627417, 32.0}) {
        const double k = 2.0 * pi / L;
        AnalyticPsi psi(
            64, 6.0,
            [=](double y, Vec2 q) {
                const double a = 1.0 + 0.5 * std::sin(k * y) + 0.2 * std::cos(2.0 * k * y);
                const double b = 0.1 * std::sin(k * y);
                return std::exp(-0.5 * norm2(q)) * (a + b * q.x * q.y);
            },
            [=](double y, Vec2 q) {
                const double a2 =
                    -0.5 * k * k * std::sin(k * y) - 0.8 * k * k * std::cos(2.0 * k * y);
                const double b2 = -0.1 * k * k * std::sin(k * y);
                return std::exp(-0.5 * norm2(q)) * (a2 + b2 * q.x * q.y);
            });
        double e0 = 0.0, e2 = 0.0;
        for (double yf : {0.2, 0.45, 0.7}) {
            const double y = yf * L;
            const Mat2 ref = stress_wall_aware_at(psi, y, fs, law, p.kBT, 16);
            e0 = std::max(e0, frobenius_norm(stress_taylor_at(psi, y, fs, law, p.kBT, 0) - ref));
            e2 = std::max(e2, frobenius_norm(stress_taylor_at(psi, y, fs, law, p.kBT, 2) - ref));
        }
        e0s.push_back(e0);
        e2s.push_back(e2);
        inv_l.push_back(1.0 / L);
    }
    const oracle::OrderFit f0 = oracle::convergence_order(e0s, inv_l);
    const oracle::OrderFit f2 = oracle::convergence_order(e2s, inv_l);
    r.pass = std::abs(f0.order - 2.0) <= 0.5 && std::abs(f2.order - 4.0) <= 0.5;
    r.detail = "zero-term order " + fmt(f0.order) + " (expect 2), two-term order " +
               fmt(f2.order) + " (expect 4)";
    return r;
}

// 11: cross-stream depletion in pressure-driven channel flow
CriterionResult c11_migration(bool quick) {
    CriterionResult r{11, "wall depletion in channel flow", false, false, ""};
    const PhysicalParams p = base_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const double L = 10.0;  // coil size / gap = 0.1

    CoupledConfig cfg;
    cfg.geom = Geometry::channel(L);
    cfg.ny = quick ? 24 : 40;
    cfg.nq = quick ? 32 : 40;
    cfg.q_max = 6.0;
    cfg.N_av = 1.0;
    cfg.forcing.dpdx = -0.4;  // wall shear rate ~ 1/lambda_H
    cfg.macro_dt = 0.1;
    cfg.t_final = quick ? 20.0 : 60.0;
    cfg.tol = 1e-9;
    const CoupledResult res = coupled_solve(cfg, p, law);
    const FieldProfile& prof = res.snapshots.back();
    const double nw_fp = 0.5 * (prof.N[0] + prof.N[cfg.ny - 1]);
    double nc_fp = 0.0;
    for (int i = cfg.ny / 2 - 2; i < cfg.ny / 2 + 2; ++i) nc_fp += prof.N[i] / 4.0;

    KineticField f = KineticField::create(Geometry::channel(L), law, 40, 48, 5.0);
    f.set_boltzmann(p, law, 1.0);
    f.scale_mean_density(1.0);
    EnsembleInertialess ens = sample_from_field(f, quick ? 10000 : 40000, 77);
    const double eta_eff = p.eta_s + p.N_av * p.kBT * p.lambda_H(law.H);
    CallableFlow flow([=](double y) {
        return Vec2{0.4 / (2.0 * eta_eff) * y * (L - y), 0.0};
    });
    const Geometry ch = Geometry::channel(L);
    const double T = quick ? 10.0 : 40.0;
    const int steps = static_cast<int>(T / 0.01);
    for (int i = 0; i < steps; ++i) step_inertialess_sde(ens, 0.01, flow, p, law, ch);
    const auto hist = density_histogram(ens, 10, L);
    const double nw_sde = 0.5 * (hist[0] + hist[9]);
    const double nc_sde = 0.5 * (hist[4] + hist[5]);

    r.pass = nw_fp < nc_fp && nw_sde < nc_sde;
    r.detail = "N_wall/N_center = " + fmt(nw_fp / nc_fp) + " (grid), " +
               fmt(nw_sde / nc_sde) + " (stochastic)";
    return r;
}

// 12: two-velocity coupling vanishes linearly with the volume fraction
CriterionResult c12_mode_continuity(bool quick) {
    CriterionResult r{12, "coupling-mode continuity", false, false, ""};
    const SpringLaw law = SpringLaw::hookean(1.0);
    std::vector<double> diffs, phis{1e-2, 1e-3, 1e-4};
    double ident = 0.0;
    for (double phi : phis) {
        PhysicalParams p = base_params();
        p.V_d = phi;  // N_av = 1
        CoupledConfig cfg;
        cfg.geom = Geometry::channel(8.0);
        cfg.ny = 16;
        cfg.nq = 24;
        cfg.q_max = 5.0;
        cfg.N_av = 1.0;
        cfg.forcing.wall_velocity_hi = 0.2;
        cfg.macro_dt = 0.1;
        cfg.t_final = quick ? 10.0 : 30.0;
        cfg.tol = 1e-9;
        cfg.mode = CouplingMode::Solvent;
        const CoupledResult ra = coupled_solve(cfg, p, law);
        cfg.mode = CouplingMode::Solution;
        const CoupledResult rb = coupled_solve(cfg, p, law);
        double d = 0.0;
        const FieldProfile& pa = ra.snapshots.back();
        const FieldProfile& pb = rb.snapshots.back();
        for (int i = 0; i < cfg.ny; ++i)
            d = std::max(d, std::abs(pa.v_s[i].x - pb.v_s[i].x));
        diffs.push_back(d / 0.2);
        for (int i = 0; i < cfg.ny; ++i) {
            const Vec2 lhs = pb.u[i] - pb.v_s[i];
            const Vec2 rhs = p.V_d * pb.N[i] * (pb.v_p[i] - pb.v_s[i]);
            ident = std::max(ident, norm(lhs - rhs));
        }
    }
    const oracle::OrderFit fit = oracle::convergence_order(diffs, phis);
    const bool decreasing = diffs[1] < diffs[0] && diffs[2] < diffs[1];
    r.pass = decreasing && fit.order >= 0.7 && fit.order <= 1.3 && ident <= 1e-12;
    r.detail = "mode differences " + fmt(diffs[0]) + ", " + fmt(diffs[1]) + ", " +
               fmt(diffs[2]) + " (slope " + fmt(fit.order) + " vs phi, expect 1); "
               "disturbance-velocity identity residual " + fmt(ident);
    return r;
}

} // namespace

std::vector<CriterionResult> run_all(bool quick) {
    using Fn = CriterionResult (*)(bool);
    const Fn fns[] = {c1_equipartition,    c2_equilibrium_moments, c3_inertia_ladder,
                      c4_homogeneous_rheology, c5_weak_identity,   c6_wall_stress,
                      c7_conservation,     c8_force_identities,    c9_momentum_balance,
                      c10_taylor_orders,   c11_migration,          c12_mode_continuity};
    std::vector<CriterionResult> out;
    int id = 0;
    for (Fn fn : fns) {
        ++id;
        try {
            out.push_back(fn(quick));
        } catch (const std::exception& e) {
            out.push_back({id, "criterion aborted", false, false, e.what()});
        }
    }
    return out;
}

int unexpected_failures(const std::vector<CriterionResult>& results) {
    int n = 0;
    for (const auto& r : results)
        if (r.pass == r.expected_fail) ++n;
    return n;
}

std::string format_table(const std::vector<CriterionResult>& results) {
    std::ostringstream os;
    for (const auto& r : results) {
        os << "criterion " << r.id << " " << r.name << ": " << (r.pass ? "PASS" : "FAIL");
        if (!r.pass && r.expected_fail) os << " [expected]";
        if (!r.detail.empty()) os << " (" << r.detail << ")";
        os << "\n";
    }
    return os.str();
}

} // namespace polykin::acceptance
