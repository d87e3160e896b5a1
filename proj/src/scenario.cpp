#include "polykin/scenario.hpp"

#include "polykin/inertialess.hpp"
#include "polykin/io.hpp"
#include "polykin/langevin.hpp"
#include "polykin/oracle.hpp"
#include "polykin/parallel.hpp"
#include "polykin/stress.hpp"
#include "polykin/transport.hpp"

#include <chrono>
#include <cmath>

namespace polykin {

namespace {

using nlohmann::json;

json mat_json(const Mat2& m) {
    return {{"xx", m.xx}, {"xy", m.xy}, {"yy", m.yy}};
}

StressField diagnose_stress(const KineticField& field, const RunConfig& cfg) {
    switch (cfg.stress_mode) {
        case StressModeKind::WallAware:
            return stress_wall_aware(field, cfg.geom, cfg.law, cfg.physical.kBT,
                                     cfg.num.s_nodes);
        case StressModeKind::Homogeneous:
            return stress_homogeneous(field, cfg.law, cfg.physical.kBT);
        case StressModeKind::Taylor0:
            return stress_taylor(field, cfg.geom, cfg.law, cfg.physical.kBT, 0);
        case StressModeKind::Taylor2:
            return stress_taylor(field, cfg.geom, cfg.law, cfg.physical.kBT, 2);
    }
    throw std::logic_error("diagnose_stress: bad mode");
}

int field_ny(const RunConfig& cfg) {
    return cfg.geom.kind == Geometry::Kind::Channel ? cfg.num.ny : 1;
}

json second_moment_json(const Mat2& M, double l0) {
    json j = mat_json(M);
    j["coil_normalized"] = mat_json((1.0 / (l0 * l0)) * M);
    return j;
}

// ---- equilibrium ----------------------------------------------------------

json equilibrium_grid(const RunConfig& cfg, const std::string& out_dir) {
    const PhysicalParams& p = cfg.physical;
    KineticField field =
        KineticField::create(cfg.geom, cfg.law, field_ny(cfg), cfg.num.nq, cfg.num.q_max);
    field.set_boltzmann(p, cfg.law, p.N_av);
    FpSolver solver(p, cfg.law, {});
    ZeroFlow flow;
    const double t_max =
        cfg.num.t_final > 0.0 ? cfg.num.t_final : 200.0 * p.lambda_H(cfg.law.H);
    const FpSteadyReport rep = fp_steady(field, solver, flow, cfg.num.tol, t_max);
    io::write_stress_csv(out_dir + "/stress.csv", diagnose_stress(field, cfg));
    json s;
    s["steps"] = rep.steps;
    s["dt"] = rep.dt;
    s["converged"] = rep.converged;
    s["total_mass"] = field.total_mass();
    s["mean_second_moment"] = second_moment_json(field.mean_second_moment(), ell0(p, cfg.law));
    return s;
}

json equilibrium_langevin(const RunConfig& cfg, const std::string& out_dir) {
    const PhysicalParams& p = cfg.physical;
    const double dt = cfg.num.dt > 0.0 ? cfg.num.dt : 0.25 * p.lambda_B();
    const double t_final =
        cfg.num.t_final > 0.0 ? cfg.num.t_final : 10.0 * p.lambda_H(cfg.law.H);
    EnsembleInertial ens =
        equilibrium_ensemble(cfg.num.n_particles, p, cfg.law, cfg.geom, cfg.seed);
    ZeroFlow flow;
    const long steps = std::lround(t_final / dt);
    for (long i = 0; i < steps; ++i)
        step_inertial(ens, dt, flow, p, cfg.law, cfg.geom, InertialScheme::Splitting);
    double ke = 0.0;
    Mat2 M;
    for (const auto& d : ens.p) {
        ke += p.mass * (norm2(d.V1) + norm2(d.V2));
        M += outer(d.r2 - d.r1, d.r2 - d.r1);
    }
    const double nb = 2.0 * static_cast<double>(ens.p.size());
    M *= 2.0 / nb;
    io::write_ensemble_csv(out_dir + "/ensemble.csv", ens);
    json s;
    s["steps"] = steps;
    s["dt"] = dt;
    s["velocity_variance_ratio"] = ke / (nb * p.dim * p.kBT);
    s["mean_second_moment"] = second_moment_json(M, ell0(p, cfg.law));
    return s;
}

json equilibrium_inertialess(const RunConfig& cfg, const std::string& out_dir) {
    const PhysicalParams& p = cfg.physical;
    KineticField field =
        KineticField::create(cfg.geom, cfg.law, field_ny(cfg), cfg.num.nq, cfg.num.q_max);
    field.set_boltzmann(p, cfg.law, p.N_av);
    EnsembleInertialess ens = sample_from_field(field, cfg.num.n_particles, cfg.seed);
    const double dt = cfg.num.dt > 0.0 ? cfg.num.dt : 0.05 * p.lambda_H(cfg.law.H);
    const double t_final =
        cfg.num.t_final > 0.0 ? cfg.num.t_final : 10.0 * p.lambda_H(cfg.law.H);
    ZeroFlow flow;
    const long steps = std::lround(t_final / dt);
    for (long i = 0; i < steps; ++i) step_inertialess_sde(ens, dt, flow, p, cfg.law, cfg.geom);
    io::write_ensemble_csv(out_dir + "/ensemble.csv", ens);
    json s;
    s["steps"] = steps;
    s["dt"] = dt;
    s["mean_second_moment"] =
        second_moment_json(ensemble_second_moment(ens), ell0(p, cfg.law));
    return s;
}

// ---- coupled channel ------------------------------------------------------

json coupled_run(const RunConfig& cfg, const std::string& out_dir) {
    if (cfg.geom.kind != Geometry::Kind::Channel)
        throw ConfigError("config: solver \"coupled\" requires channel geometry");
    const PhysicalParams& p = cfg.physical;
    CoupledConfig cc;
    cc.geom = cfg.geom;
    cc.mode = cfg.mode;
    cc.ny = cfg.num.ny;
    cc.nq = cfg.num.nq;
    cc.q_max = cfg.num.q_max;
    cc.N_av = p.N_av;
    cc.forcing = cfg.num.forcing;
    cc.macro_dt = cfg.num.macro_dt;
    cc.t_final = cfg.num.t_final > 0.0 ? cfg.num.t_final : 20.0 * p.lambda_H(cfg.law.H);
    cc.tol = cfg.num.tol;
    cc.under_relax = cfg.num.under_relax;
    cc.s_nodes = cfg.num.s_nodes;
    cc.snapshot_every = cfg.num.snapshot_every;
    const CoupledResult res = coupled_solve(cc, p, cfg.law);
    io::write_profile_csv(out_dir + "/profiles.csv", res.snapshots, res.times);
    io::write_stress_csv(out_dir + "/stress.csv", diagnose_stress(res.field, cfg));
    const FieldProfile& prof = res.snapshots.back();
    const int ny = prof.ny;
    double nc = 0.0;
    for (int i = ny / 2 - 2; i < ny / 2 + 2; ++i) nc += prof.N[i] / 4.0;
    json s;
    s["converged"] = res.converged;
    s["macro_steps"] = res.macro_steps;
    s["residual"] = res.residual_history.empty() ? 0.0 : res.residual_history.back();
    s["total_mass"] = res.field.total_mass();
    s["wall_to_center_density"] = 0.5 * (prof.N[0] + prof.N[ny - 1]) / nc;
    s["centerline_velocity"] = prof.v_s[ny / 2].x;
    s["wall_cell_stress"] = mat_json(prof.tau[0]);
    return s;
}

// imposed channel flow for the configuration SDE: Couette interpolates the
// wall velocities, Poiseuille uses the total-viscosity parabola
CallableFlow imposed_channel_flow(const RunConfig& cfg) {
    const double L = cfg.geom.gap;
    const ChannelForcing f = cfg.num.forcing;
    const PhysicalParams p = cfg.physical;
    const double eta =
        p.eta_s + p.N_av * p.kBT * p.lambda_H(cfg.law.H);
    if (cfg.scenario == Scenario::Couette)
        return CallableFlow([=](double y) {
            return Vec2{f.wall_velocity_lo +
                            (f.wall_velocity_hi - f.wall_velocity_lo) * y / L,
                        0.0};
        });
    return CallableFlow(
        [=](double y) { return Vec2{-f.dpdx / (2.0 * eta) * y * (L - y), 0.0}; });
}

json channel_sde(const RunConfig& cfg, const std::string& out_dir) {
    const PhysicalParams& p = cfg.physical;
    KineticField field = KineticField::create(cfg.geom, cfg.law, cfg.num.ny,
                                              std::min(cfg.num.nq, 48), cfg.num.q_max);
    field.set_boltzmann(p, cfg.law, p.N_av);
    EnsembleInertialess ens = sample_from_field(field, cfg.num.n_particles, cfg.seed);
    const CallableFlow flow = imposed_channel_flow(cfg);
    const double dt = cfg.num.dt > 0.0 ? cfg.num.dt : 0.01 * p.lambda_H(cfg.law.H);
    const double t_final =
        cfg.num.t_final > 0.0 ? cfg.num.t_final : 40.0 * p.lambda_H(cfg.law.H);
    const long steps = std::lround(t_final / dt);
    for (long i = 0; i < steps; ++i)
        step_inertialess_sde(ens, dt, flow, p, cfg.law, cfg.geom);
    io::write_ensemble_csv(out_dir + "/ensemble.csv", ens);
    const int bins = std::max(4, cfg.num.ny / 4);
    const auto hist = density_histogram(ens, bins, cfg.geom.gap);
    double nc = 0.5 * (hist[bins / 2 - 1] + hist[bins / 2]);
    json s;
    s["steps"] = steps;
    s["dt"] = dt;
    s["density_histogram"] = hist;
    s["wall_to_center_density"] = 0.5 * (hist[0] + hist[bins - 1]) / nc;
    s["mean_second_moment"] =
        second_moment_json(ensemble_second_moment(ens), ell0(p, cfg.law));
    return s;
}

// ---- homogeneous shear ----------------------------------------------------

json shear_grid(const RunConfig& cfg, const std::string& out_dir) {
    const PhysicalParams& p = cfg.physical;
    const double gd = cfg.num.gammadot;
    KineticField field =
        KineticField::create(Geometry::free_space(), cfg.law, 1, cfg.num.nq, cfg.num.q_max);
    field.set_boltzmann(p, cfg.law, p.N_av);
    FpSolver solver(p, cfg.law, {});
    LinearShearFlow flow(gd);
    const double t_max =
        cfg.num.t_final > 0.0 ? cfg.num.t_final : 300.0 * p.lambda_H(cfg.law.H);
    const FpSteadyReport rep = fp_steady(field, solver, flow, cfg.num.tol, t_max);
    const StressField st = stress_homogeneous(field, cfg.law, p.kBT);
    io::write_stress_csv(out_dir + "/stress.csv", st);
    const bool fene = cfg.law.kind == SpringLaw::Kind::FENE;
    const oracle::ConformationState oc = oracle::constitutive_steady(
        gd, p.lambda_H(cfg.law.H),
        fene ? oracle::ClosureModel::FENE_P : oracle::ClosureModel::OldroydB,
        fene ? cfg.law.fene_b(p.kBT) : 0.0, st.N[0] * p.kBT);
    json s;
    s["steps"] = rep.steps;
    s["converged"] = rep.converged;
    s["tau"] = mat_json(st.tau[0]);
    s["tau_closure_model"] = mat_json(oc.tau);
    s["closure_deviation"] = frobenius_norm(st.tau[0] - oc.tau) /
                             std::max(frobenius_norm(oc.tau), st.N[0] * p.kBT);
    s["mean_second_moment"] = second_moment_json(field.mean_second_moment(), ell0(p, cfg.law));
    return s;
}

json shear_particles(const RunConfig& cfg, const std::string& out_dir) {
    const PhysicalParams& p = cfg.physical;
    const double gd = cfg.num.gammadot;
    const double lamH = p.lambda_H(cfg.law.H);
    const bool inertial = cfg.solver == SolverKind::Langevin;
    const Geometry fs = Geometry::free_space();
    LinearShearFlow flow(gd);
    const double dt =
        cfg.num.dt > 0.0 ? cfg.num.dt : (inertial ? 0.1 * p.lambda_B() : 0.02 * lamH);
    const double t_final = cfg.num.t_final > 0.0 ? cfg.num.t_final : 20.0 * lamH;
    const long steps = std::lround(t_final / dt);
    const long half = steps / 2;

    Mat2 M;
    long samples = 0;
    json s;
    if (inertial) {
        EnsembleInertial ens =
            equilibrium_ensemble(cfg.num.n_particles, p, cfg.law, fs, cfg.seed);
        for (long i = 0; i < steps; ++i) {
            step_inertial(ens, dt, flow, p, cfg.law, fs, InertialScheme::Splitting);
            if (i >= half && (i - half) % 50 == 0) {
                for (const auto& d : ens.p) M += outer(d.r2 - d.r1, d.r2 - d.r1);
                samples += ens.p.size();
            }
        }
        io::write_ensemble_csv(out_dir + "/ensemble.csv", ens);
        if (cfg.law.kind == SpringLaw::Kind::Hookean)
            s["second_moment_inertial_reference"] =
                mat_json(oracle::inertial_shear_steady(gd, p, cfg.law.H));
    } else {
        KineticField field =
            KineticField::create(fs, cfg.law, 1, cfg.num.nq, cfg.num.q_max);
        field.set_boltzmann(p, cfg.law, p.N_av);
        EnsembleInertialess ens = sample_from_field(field, cfg.num.n_particles, cfg.seed);
        for (long i = 0; i < steps; ++i) {
            step_inertialess_sde(ens, dt, flow, p, cfg.law, fs);
            if (i >= half && (i - half) % 50 == 0) {
                for (const Vec2& q : ens.q) M += outer(q, q);
                samples += ens.q.size();
            }
        }
        io::write_ensemble_csv(out_dir + "/ensemble.csv", ens);
    }
    M *= 1.0 / static_cast<double>(samples);
    s["steps"] = steps;
    s["dt"] = dt;
    s["mean_second_moment"] = second_moment_json(M, ell0(p, cfg.law));
    const bool fene = cfg.law.kind == SpringLaw::Kind::FENE;
    const oracle::ConformationState oc = oracle::constitutive_steady(
        gd, lamH, fene ? oracle::ClosureModel::FENE_P : oracle::ClosureModel::OldroydB,
        fene ? cfg.law.fene_b(p.kBT) : 0.0, 1.0);
    const double l0 = ell0(p, cfg.law);
    s["second_moment_closure_model"] = mat_json((l0 * l0) * oc.A);
    return s;
}

// ---- vanishing-inertia ladder ---------------------------------------------

json epsilon_ladder(const RunConfig& cfg, const std::string& out_dir) {
    PhysicalParams p = cfg.physical;
    const double lamH = p.lambda_H(cfg.law.H);
    const double gd = cfg.num.gammadot != 0.0 ? cfg.num.gammadot : 1.0 / lamH;
    const oracle::ConformationState ref = oracle::constitutive_steady(
        gd, lamH, oracle::ClosureModel::OldroydB, 0.0, 1.0);
    const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
    std::vector<double> errs;
    for (double e : eps) {
        p.mass = p.zeta * e * e * lamH;
        const Mat2 M = oracle::inertial_shear_steady(gd, p, cfg.law.H);
        const double l0 = ell0(p, cfg.law);
        errs.push_back(frobenius_norm((1.0 / (l0 * l0)) * M - ref.A));
    }
    const oracle::OrderFit fit = oracle::convergence_order(errs, eps);

    // stochastic check at the coarsest point
    p.mass = p.zeta * eps[0] * eps[0] * lamH;
    const Mat2 Mref = oracle::inertial_shear_steady(gd, p, cfg.law.H);
    const Geometry fs = Geometry::free_space();
    EnsembleInertial ens = equilibrium_ensemble(cfg.num.n_particles, p, cfg.law, fs, cfg.seed);
    LinearShearFlow flow(gd);
    const double dt = cfg.num.dt > 0.0 ? cfg.num.dt : 0.1 * p.lambda_B();
    const int per_snap = std::max(1, static_cast<int>(std::lround(0.5 * lamH / dt)));
    for (int i = 0; i < 10 * per_snap; ++i)
        step_inertial(ens, dt, flow, p, cfg.law, fs, InertialScheme::Splitting);
    std::vector<double> sx, sy, sxy;
    for (int k = 0; k < 40; ++k) {
        for (int i = 0; i < per_snap; ++i)
            step_inertial(ens, dt, flow, p, cfg.law, fs, InertialScheme::Splitting);
        Mat2 m;
        for (const auto& d : ens.p) m += outer(d.r2 - d.r1, d.r2 - d.r1);
        m *= 1.0 / static_cast<double>(ens.p.size());
        sx.push_back(m.xx);
        sy.push_back(m.yy);
        sxy.push_back(m.xy);
    }
    const double z = std::max(
        {std::abs(mean(sx) - Mref.xx) / batch_means_stderr(sx, 10),
         std::abs(mean(sy) - Mref.yy) / batch_means_stderr(sy, 10),
         std::abs(mean(sxy) - Mref.xy) / batch_means_stderr(sxy, 10)});

    {
        std::FILE* f = std::fopen((out_dir + "/ladder.csv").c_str(), "w");
        if (f) {
            std::fprintf(f, "epsilon,error\n");
            for (std::size_t i = 0; i < eps.size(); ++i)
                std::fprintf(f, "%.17g,%.17g\n", eps[i], errs[i]);
            std::fclose(f);
        }
    }
    json s;
    s["epsilon"] = eps;
    s["errors"] = errs;
    s["fitted_order"] = fit.order;
    s["stochastic_check_z"] = z;
    return s;
}

// ---- identity suite -------------------------------------------------------

json identity_suite(const RunConfig& cfg, const std::string&) {
    const double L = cfg.geom.kind == Geometry::Kind::Channel ? cfg.geom.gap : 10.0;
    const Geometry ch = Geometry::channel(L);
    const SpringLaw law = cfg.law;
    const double pi = 3.14159265358979323846;
    const double l0 = ell0(cfg.physical, law);
    const AnalyticPsi psi(cfg.num.nq, cfg.num.q_max * l0, [=](double y, Vec2 q) {
        if (y <= 0.0 || y >= L) return 0.0;
        const double env = std::pow(std::sin(pi * y / L), 2);
        const double qs = norm2(q) / (l0 * l0);
        return (1.0 + 0.5 * env) * std::exp(-0.5 * qs) *
               (1.0 + 0.1 * q.x * q.y / (l0 * l0) * env);
    });
    double weak = 0.0;
    const CounterRng rng(cfg.seed, 0x1de117);
    for (int t = 0; t < 5; ++t) {
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
        weak = std::max(weak,
                        weak_identity_residual(psi, ch, law, L, g, dg, 256, cfg.num.s_nodes));
    }

    // strong form on a smooth periodic density (no wall-induced kinks)
    const double Lp = 16.0, k = 2.0 * pi / Lp;
    const Geometry fs = Geometry::free_space();
    const AnalyticPsi psi_p(cfg.num.nq, cfg.num.q_max * l0, [=](double y, Vec2 q) {
        const double a = 1.0 + 0.5 * std::sin(k * y) + 0.2 * std::cos(2.0 * k * y);
        const double b = 0.1 * std::sin(k * y);
        const double qs = norm2(q) / (l0 * l0);
        return std::exp(-0.5 * qs) * (a + b * q.x * q.y / (l0 * l0));
    });
    const int ne = 256;
    const double hy = Lp / ne;
    std::vector<double> tyx(ne), tyy(ne);
    std::vector<Vec2> fd(ne);
    for (int i = 0; i < ne; ++i) {
        const double y = (i + 0.5) * hy;
        const Mat2 ts = spring_stress_at(psi_p, y, fs, law, cfg.num.s_nodes);
        tyx[i] = ts.yx;
        tyy[i] = ts.yy;
        fd[i] = spring_force_direct_at(psi_p, y, fs, law);
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < ne; ++i) {
        const int ip = (i + 1) % ne, im = (i + ne - 1) % ne;
        const double dx = (tyx[ip] - tyx[im]) / (2.0 * hy);
        const double dy = (tyy[ip] - tyy[im]) / (2.0 * hy);
        num += norm2(Vec2{fd[i].x - dx, fd[i].y - dy});
        den += norm2(fd[i]);
    }
    json s;
    s["weak_identity_residual"] = weak;
    s["force_divergence_residual"] = std::sqrt(num / den);
    return s;
}

json dispatch(const RunConfig& cfg, const std::string& out_dir) {
    switch (cfg.scenario) {
        case Scenario::Equilibrium:
            switch (cfg.solver) {
                case SolverKind::FokkerPlanck: return equilibrium_grid(cfg, out_dir);
                case SolverKind::Langevin: return equilibrium_langevin(cfg, out_dir);
                case SolverKind::InertialessSde: return equilibrium_inertialess(cfg, out_dir);
                case SolverKind::Coupled: return coupled_run(cfg, out_dir);
            }
            break;
        case Scenario::Couette:
        case Scenario::Poiseuille:
            return cfg.solver == SolverKind::Coupled ? coupled_run(cfg, out_dir)
                                                     : channel_sde(cfg, out_dir);
        case Scenario::HomogeneousShear:
            return cfg.solver == SolverKind::FokkerPlanck ? shear_grid(cfg, out_dir)
                                                          : shear_particles(cfg, out_dir);
        case Scenario::EpsilonLadder:
            return epsilon_ladder(cfg, out_dir);
        case Scenario::IdentitySuite:
            return identity_suite(cfg, out_dir);
    }
    throw std::logic_error("run_scenario: bad scenario");
}

} // namespace

json run_scenario(const RunConfig& cfg, const std::string& out_dir) {
    set_max_threads(cfg.num.threads);
    io::ensure_directory(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    json summary = dispatch(cfg, out_dir);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const NondimGroups g = config_groups(cfg);
    json meta;
    meta["config"] = config_echo(cfg);
    meta["groups"] = {{"De", g.De},
                      {"Re", g.Re},
                      {"ell_ratio", g.ell_ratio},
                      {"eta_s_star", g.eta_s_star},
                      {"eta_p_star", g.eta_p_star},
                      {"lambda_H", g.lambda_H},
                      {"lambda_B", g.lambda_B},
                      {"epsilon", g.epsilon}};
    meta["seed"] = cfg.seed;
    meta["warnings"] = cfg.warnings;
    meta["wall_clock_s"] = wall;
    meta["version"] = "1.0.0";
    io::write_json(out_dir + "/metadata.json", meta);

    summary["scenario"] = to_string(cfg.scenario);
    summary["solver"] = to_string(cfg.solver);
    summary["wall_clock_s"] = wall;
    io::write_json(out_dir + "/summary.json", summary);
    return summary;
}

} // namespace polykin
