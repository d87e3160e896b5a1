#include "polykin/transport.hpp"

#include "polykin/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polykin {

VelocityProfileResult polymer_velocity(const std::vector<Vec2>& v_s,
                                       const std::vector<Mat2>& tau,
                                       const std::vector<double>& N, double hy,
                                       const PhysicalParams& params) {
    const int n = static_cast<int>(N.size());
    if (static_cast<int>(v_s.size()) != n || static_cast<int>(tau.size()) != n)
        throw std::invalid_argument("polymer_velocity: grid mismatch");
    std::vector<double> tyx(n), tyy(n);
    for (int i = 0; i < n; ++i) {
        tyx[i] = tau[i].yx;
        tyy[i] = tau[i].yy;
    }
    const auto dtx = derivative_profile(tyx, hy);
    const auto dty = derivative_profile(tyy, hy);
    const auto dN = derivative_profile(N, hy);

    VelocityProfileResult out;
    out.v_p.assign(n, Vec2{});
    out.defined.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        if (!(N[i] > 0.0)) continue;
        out.defined[i] = 1;
        const double c = 1.0 / (2.0 * params.zeta * N[i]);
        out.v_p[i] = v_s[i] + c * Vec2{dtx[i], dty[i] - params.kBT * dN[i]};
    }
    return out;
}

std::vector<double> density_step(const std::vector<double>& N,
                                 const std::vector<Vec2>& v_s,
                                 const std::vector<Mat2>& tau, double dt, double hy,
                                 const PhysicalParams& params) {
    const int n = static_cast<int>(N.size());
    if (static_cast<int>(v_s.size()) != n || static_cast<int>(tau.size()) != n)
        throw std::invalid_argument("density_step: grid mismatch");
    const double D = 0.5 * params.kBT / params.zeta;
    double vmax = 0.0;
    for (const Vec2& v : v_s) vmax = std::max(vmax, std::abs(v.y));
    if (dt * (2.0 * D / (hy * hy) + vmax / hy) > 1.0)
        throw std::invalid_argument("density_step: dt exceeds stability bound");

    std::vector<double> out = N;
    for (int f = 1; f < n; ++f) {
        const double vf = 0.5 * (v_s[f - 1].y + v_s[f].y);
        const double adv = vf * (vf > 0.0 ? N[f - 1] : N[f]);
        const double flux = adv - D * (N[f] - N[f - 1]) / hy +
                            (0.5 / params.zeta) * (tau[f].yy - tau[f - 1].yy) / hy;
        out[f - 1] -= dt * flux / hy;
        out[f] += dt * flux / hy;
    }
    return out;
}

DivergenceConstraint divergence_constraint(const std::vector<double>& N,
                                           const std::vector<Mat2>& tau,
                                           const std::vector<Vec2>& v_s,
                                           const std::vector<Vec2>& u, double hy,
                                           const PhysicalParams& params) {
    const int n = static_cast<int>(N.size());
    std::vector<double> tyy(n), vsy(n), uy(n);
    for (int i = 0; i < n; ++i) {
        tyy[i] = tau[i].yy;
        vsy[i] = v_s[i].y;
        uy[i] = u[i].y;
    }
    DivergenceConstraint out;
    const auto d2N = derivative_profile(derivative_profile(N, hy), hy);
    const auto d2t = derivative_profile(derivative_profile(tyy, hy), hy);
    out.target.resize(n);
    for (int i = 0; i < n; ++i)
        out.target[i] = params.V_d / (2.0 * params.zeta) * (params.kBT * d2N[i] - d2t[i]);
    const auto dvy = derivative_profile(vsy, hy);
    out.residual.resize(n);
    for (int i = 0; i < n; ++i) out.residual[i] = dvy[i] - out.target[i];
    out.div_u = derivative_profile(uy, hy);
    return out;
}

namespace {

// Thomas algorithm; a: sub, b: diag, c: super (all length n)
void tridiag_solve(std::vector<double>& a, std::vector<double>& b,
                   std::vector<double>& c, std::vector<double>& r) {
    const int n = static_cast<int>(b.size());
    for (int i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        r[i] -= m * r[i - 1];
    }
    r[n - 1] /= b[n - 1];
    for (int i = n - 2; i >= 0; --i) r[i] = (r[i] - c[i] * r[i + 1]) / b[i];
}

// Set v_{s,y}, v_p, u and the pressures from v_{s,x}, tau and N; the
// wall-normal construction enforces u_y = 0 (mixture incompressibility in
// the 1D channel).
void close_profile(FieldProfile& prof, const PhysicalParams& params, CouplingMode mode) {
    const int n = prof.ny;
    const double hy = prof.hy();
    std::vector<double> tyx(n), tyy(n);
    for (int i = 0; i < n; ++i) {
        tyx[i] = prof.tau[i].yx;
        tyy[i] = prof.tau[i].yy;
    }
    const auto dtx = derivative_profile(tyx, hy);
    const auto dty = derivative_profile(tyy, hy);
    const auto dN = derivative_profile(prof.N, hy);

    prof.defined.assign(n, 1);
    std::vector<double> fy(n);
    for (int i = 0; i < n; ++i) {
        const double om = 1.0 - prof.phi[i];
        double fx;
        if (mode == CouplingMode::Solvent) {
            fy[i] = dty[i] - params.kBT * dN[i];
            fx = dtx[i];
        } else {
            fy[i] = dty[i] / om;
            fx = dtx[i] / om;
        }
        prof.v_s[i].y = -params.V_d / (2.0 * params.zeta) * fy[i];
        if (prof.N[i] > 0.0) {
            const double c = 1.0 / (2.0 * params.zeta * prof.N[i]);
            prof.v_p[i] = prof.v_s[i] + c * Vec2{fx, fy[i]};
        } else {
            prof.v_p[i] = prof.v_s[i];
            prof.defined[i] = 0;
        }
        prof.u[i] = prof.phi[i] * prof.v_p[i] + (1.0 - prof.phi[i]) * prof.v_s[i];
    }

    // wall-normal balance integrated for the solvent pressure (steady form)
    std::vector<double> vsy(n);
    for (int i = 0; i < n; ++i) vsy[i] = prof.v_s[i].y;
    const auto d2vy = derivative_profile(derivative_profile(vsy, hy), hy);
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = 2.0 * params.eta_s * d2vy[i] + fy[i];
    prof.p_s.assign(n, 0.0);
    prof.p_s[0] = 0.5 * hy * g[0];
    for (int i = 1; i < n; ++i) prof.p_s[i] = prof.p_s[i - 1] + 0.5 * hy * (g[i - 1] + g[i]);
    for (int i = 0; i < n; ++i) {
        prof.p_p[i] = prof.N[i] * params.kBT;
        prof.p[i] = prof.p_s[i] + prof.p_p[i];
    }
}

} // namespace

void solvent_momentum_step(FieldProfile& prof, double dt, const PhysicalParams& params,
                           CouplingMode mode, const ChannelForcing& forcing) {
    const int n = prof.ny;
    if (n < 3) throw std::invalid_argument("solvent_momentum_step: need >= 3 cells");
    const double hy = prof.hy();
    for (double ph : prof.phi)
        if (ph >= 1.0)
            throw std::invalid_argument("solvent_momentum_step: polymer fraction >= 1");

    std::vector<double> tyx(n);
    for (int i = 0; i < n; ++i) tyx[i] = prof.tau[i].yx;
    const auto dtx = derivative_profile(tyx, hy);

    std::vector<double> vx(n);
    for (int i = 0; i < n; ++i) vx[i] = prof.v_s[i].x;
    const auto dvx = derivative_profile(vx, hy);

    const double alpha = params.eta_s / (hy * hy);
    std::vector<double> a(n, -alpha), b(n), c(n, -alpha), r(n);
    for (int i = 0; i < n; ++i) {
        const double rho = params.rho_s * (1.0 - prof.phi[i]);
        const double fx = mode == CouplingMode::Solvent ? dtx[i] : dtx[i] / (1.0 - prof.phi[i]);
        b[i] = rho / dt + 2.0 * alpha;
        r[i] = rho / dt * vx[i] - rho * prof.v_s[i].y * dvx[i] - forcing.dpdx + fx;
    }
    // no-slip half-cell closure at the walls
    b[0] += alpha;
    r[0] += 2.0 * alpha * forcing.wall_velocity_lo;
    b[n - 1] += alpha;
    r[n - 1] += 2.0 * alpha * forcing.wall_velocity_hi;
    tridiag_solve(a, b, c, r);
    for (int i = 0; i < n; ++i) prof.v_s[i].x = r[i];

    close_profile(prof, params, mode);
}

CoupledResult coupled_solve(const CoupledConfig& cfg, const PhysicalParams& params,
                            const SpringLaw& law) {
    params.validate();
    if (cfg.geom.kind != Geometry::Kind::Channel)
        throw std::invalid_argument("coupled_solve: channel geometry required");
    const double lambda_H = params.lambda_H(law.H);
    const double macro_dt = cfg.macro_dt > 0.0 ? cfg.macro_dt : 0.1 * lambda_H;
    const double t_final = cfg.t_final > 0.0 ? cfg.t_final : 500.0 * lambda_H;
    const double ell0 = std::sqrt(params.kBT / law.H);
    const StressMode smode =
        cfg.mode == CouplingMode::Solvent ? StressMode::Solvent : StressMode::Solution;

    CoupledResult res;
    res.field = KineticField::create(cfg.geom, law, cfg.ny, cfg.nq, cfg.q_max * ell0);
    res.field.set_boltzmann(params, law, 1.0);
    res.field.scale_mean_density(cfg.N_av);
    const double mass0 = res.field.total_mass();

    FieldProfile prof;
    prof.ny = cfg.ny;
    prof.Ly = cfg.geom.gap;
    prof.N.assign(cfg.ny, 0.0);
    prof.phi.assign(cfg.ny, 0.0);
    prof.v_s.assign(cfg.ny, Vec2{});
    prof.v_p.assign(cfg.ny, Vec2{});
    prof.u.assign(cfg.ny, Vec2{});
    prof.p_s.assign(cfg.ny, 0.0);
    prof.p_p.assign(cfg.ny, 0.0);
    prof.p.assign(cfg.ny, 0.0);
    prof.tau.assign(cfg.ny, Mat2{});
    prof.defined.assign(cfg.ny, 1);

    FpOptions fpo;
    fpo.mode = cfg.velocity_mode;
    FpSolver solver(params, law, fpo);

    // velocity scale for the relative residual: forcing-derived if driven,
    // with the thermal coil speed as a floor so an unforced run where the
    // velocity stays at roundoff level still registers as converged
    const double vref0 = std::max({std::abs(cfg.forcing.wall_velocity_lo),
                                   std::abs(cfg.forcing.wall_velocity_hi),
                                   std::abs(cfg.forcing.dpdx) * cfg.geom.gap * cfg.geom.gap /
                                       (8.0 * params.eta_s),
                                   std::sqrt(params.kBT / law.H) / lambda_H});
    double t = 0.0;
    int step = 0;
    while (t < t_final) {
        // velocity field seen by the dumbbells
        std::vector<double> wx(cfg.ny), wy(cfg.ny);
        for (int i = 0; i < cfg.ny; ++i) {
            const Vec2& v = cfg.mode == CouplingMode::Solvent ? prof.v_s[i] : prof.u[i];
            wx[i] = v.x;
            wy[i] = v.y;
        }
        ProfileFlow flow(wx, wy, cfg.geom.gap, {cfg.forcing.wall_velocity_lo, 0.0},
                         {cfg.forcing.wall_velocity_hi, 0.0});
        solver.set_flow(res.field, flow);
        const double dt_max = solver.stability(res.field).dt_max;
        const int nsub = std::max(1, static_cast<int>(std::ceil(macro_dt / (0.9 * dt_max))));
        const double dts = macro_dt / nsub;
        for (int k = 0; k < nsub; ++k) solver.step(res.field, dts);

        StressField st = stress_wall_aware(res.field, cfg.geom, law, params.kBT,
                                           cfg.s_nodes, smode);
        const auto Nm = res.field.marginal_density();
        for (int i = 0; i < cfg.ny; ++i) {
            if (std::abs(st.N[i] - Nm[i]) > 1e-8 * (std::abs(Nm[i]) + cfg.N_av))
                throw std::runtime_error("coupled_solve: N diagnostics disagree");
            prof.N[i] = st.N[i];
            prof.phi[i] = st.N[i] * params.V_d;
            prof.tau[i] = st.tau[i];
        }

        std::vector<double> vx_prev(cfg.ny);
        for (int i = 0; i < cfg.ny; ++i) vx_prev[i] = prof.v_s[i].x;
        solvent_momentum_step(prof, macro_dt, params, cfg.mode, cfg.forcing);
        for (int i = 0; i < cfg.ny; ++i)
            prof.v_s[i].x = vx_prev[i] + cfg.under_relax * (prof.v_s[i].x - vx_prev[i]);
        close_profile(prof, params, cfg.mode);

        t += macro_dt;
        ++step;
        double dv = 0.0, vmag = vref0;
        for (int i = 0; i < cfg.ny; ++i) {
            dv = std::max(dv, std::abs(prof.v_s[i].x - vx_prev[i]));
            vmag = std::max(vmag, std::abs(prof.v_s[i].x));
        }
        const double resid = dv / vmag * (lambda_H / macro_dt);
        res.residual_history.push_back(resid);
        if (res.residual_history.size() > 20) {
            const double early = res.residual_history[res.residual_history.size() - 20];
            if (resid > 1e3 * early && resid > 1.0) {
                std::ostringstream os;
                os << "coupled_solve: diverging; last residuals:";
                for (std::size_t k = res.residual_history.size() - 5;
                     k < res.residual_history.size(); ++k)
                    os << ' ' << res.residual_history[k];
                throw std::runtime_error(os.str());
            }
        }

        if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0) {
            res.snapshots.push_back(prof);
            res.times.push_back(t);
        }
        if (resid < cfg.tol) {
            res.converged = true;
            break;
        }
    }
    res.macro_steps = step;
    res.snapshots.push_back(prof);
    res.times.push_back(t);

    const double drift = std::abs(res.field.total_mass() - mass0) / mass0;
    if (drift > 1e-9)
        throw std::runtime_error("coupled_solve: polymer mass drift " + std::to_string(drift));
    return res;
}

} // namespace polykin
