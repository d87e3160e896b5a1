#include <doctest.h>

#include "polykin/transport.hpp"

#include <cmath>

using namespace polykin;

namespace {

PhysicalParams unit_params() {
    PhysicalParams p;
    p.zeta = 4.0;
    p.V_d = 0.05;
    return p;
}

FieldProfile blank_profile(int ny, double Ly) {
    FieldProfile prof;
    prof.ny = ny;
    prof.Ly = Ly;
    prof.N.assign(ny, 1.0);
    prof.phi.assign(ny, 0.0);
    prof.v_s.assign(ny, Vec2{});
    prof.v_p.assign(ny, Vec2{});
    prof.u.assign(ny, Vec2{});
    prof.p_s.assign(ny, 0.0);
    prof.p_p.assign(ny, 0.0);
    prof.p.assign(ny, 0.0);
    prof.tau.assign(ny, Mat2{});
    prof.defined.assign(ny, 1);
    return prof;
}

} // namespace

TEST_CASE("polymer velocity formula") {
    const PhysicalParams p = unit_params();
    const int n = 16;
    const double hy = 0.25;
    std::vector<Vec2> vs(n, Vec2{1.0, 0.0});
    std::vector<Mat2> tau(n);
    std::vector<double> N(n, 2.0);

    // uniform everything: v_p = v_s
    auto r = polymer_velocity(vs, tau, N, hy, p);
    for (int i = 0; i < n; ++i) {
        CHECK(r.defined[i]);
        CHECK(r.v_p[i].x == doctest::Approx(1.0));
        CHECK(r.v_p[i].y == doctest::Approx(0.0));
    }

    // linear density gradient drives migration down-gradient
    const double b = 0.5;
    for (int i = 0; i < n; ++i) N[i] = 1.0 + b * (i + 0.5) * hy;
    r = polymer_velocity(std::vector<Vec2>(n, Vec2{}), tau, N, hy, p);
    for (int i = 0; i < n; ++i)
        CHECK(r.v_p[i].y ==
              doctest::Approx(-p.kBT * b / (2.0 * p.zeta * N[i])).epsilon(1e-10));

    N[3] = 0.0;
    r = polymer_velocity(vs, tau, N, hy, p);
    CHECK_FALSE(r.defined[3]);
}

TEST_CASE("density step conserves mass and diffuses") {
    const PhysicalParams p = unit_params();
    const int n = 64;
    const double L = 8.0, hy = L / n;
    std::vector<Vec2> vs(n, Vec2{});
    std::vector<Mat2> tau(n);

    std::vector<double> N(n);
    for (int i = 0; i < n; ++i) {
        const double y = (i + 0.5) * hy - 0.5 * L;
        N[i] = std::exp(-y * y / (2.0 * 0.25));
    }
    double m0 = 0.0, v0 = 0.0;
    for (int i = 0; i < n; ++i) {
        m0 += N[i];
        const double y = (i + 0.5) * hy - 0.5 * L;
        v0 += N[i] * y * y;
    }
    v0 /= m0;

    const double D = 0.5 * p.kBT / p.zeta;
    const double dt = 0.2 * hy * hy / D;
    const double T = 1.0;
    const int steps = static_cast<int>(T / dt);
    for (int s = 0; s < steps; ++s) N = density_step(N, vs, tau, dt, hy, p);

    double m1 = 0.0, v1 = 0.0;
    for (int i = 0; i < n; ++i) {
        m1 += N[i];
        const double y = (i + 0.5) * hy - 0.5 * L;
        v1 += N[i] * y * y;
    }
    v1 /= m1;
    CHECK(m1 == doctest::Approx(m0).epsilon(1e-12));
    // heat kernel: variance grows by 2 D t
    CHECK(v1 - v0 == doctest::Approx(2.0 * D * steps * dt).epsilon(0.02));

    CHECK_THROWS_AS(density_step(N, vs, tau, 100.0 * dt, hy, p), std::invalid_argument);
    std::vector<double> Nu(n, 1.0);
    const auto Nu2 = density_step(Nu, vs, tau, dt, hy, p);
    for (double v : Nu2) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("newtonian limits of the momentum solver") {
    PhysicalParams p = unit_params();
    p.eta_s = 2.0;
    const int n = 64;
    const double L = 1.0;

    // pressure-driven: steady parabola dpdx/(2 eta) y (L - y)
    FieldProfile prof = blank_profile(n, L);
    prof.N.assign(n, 0.0);
    ChannelForcing f;
    f.dpdx = -4.0;
    for (int i = 0; i < 4000; ++i) solvent_momentum_step(prof, 0.05, p, CouplingMode::Solvent, f);
    for (int i = 0; i < n; i += 7) {
        const double y = (i + 0.5) * prof.hy();
        const double exact = -f.dpdx / (2.0 * p.eta_s) * y * (L - y);
        CHECK(prof.v_s[i].x == doctest::Approx(exact).epsilon(2e-3));
    }

    // moving wall: linear profile
    FieldProfile c = blank_profile(n, L);
    c.N.assign(n, 0.0);
    ChannelForcing fc;
    fc.wall_velocity_hi = 1.5;
    for (int i = 0; i < 4000; ++i) solvent_momentum_step(c, 0.05, p, CouplingMode::Solvent, fc);
    for (int i = 0; i < n; i += 7) {
        const double y = (i + 0.5) * c.hy();
        CHECK(c.v_s[i].x == doctest::Approx(1.5 * y / L).epsilon(2e-3));
    }
}

TEST_CASE("constant shear-stress gradient shifts the steady profile") {
    PhysicalParams p = unit_params();
    p.eta_s = 1.0;
    const int n = 64;
    const double L = 1.0;
    FieldProfile prof = blank_profile(n, L);
    prof.N.assign(n, 0.0);
    const double g = 0.8;  // d tau_xy / dy
    for (int i = 0; i < n; ++i) prof.tau[i].yx = g * (i + 0.5) * prof.hy();
    ChannelForcing f;
    for (int i = 0; i < 4000; ++i) solvent_momentum_step(prof, 0.05, p, CouplingMode::Solvent, f);
    // same steady problem as a pressure gradient of -g
    for (int i = 0; i < n; i += 7) {
        const double y = (i + 0.5) * prof.hy();
        CHECK(prof.v_s[i].x == doctest::Approx(g / (2.0 * p.eta_s) * y * (L - y)).epsilon(3e-3));
    }
}

TEST_CASE("divergence constraint is satisfied by the closed profile") {
    const PhysicalParams p = unit_params();
    const int n = 32;
    const double L = 4.0;
    FieldProfile prof = blank_profile(n, L);
    for (int i = 0; i < n; ++i) {
        const double y = (i + 0.5) * prof.hy();
        prof.N[i] = 1.0 + 0.3 * std::sin(2.0 * 3.14159265358979 * y / L);
        prof.phi[i] = prof.N[i] * p.V_d;
        prof.tau[i].yy = 0.2 * std::cos(2.0 * 3.14159265358979 * y / L);
        prof.tau[i].yx = 0.1 * y;
    }
    solvent_momentum_step(prof, 0.1, p, CouplingMode::Solvent, {});
    const auto dc = divergence_constraint(prof.N, prof.tau, prof.v_s, prof.u, prof.hy(), p);
    for (int i = 0; i < n; ++i) {
        CHECK(std::abs(dc.residual[i]) < 1e-12);
        CHECK(std::abs(dc.div_u[i]) < 1e-12);
    }
    // u-identity holds pointwise
    for (int i = 0; i < n; ++i) {
        const Vec2 mix = prof.phi[i] * prof.v_p[i] + (1.0 - prof.phi[i]) * prof.v_s[i];
        CHECK(prof.u[i].x == doctest::Approx(mix.x));
        CHECK(std::abs(prof.u[i].y - mix.y) < 1e-15);
    }
}

TEST_CASE("phi guard") {
    const PhysicalParams p = unit_params();
    FieldProfile prof = blank_profile(8, 1.0);
    prof.phi.assign(8, 1.5);
    CHECK_THROWS_AS(solvent_momentum_step(prof, 0.1, p, CouplingMode::Solvent, {}),
                    std::invalid_argument);
}

TEST_CASE("coupled equilibrium run stays stationary") {
    PhysicalParams p = unit_params();
    p.V_d = 1e-3;
    const SpringLaw law = SpringLaw::hookean(1.0);
    CoupledConfig cfg;
    cfg.geom = Geometry::channel(6.0);
    cfg.ny = 16;
    cfg.nq = 24;
    cfg.q_max = 4.0;
    cfg.N_av = 1.0;
    cfg.t_final = 3.0;
    cfg.tol = 1e-10;
    const CoupledResult res = coupled_solve(cfg, p, law);
    CHECK(res.converged);
    const FieldProfile& prof = res.snapshots.back();
    for (int i = 0; i < cfg.ny; ++i) {
        CHECK(std::abs(prof.v_s[i].x) < 1e-12);
        CHECK(std::abs(prof.u[i].y) < 1e-15);
    }
}

TEST_CASE("coupled couette run approaches the effective-viscosity profile") {
    PhysicalParams p = unit_params();
    p.V_d = 1e-4;
    p.eta_s = 1.0;
    const SpringLaw law = SpringLaw::hookean(1.0);
    CoupledConfig cfg;
    cfg.geom = Geometry::channel(24.0);  // wide gap: wall layers are thin
    cfg.ny = 24;
    cfg.nq = 24;
    cfg.q_max = 5.0;
    cfg.N_av = 1.0;
    cfg.forcing.wall_velocity_hi = 0.05;  // small Deborah number
    cfg.macro_dt = 0.2;
    cfg.t_final = 60.0;
    cfg.tol = 1e-7;
    const CoupledResult res = coupled_solve(cfg, p, law);
    const FieldProfile& prof = res.snapshots.back();
    // in steady couette flow the shear rate is uniform: compare mid-gap slope
    const double slope =
        (prof.v_s[17].x - prof.v_s[6].x) / (11.0 * prof.hy());
    CHECK(slope == doctest::Approx(0.05 / 24.0).epsilon(0.05));
    // shear stress balances: eta_s dvx/dy + tau_xy constant across the gap
    const double t1 = p.eta_s * slope + prof.tau[12].xy;
    const double t2 = p.eta_s * (prof.v_s[8].x - prof.v_s[7].x) / prof.hy() + prof.tau[8].xy;
    CHECK(t1 == doctest::Approx(t2).epsilon(0.05));
}
