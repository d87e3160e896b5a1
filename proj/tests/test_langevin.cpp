#include <doctest.h>

#include "polykin/langevin.hpp"
#include "polykin/parallel.hpp"

#include <cmath>

using namespace polykin;

namespace {

PhysicalParams unit_params() {
    PhysicalParams p;
    p.zeta = 4.0;   // lambda_H = 1 at H = 1
    p.mass = 0.04;  // lambda_B = 0.01, epsilon = 0.1
    return p;
}

} // namespace

TEST_CASE("deterministic drag decay") {
    // kBT -> 0, no spring, still fluid: V(t) = V(0) exp(-zeta t / m)
    PhysicalParams p = unit_params();
    p.kBT = 1e-30;
    const SpringLaw law = SpringLaw::hookean(1e-30);
    EnsembleInertial ens;
    ens.p.push_back({{0.0, 0.5}, {0.0, 0.5}, {1.0, 0.0}, {1.0, 0.0}});
    ZeroFlow flow;
    const double lamB = p.lambda_B();
    const double dt = lamB / 400.0;
    const int nsteps = 400;  // t = lambda_B
    for (int i = 0; i < nsteps; ++i)
        step_inertial(ens, dt, flow, p, law, Geometry::free_space());
    CHECK(ens.p[0].V1.x == doctest::Approx(std::exp(-1.0)).epsilon(0.01));
    CHECK(std::abs(ens.p[0].V1.y) < 1e-10);
}

TEST_CASE("splitting scheme reproduces equipartition and the coil at coarse dt") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry fs = Geometry::free_space();
    EnsembleInertial ens = equilibrium_ensemble(20000, p, law, fs, 11);
    ZeroFlow flow;
    const double dt = 0.5 * p.lambda_B();
    double ke = 0.0;
    Mat2 qq;
    int nsamp = 0;
    for (int i = 0; i < 400; ++i) {
        step_inertial(ens, dt, flow, p, law, fs, InertialScheme::Splitting);
        if (i < 100 || i % 50 != 0) continue;
        for (const auto& d : ens.p) {
            ke += 0.5 * p.mass * (norm2(d.V1) + norm2(d.V2)) * 0.5;
            qq += outer(d.r2 - d.r1, d.r2 - d.r1);
            ++nsamp;
        }
    }
    ke /= nsamp;
    qq *= 1.0 / nsamp;
    // equipartition: (m/2)<|V|^2> = (d/2) kBT per bead, d = 2
    CHECK(ke == doctest::Approx(p.kBT).epsilon(0.02));
    CHECK(qq.xx == doctest::Approx(p.kBT / law.H).epsilon(0.03));
    CHECK(qq.yy == doctest::Approx(p.kBT / law.H).epsilon(0.03));
}

TEST_CASE("walls confine every bead") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry ch = Geometry::channel(3.0);
    EnsembleInertial ens = equilibrium_ensemble(2000, p, law, ch, 5);
    CallableFlow flow([](double y) { return Vec2{0.5 * y, 0.0}; });
    const double dt = 0.2 * p.lambda_B();
    for (int i = 0; i < 300; ++i) {
        step_inertial(ens, dt, flow, p, law, ch, InertialScheme::Splitting);
        for (const auto& d : ens.p) {
            CHECK(d.r1.y > 0.0);
            CHECK(d.r1.y < 3.0);
            CHECK(d.r2.y > 0.0);
            CHECK(d.r2.y < 3.0);
        }
    }
}

TEST_CASE("determinism across thread counts") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry fs = Geometry::free_space();
    ZeroFlow flow;
    EnsembleInertial a = equilibrium_ensemble(500, p, law, fs, 123);
    EnsembleInertial b = equilibrium_ensemble(500, p, law, fs, 123);
    set_max_threads(1);
    for (int i = 0; i < 20; ++i) step_inertial(a, 0.01, flow, p, law, fs);
    set_max_threads(8);
    for (int i = 0; i < 20; ++i) step_inertial(b, 0.01, flow, p, law, fs);
    set_max_threads(0);
    for (std::size_t j = 0; j < a.p.size(); ++j) {
        CHECK(a.p[j].r1.x == b.p[j].r1.x);
        CHECK(a.p[j].V2.y == b.p[j].V2.y);
    }
}

TEST_CASE("profile estimators and the force identity") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry ch = Geometry::channel(4.0);
    EnsembleInertial ens = equilibrium_ensemble(5000, p, law, ch, 9);
    CallableFlow flow([](double y) { return Vec2{0.1 * y * (4.0 - y), 0.0}; });
    for (int i = 0; i < 50; ++i)
        step_inertial(ens, 0.2 * p.lambda_B(), flow, p, law, ch, InertialScheme::Splitting);

    const BinnedProfile prof = estimate_profiles(ens, 16, 4.0, flow, p, law);
    double total = 0.0;
    for (int b = 0; b < prof.bins; ++b) {
        if (!prof.defined[b]) continue;
        total += prof.N[b] * prof.hy();
        CHECK(prof.N[b] >= 0.0);
        // exact identity of the two force estimators on the same samples
        CHECK(prof.f_direct[b].x ==
              doctest::Approx(prof.f_friction[b].x).epsilon(1e-10));
        CHECK(prof.f_direct[b].y ==
              doctest::Approx(prof.f_friction[b].y).epsilon(1e-10));
        // velocity covariance is symmetric positive semi-definite
        CHECK(prof.var_V[b].xy == doctest::Approx(prof.var_V[b].yx));
        CHECK(prof.var_V[b].xx >= 0.0);
        CHECK(prof.var_V[b].xx * prof.var_V[b].yy -
                  prof.var_V[b].xy * prof.var_V[b].yx >=
              -1e-12);
    }
    CHECK(total == doctest::Approx(5000.0).epsilon(1e-12));
}

TEST_CASE("single dumbbell deposition rules") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(2.0);
    EnsembleInertial ens;
    // both beads well inside bin 1 of 4 over [0,4): bin width 1
    ens.p.push_back({{0.0, 1.2}, {0.3, 1.6}, {}, {}});
    ZeroFlow flow;
    const BinnedProfile prof = estimate_profiles(ens, 4, 4.0, flow, p, law);
    CHECK(prof.N[1] == doctest::Approx(1.0 / 1.0));
    CHECK_FALSE(prof.defined[0]);

    const auto tau = estimate_spring_stress(ens, 4, 4.0, law);
    const Vec2 q{0.3, 0.4};
    const Mat2 expect = outer(q, spring_force(q, law));
    CHECK(tau[1].xx == doctest::Approx(expect.xx));
    CHECK(tau[1].xy == doctest::Approx(expect.xy));
    CHECK(frobenius_norm(tau[0]) == doctest::Approx(0.0));

    // a dumbbell spanning two bins splits by segment overlap
    EnsembleInertial two;
    two.p.push_back({{0.0, 0.5}, {0.0, 1.5}, {}, {}});
    const auto t2 = estimate_spring_stress(two, 4, 4.0, law);
    CHECK(t2[0].yy == doctest::Approx(t2[1].yy));
    CHECK(t2[0].yy == doctest::Approx(0.5 * 2.0 * 1.0));  // half of H qy^2 per bin
}

TEST_CASE("momentum balance residual vanishes at equilibrium") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry ch = Geometry::channel(6.0);
    EnsembleInertial ens = equilibrium_ensemble(20000, p, law, ch, 21);
    ZeroFlow flow;
    const double dt = 0.25 * p.lambda_B();
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
    int checked = 0;
    for (int b = 2; b < 6; ++b) {  // interior bins
        if (!mr.defined[b]) continue;
        CHECK(std::abs(mr.mean[b].x) < 4.0 * mr.stderr_est[b].x + 1e-12);
        CHECK(std::abs(mr.mean[b].y) < 4.0 * mr.stderr_est[b].y + 1e-12);
        ++checked;
    }
    CHECK(checked > 0);
}
