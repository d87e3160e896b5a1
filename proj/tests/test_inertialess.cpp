#include <doctest.h>

#include "polykin/inertialess.hpp"
#include "polykin/oracle.hpp"

#include <cmath>

using namespace polykin;

namespace {

PhysicalParams unit_params() {
    PhysicalParams p;
    p.zeta = 4.0;  // lambda_H = 1 for H = 1
    return p;
}

} // namespace

TEST_CASE("homogeneous relaxation to the equilibrium coil") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    KineticField f = KineticField::create(Geometry::free_space(), law, 1, 128, 5.0);
    f.set_gaussian(1.0, 0.5);  // start compressed

    FpSolver solver(p, law, {});
    ZeroFlow flow;
    const FpSteadyReport rep = fp_steady(f, solver, flow, 1e-7, 100.0);
    CHECK(rep.converged);

    const Mat2 M = f.mean_second_moment();
    CHECK(M.xx == doctest::Approx(1.0).epsilon(0.01));
    CHECK(M.yy == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(M.xy) < 1e-10);
    CHECK(f.marginal_density()[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("steady shear matches the closed moment oracle") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const double gd = 0.5;
    KineticField f = KineticField::create(Geometry::free_space(), law, 1, 64, 7.0);
    f.set_boltzmann(p, law, 1.0);
    f.scale_mean_density(1.0);

    FpSolver solver(p, law, {});
    LinearShearFlow flow(gd);
    fp_steady(f, solver, flow, 1e-7, 200.0);

    const oracle::ConformationState ref =
        oracle::constitutive_steady(gd, 1.0, oracle::ClosureModel::OldroydB, 0.0, 1.0);
    const Mat2 M = f.mean_second_moment();
    CHECK(M.xy == doctest::Approx(ref.A.xy).epsilon(0.02));
    CHECK(M.xx == doctest::Approx(ref.A.xx).epsilon(0.02));
    CHECK(M.yy == doctest::Approx(ref.A.yy).epsilon(0.02));
}

TEST_CASE("step rejects an unstable dt and names the limiting term") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    KineticField f = KineticField::create(Geometry::free_space(), law, 1, 32, 6.0);
    f.set_gaussian(1.0, 1.0);
    FpSolver solver(p, law, {});
    ZeroFlow flow;
    solver.set_flow(f, flow);
    const FpStability st = solver.stability(f);
    CHECK(st.dt_max > 0.0);
    CHECK_FALSE(st.limiting.empty());
    try {
        solver.step(f, 10.0 * st.dt_max);
        CHECK(false);
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(st.limiting) != std::string::npos);
    }
}

TEST_CASE("flux form conserves mass exactly, also with walls") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry ch = Geometry::channel(4.0);
    KineticField f = KineticField::create(ch, law, 16, 24, 3.0);
    f.set_boltzmann(p, law, 1.0);
    f.scale_mean_density(1.0);
    const double m0 = f.total_mass();

    FpSolver solver(p, law, {});
    CallableFlow flow([](double y) { return Vec2{0.3 * y * (4.0 - y), 0.0}; });
    solver.set_flow(f, flow);
    const double dt = 0.9 * solver.stability(f).dt_max;
    for (int i = 0; i < 50; ++i) solver.step(f, dt);
    CHECK(f.total_mass() == doctest::Approx(m0).epsilon(1e-12));
    double pmin = 0.0;
    for (double v : f.psi) pmin = std::min(pmin, v);
    CHECK(pmin > -1e-12 * 1.0);
}

TEST_CASE("truncated velocity mode equals the exact mode for linear shear") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry ch = Geometry::channel(8.0);
    LinearShearFlow flow(0.2);

    KineticField fa = KineticField::create(ch, law, 12, 20, 3.0);
    fa.set_boltzmann(p, law, 1.0);
    KineticField fb = fa;

    FpOptions exact, trunc;
    trunc.mode = VelocityMode::TruncatedOrder2;
    FpSolver sa(p, law, exact), sb(p, law, trunc);
    sa.set_flow(fa, flow);
    sb.set_flow(fb, flow);
    const double dt = 0.5 * std::min(sa.stability(fa).dt_max, sb.stability(fb).dt_max);
    for (int i = 0; i < 20; ++i) {
        sa.step(fa, dt);
        sb.step(fb, dt);
    }
    double diff = 0.0;
    for (std::size_t k = 0; k < fa.psi.size(); ++k)
        diff = std::max(diff, std::abs(fa.psi[k] - fb.psi[k]));
    CHECK(diff < 1e-12);
}

TEST_CASE("sde sampling is deterministic and matches the field moments") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    KineticField f = KineticField::create(Geometry::free_space(), law, 1, 64, 6.0);
    f.set_boltzmann(p, law, 1.0);
    f.scale_mean_density(1.0);

    const EnsembleInertialess a = sample_from_field(f, 20000, 99);
    const EnsembleInertialess b = sample_from_field(f, 20000, 99);
    CHECK(a.q[123].x == b.q[123].x);
    const Mat2 M = ensemble_second_moment(a);
    CHECK(M.xx == doctest::Approx(1.0).epsilon(0.05));
    CHECK(M.yy == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("inertialess sde relaxes to the coil and respects walls") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::hookean(1.0);
    const Geometry ch = Geometry::channel(10.0);
    KineticField f = KineticField::create(ch, law, 10, 48, 5.0);
    f.set_gaussian(1.0, 0.4);
    EnsembleInertialess ens = sample_from_field(f, 20000, 7);

    ZeroFlow flow;
    const double dt = 0.05;  // lambda_H = 1
    for (int i = 0; i < 200; ++i) {
        step_inertialess_sde(ens, dt, flow, p, law, ch);
        for (std::size_t j = 0; j < ens.x.size(); j += 997) {
            CHECK(ens.x[j].y - 0.5 * std::abs(ens.q[j].y) >= 0.0);
            CHECK(ens.x[j].y + 0.5 * std::abs(ens.q[j].y) <= 10.0);
        }
    }
    const Mat2 M = ensemble_second_moment(ens);
    CHECK(M.xx == doctest::Approx(1.0).epsilon(0.05));
    CHECK(M.yy == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("finitely extensible sde never overextends") {
    const PhysicalParams p = unit_params();
    const SpringLaw law = SpringLaw::fene(1.0, 3.0);
    KineticField f = KineticField::create(Geometry::free_space(), law, 1, 48, 3.0);
    f.set_boltzmann(p, law, 1.0);
    EnsembleInertialess ens = sample_from_field(f, 5000, 3);
    LinearShearFlow flow(2.0);
    for (int i = 0; i < 100; ++i) {
        step_inertialess_sde(ens, 0.02, flow, p, law, Geometry::free_space());
        for (std::size_t j = 0; j < ens.q.size(); j += 101)
            CHECK(norm(ens.q[j]) < 3.0);
    }
}
