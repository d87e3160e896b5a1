#include <doctest.h>

#include "polykin/field.hpp"

#include <cmath>

using namespace polykin;

TEST_CASE("channel mask excludes configurations touching the walls") {
    const Geometry ch = Geometry::channel(2.0);
    const SpringLaw law = SpringLaw::hookean(1.0);
    KineticField f = KineticField::create(ch, law, 8, 16, 3.0);
    CHECK(f.Ly == doctest::Approx(2.0));
    CHECK_FALSE(f.periodic_y);

    int inactive = 0;
    for (int iy = 0; iy < f.ny; ++iy)
        for (int ix = 0; ix < f.nq; ++ix)
            for (int iq = 0; iq < f.nq; ++iq) {
                const bool expect =
                    in_configuration_set({0.0, f.yc(iy)}, {f.qc(ix), f.qc(iq)}, 0.0, ch);
                CHECK(static_cast<bool>(f.active[f.idx(iy, ix, iq)]) == expect);
                if (!expect) ++inactive;
            }
    CHECK(inactive > 0);
}

TEST_CASE("finite extensibility masks the connector disk") {
    const Geometry fs = Geometry::free_space();
    const SpringLaw law = SpringLaw::fene(1.0, 2.0);
    KineticField f = KineticField::create(fs, law, 1, 32, 3.0);
    for (int ix = 0; ix < f.nq; ++ix)
        for (int iq = 0; iq < f.nq; ++iq) {
            const double r = std::hypot(f.qc(ix), f.qc(iq));
            CHECK(static_cast<bool>(f.active[f.idx(0, ix, iq)]) == (r < 2.0 * (1.0 - 1e-6)));
        }
}

TEST_CASE("equilibrium fill reproduces the coil moments") {
    PhysicalParams p;
    p.kBT = 2.0;
    const SpringLaw law = SpringLaw::hookean(0.5);  // coil size squared = 4
    KineticField f = KineticField::create(Geometry::free_space(), law, 1, 96, 12.0);
    f.set_boltzmann(p, law, 1.0);
    f.scale_mean_density(3.0);

    const auto N = f.marginal_density();
    CHECK(N[0] == doctest::Approx(3.0));
    const Mat2 M = f.mean_second_moment();
    CHECK(M.xx == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(M.yy == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(std::abs(M.xy) < 1e-12);
    CHECK(f.total_mass() == doctest::Approx(3.0 * f.Ly));
}

TEST_CASE("gaussian fill has the requested covariance") {
    PhysicalParams p;
    const SpringLaw law = SpringLaw::hookean(1.0);
    KineticField f = KineticField::create(Geometry::free_space(), law, 4, 96, 8.0);
    f.set_gaussian(2.0, 0.7);
    const auto N = f.marginal_density();
    for (double v : N) CHECK(v == doctest::Approx(2.0).epsilon(1e-8));
    const Mat2 M = f.mean_second_moment();
    CHECK(M.xx == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(M.yy == doctest::Approx(0.7).epsilon(1e-8));
}
