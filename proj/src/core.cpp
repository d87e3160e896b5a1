#include "polykin/core.hpp"

namespace polykin {

void PhysicalParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string("PhysicalParams: ") + name + " must be positive");
    };
    positive(zeta, "zeta");
    positive(kBT, "kBT");
    positive(mass, "mass");
    positive(eta_s, "eta_s");
    positive(rho_s, "rho_s");
    positive(V_d, "V_d");
    positive(N_av, "N_av");
    if (dim != 2 && dim != 3) throw std::invalid_argument("PhysicalParams: dim must be 2 or 3");
    if (rho_p > 0.0) {
        const double expect = 2.0 * mass / V_d;
        if (std::abs(rho_p - expect) > 1e-12 * expect)
            throw std::invalid_argument("PhysicalParams: rho_p inconsistent with 2*mass/V_d");
    }
}

double spring_force_scale(double q_norm2, const SpringLaw& law) {
    if (law.kind == SpringLaw::Kind::Hookean) return law.H;
    const double q02 = law.q0 * law.q0;
    if (q_norm2 >= q02)
        throw std::domain_error("spring_force: connector at or beyond maximum extension");
    return law.H / (1.0 - q_norm2 / q02);
}

Vec2 spring_force(const Vec2& q, const SpringLaw& law) {
    return spring_force_scale(norm2(q), law) * q;
}

double ell0(const PhysicalParams& params, const SpringLaw& law) {
    return std::sqrt(params.kBT / law.H);
}

Geometry Geometry::channel(double gap) {
    if (!(gap > 0.0)) throw std::invalid_argument("Geometry: channel gap must be positive");
    Geometry g;
    g.kind = Kind::Channel;
    g.gap = gap;
    return g;
}

Geometry Geometry::periodic_box(double side) {
    if (!(side > 0.0)) throw std::invalid_argument("Geometry: box side must be positive");
    Geometry g;
    g.kind = Kind::PeriodicBox;
    g.side = side;
    return g;
}

bool in_configuration_set(const Vec2& x, const Vec2& q, double s, const Geometry& geom) {
    return geom.contains(x + (s - 0.5) * q) && geom.contains(x + (s + 0.5) * q);
}

NondimGroups nondim_groups(const PhysicalParams& params, const SpringLaw& law,
                           double V, double L) {
    if (!(V > 0.0) || !(L > 0.0))
        throw std::invalid_argument("nondim_groups: scales must be positive");
    NondimGroups g;
    g.lambda_H = params.lambda_H(law.H);
    g.lambda_B = params.lambda_B();
    g.epsilon = std::sqrt(g.lambda_B / g.lambda_H);
    g.De = params.zeta * V / (4.0 * law.H * L);
    const double eta_p = params.N_av * params.kBT * params.zeta / (4.0 * law.H);
    const double eta = params.eta_s + eta_p;
    g.Re = params.rho_s * V * L / eta;
    g.eta_s_star = params.eta_s / eta;
    g.eta_p_star = eta_p / eta;
    g.ell_ratio = ell0(params, law) / L;
    return g;
}

} // namespace polykin
