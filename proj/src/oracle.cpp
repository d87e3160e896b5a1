#include "polykin/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace polykin::oracle {

namespace {

double closure_g(const Mat2& A, ClosureModel model, double b) {
    if (model == ClosureModel::OldroydB) return 1.0;
    const double tr = A.trace();
    if (tr >= b) throw std::domain_error("constitutive_ode: tr A >= b in FENE-P closure");
    return 1.0 / (1.0 - tr / b);
}

Mat2 rhs(const Mat2& A, double gammadot, double lambda_H, ClosureModel model, double b) {
    // kappa A + A kappa^T with kappa = [[0, gd], [0, 0]]
    Mat2 conv;
    conv.xx = 2.0 * gammadot * A.xy;
    conv.xy = gammadot * A.yy;
    conv.yx = gammadot * A.yy;
    conv.yy = 0.0;
    const double g = closure_g(A, model, b);
    Mat2 relax = g * A - Mat2::identity();
    return conv - (1.0 / lambda_H) * relax;
}

} // namespace

ConformationState constitutive_ode(double gammadot, double lambda_H, ClosureModel model,
                                   double fene_b, double N_kBT, double t_final) {
    if (!(lambda_H > 0.0)) throw std::invalid_argument("constitutive_ode: lambda_H must be positive");
    if (model == ClosureModel::FENE_P && !(fene_b > 2.0))
        throw std::invalid_argument("constitutive_ode: FENE-P needs b > 2");
    const double dt0 = lambda_H / 100.0;
    ConformationState st;
    double t = 0.0;
    while (t < t_final) {
        const double dt = std::min(dt0, t_final - t);
        const Mat2 k1 = rhs(st.A, gammadot, lambda_H, model, fene_b);
        const Mat2 k2 = rhs(st.A + 0.5 * dt * k1, gammadot, lambda_H, model, fene_b);
        const Mat2 k3 = rhs(st.A + 0.5 * dt * k2, gammadot, lambda_H, model, fene_b);
        const Mat2 k4 = rhs(st.A + dt * k3, gammadot, lambda_H, model, fene_b);
        st.A += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }
    st.time = t_final;
    st.tau = N_kBT * (closure_g(st.A, model, fene_b) * st.A - Mat2::identity());
    return st;
}

ConformationState constitutive_steady(double gammadot, double lambda_H, ClosureModel model,
                                      double fene_b, double N_kBT) {
    ConformationState st;
    double t = 0.0;
    const double span = 20.0 * lambda_H;
    for (int iter = 0; iter < 100; ++iter) {
        double tt = 0.0;
        const double dt = lambda_H / 100.0;
        Mat2 A = st.A;
        while (tt < span) {
            const Mat2 k1 = rhs(A, gammadot, lambda_H, model, fene_b);
            const Mat2 k2 = rhs(A + 0.5 * dt * k1, gammadot, lambda_H, model, fene_b);
            const Mat2 k3 = rhs(A + 0.5 * dt * k2, gammadot, lambda_H, model, fene_b);
            const Mat2 k4 = rhs(A + dt * k3, gammadot, lambda_H, model, fene_b);
            A += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            tt += dt;
        }
        const double change = frobenius_norm(A - st.A) / std::max(1.0, frobenius_norm(A));
        st.A = A;
        t += span;
        if (change < 1e-13) break;
    }
    st.time = t;
    st.tau = N_kBT * (closure_g(st.A, model, fene_b) * st.A - Mat2::identity());
    return st;
}

Mat2 equilibrium_moments(const SpringLaw& law, const PhysicalParams& params) {
    const double kBT = params.kBT;
    if (law.kind == SpringLaw::Kind::Hookean) {
        return (kBT / law.H) * Mat2::identity();
    }
    // Boltzmann weight of the finitely extensible spring on |q| < q0 in d=2:
    // w(r) = r * (1 - r^2/q0^2)^{b/2}, <q_i q_j> = delta_ij <r^2>/2.
    const double b = law.fene_b(kBT);
    const int n = 4096;
    const double h = law.q0 / n;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * h;
        const double w = r * std::pow(1.0 - r * r / (law.q0 * law.q0), b / 2.0);
        num += w * r * r;
        den += w;
    }
    const double r2 = num / den;
    return (r2 / 2.0) * Mat2::identity();
}

Mat2 inertial_shear_steady(double gammadot, const PhysicalParams& params, double H) {
    params.validate();
    if (!(H > 0.0)) throw std::invalid_argument("inertial_shear_steady: H must be positive");
    const double m = params.mass, zeta = params.zeta, kBT = params.kBT;
    // state z = (qx, qy, wx, wy), w = V2 - V1:
    //   dq = w dt
    //   m dw = (-zeta w + zeta kappa q - 2 H q) dt + sqrt(4 zeta kBT) dW
    double A[4][4] = {};
    A[0][2] = 1.0;
    A[1][3] = 1.0;
    A[2][0] = -2.0 * H / m;
    A[2][1] = zeta * gammadot / m;
    A[2][2] = -zeta / m;
    A[3][1] = -2.0 * H / m;
    A[3][3] = -zeta / m;
    double Q[4][4] = {};
    Q[2][2] = Q[3][3] = 4.0 * zeta * kBT / (m * m);

    // stationary covariance: A X + X A^T + Q = 0, solved as a dense 16x16
    // linear system in vec(X)
    double M[16][17] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const int row = 4 * i + j;
            for (int k = 0; k < 4; ++k) {
                M[row][4 * k + j] += A[i][k];  // (A X)_{ij}
                M[row][4 * i + k] += A[j][k];  // (X A^T)_{ij}
            }
            M[row][16] = -Q[i][j];
        }
    for (int c = 0; c < 16; ++c) {
        int piv = c;
        for (int r = c + 1; r < 16; ++r)
            if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
        if (std::abs(M[piv][c]) < 1e-300)
            throw std::runtime_error("inertial_shear_steady: singular Lyapunov system");
        if (piv != c)
            for (int k = c; k < 17; ++k) std::swap(M[piv][k], M[c][k]);
        for (int r = 0; r < 16; ++r) {
            if (r == c) continue;
            const double f = M[r][c] / M[c][c];
            if (f == 0.0) continue;
            for (int k = c; k < 17; ++k) M[r][k] -= f * M[c][k];
        }
    }
    double X[16];
    for (int c = 0; c < 16; ++c) X[c] = M[c][16] / M[c][c];
    return {X[0], X[1], X[4], X[5]};
}

std::vector<double> maxwellian(const MomentumGrid& grid, double kBT) {
    std::vector<double> m(grid.size());
    double sum = 0.0;
    if (grid.dim == 1) {
        for (int i = 0; i < grid.n; ++i) {
            const double p = grid.center(i);
            m[i] = std::exp(-p * p / (2.0 * kBT));
            sum += m[i] * grid.h();
        }
    } else {
        for (int i = 0; i < grid.n; ++i)
            for (int j = 0; j < grid.n; ++j) {
                const double px = grid.center(i), py = grid.center(j);
                m[i * grid.n + j] = std::exp(-(px * px + py * py) / (2.0 * kBT));
                sum += m[i * grid.n + j] * grid.h() * grid.h();
            }
    }
    for (double& v : m) v /= sum;
    return m;
}

namespace {

// conservative 1D sweep of d/dp(p phi) + kBT d2/dp2 phi along one axis
void collision_axis(const std::vector<double>& phi, std::vector<double>& out,
                    const MomentumGrid& grid, double kBT, int axis) {
    const double h = grid.h();
    const int n = grid.n;
    const int nlines = grid.dim == 1 ? 1 : n;
    const int stride = (grid.dim == 1 || axis == 1) ? 1 : n;
    const int line_stride = (grid.dim == 1) ? 0 : (axis == 1 ? n : 1);
    for (int l = 0; l < nlines; ++l) {
        const double* p = phi.data() + l * line_stride;
        double* o = out.data() + l * line_stride;
        // flux at interior face i+1/2: -(p_face phi_face) - kBT dphi/dp,
        // so that Q = -dF/dp; boundary faces carry zero flux
        double flux_prev = 0.0;
        for (int i = 0; i < n; ++i) {
            double flux_next = 0.0;
            if (i + 1 < n) {
                const double pf = -grid.p_max + (i + 1) * h;
                const double phif = 0.5 * (p[i * stride] + p[(i + 1) * stride]);
                flux_next = -(pf * phif) - kBT * (p[(i + 1) * stride] - p[i * stride]) / h;
            }
            o[i * stride] += -(flux_next - flux_prev) / h;
            flux_prev = flux_next;
        }
    }
}

} // namespace

std::vector<double> collision_apply(const std::vector<double>& phi, const MomentumGrid& grid,
                                    double kBT) {
    if (phi.size() != grid.size())
        throw std::invalid_argument("collision_apply: size mismatch");
    std::vector<double> out(phi.size(), 0.0);
    collision_axis(phi, out, grid, kBT, 0);
    if (grid.dim == 2) collision_axis(phi, out, grid, kBT, 1);
    return out;
}

OrderFit convergence_order(const std::vector<double>& errors, const std::vector<double>& spacings) {
    if (errors.size() != spacings.size() || errors.size() < 3)
        throw std::invalid_argument("convergence_order: need >= 3 matching points");
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0.0)) throw std::invalid_argument("convergence_order: errors must be positive");
        if (!(spacings[i] > 0.0)) throw std::invalid_argument("convergence_order: spacings must be positive");
        if (i > 0 && !(spacings[i] < spacings[i - 1]))
            throw std::invalid_argument("convergence_order: spacings must strictly decrease");
    }
    const std::size_t m = errors.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(spacings[i]);
        const double y = std::log(errors[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    OrderFit fit;
    fit.order = (m * sxy - sx * sy) / denom;
    // residual-based confidence interval on the slope
    double ss_res = 0.0;
    const double intercept = (sy - fit.order * sx) / m;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(spacings[i]);
        const double y = std::log(errors[i]);
        const double r = y - (intercept + fit.order * x);
        ss_res += r * r;
    }
    if (m > 2) {
        const double se = std::sqrt(ss_res / (m - 2) / (sxx - sx * sx / m));
        fit.half_width = 1.96 * se;
    }
    return fit;
}

} // namespace polykin::oracle
