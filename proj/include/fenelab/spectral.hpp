#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "fenelab/errors.hpp"
#include "fenelab/params.hpp"

namespace fenelab::spectral {

using Cplx = std::complex<double>;

/// Fourier-side matrix of the linearized flow system,
///   [ 0        -i xi^T                          ]
///   [ -i g xi  -mu |xi|^2 Id - (mu+mu') xi xi^T ]
/// with g = a*gamma the acoustic coefficient (= gamma in the paper normalization a = 1).
inline Eigen::MatrixXcd assemble_A(const Eigen::VectorXd& xi, const ModelParams& p) {
    const int d = static_cast<int>(xi.size());
    const double q2 = xi.squaredNorm();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(d + 1, d + 1);
    const Cplx mi(0.0, -1.0);
    for (int j = 0; j < d; ++j) {
        A(0, 1 + j) = mi * xi(j);
        A(1 + j, 0) = mi * p.gamma_eff() * xi(j);
        for (int l = 0; l < d; ++l) {
            A(1 + j, 1 + l) = -(p.mu + p.mu_prime) * xi(j) * xi(l);
            if (j == l) A(1 + j, 1 + l) -= p.mu * q2;
        }
    }
    return A;
}

struct EigenvalueTriple {
    Cplx lambda0;     ///< -mu |xi|^2, algebraic multiplicity d-1
    Cplx lambda_plus; ///< acoustic branch
    Cplx lambda_minus;
};

/// Closed-form eigenvalues. When the discriminant 4g|xi|^2 - (2mu+mu')^2|xi|^4
/// is negative the square root turns real and both acoustic branches are real
/// and negative.
inline EigenvalueTriple eigen_A(double xi_norm, const ModelParams& p) {
    const double q2 = xi_norm * xi_norm;
    const double re = -(p.mu + 0.5 * p.mu_prime) * q2;
    const double disc = 4.0 * p.gamma_eff() * q2 -
                        (2.0 * p.mu + p.mu_prime) * (2.0 * p.mu + p.mu_prime) * q2 * q2;
    EigenvalueTriple ev;
    ev.lambda0 = Cplx(-p.mu * q2, 0.0);
    if (disc >= 0.0) {
        const double im = 0.5 * std::sqrt(disc);
        ev.lambda_plus = Cplx(re, im);
        ev.lambda_minus = Cplx(re, -im);
    } else {
        const double sh = 0.5 * std::sqrt(-disc);
        ev.lambda_plus = Cplx(re + sh, 0.0);
        ev.lambda_minus = Cplx(re - sh, 0.0);
    }
    return ev;
}

/// Radius where the acoustic discriminant vanishes: the oscillatory/monotone
/// crossover 2 sqrt(g) / (2mu + mu'), used as the low/high frequency split.
inline double crossover_radius(const ModelParams& p) {
    return 2.0 * std::sqrt(p.gamma_eff()) / (2.0 * p.mu + p.mu_prime);
}

/// Per-frequency spectral data: matrix, eigenvalues, spectral projections.
/// When the minimum relative eigenvalue gap falls below `degeneracy_tol`
/// the projections are not formed and `degenerate` is set; callers must use
/// the matrix-exponential path instead.
struct SpectralTriple {
    Eigen::VectorXd xi;
    Eigen::MatrixXcd A;
    Cplx lambda0, lambda_plus, lambda_minus;
    Eigen::MatrixXcd P0, P_plus, P_minus;
    bool degenerate = false;
};

inline SpectralTriple make_triple(const Eigen::VectorXd& xi, const ModelParams& p,
                                  double degeneracy_tol = 1e-6) {
    SpectralTriple st;
    st.xi = xi;
    st.A = assemble_A(xi, p);
    const double q = xi.norm();
    auto ev = eigen_A(q, p);
    st.lambda0 = ev.lambda0;
    st.lambda_plus = ev.lambda_plus;
    st.lambda_minus = ev.lambda_minus;

    const double scale = q * q + q;
    const double gap = std::min({std::abs(ev.lambda0 - ev.lambda_plus),
                                 std::abs(ev.lambda0 - ev.lambda_minus),
                                 std::abs(ev.lambda_plus - ev.lambda_minus)});
    if (q == 0.0 || gap < degeneracy_tol * scale) {
        st.degenerate = true;
        return st;
    }

    const int n = static_cast<int>(st.A.rows());
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    const Cplx l0 = ev.lambda0, lp = ev.lambda_plus, lm = ev.lambda_minus;
    st.P0 = ((st.A - lp * I) / (l0 - lp)) * ((st.A - lm * I) / (l0 - lm));
    st.P_plus = ((st.A - l0 * I) / (lp - l0)) * ((st.A - lm * I) / (lp - lm));
    st.P_minus = ((st.A - l0 * I) / (lm - l0)) * ((st.A - lp * I) / (lm - lp));
    return st;
}

/// Scaling-and-squaring matrix exponential (Taylor core); the independent
/// evaluation path used whenever the projection product formula degenerates.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A) {
    const int n = static_cast<int>(A.rows());
    const double nrm = A.cwiseAbs().rowwise().sum().maxCoeff(); // inf-norm
    int s = 0;
    if (nrm > 0.25) s = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
    if (s > 60) throw numerical_error("expm: matrix norm too large to scale");
    Eigen::MatrixXcd B = A / std::pow(2.0, s);
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    for (int j = 1; j <= 32; ++j) {
        term = (term * B / static_cast<double>(j)).eval();
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int j = 0; j < s; ++j) result = (result * result).eval();
    return result;
}

/// e^{tA} v via the spectral projections, falling back to scaling-and-squaring
/// at degenerate frequencies; both paths agree where both apply.
inline Eigen::VectorXcd semigroup_apply(double t, const Eigen::VectorXd& xi,
                                        const Eigen::VectorXcd& v, const ModelParams& p,
                                        double degeneracy_tol = 1e-6) {
    if (t < 0.0) throw std::invalid_argument("semigroup_apply: t must be >= 0");
    auto st = make_triple(xi, p, degeneracy_tol);
    if (st.degenerate) return expm(t * st.A) * v;
    return std::exp(t * st.lambda0) * (st.P0 * v) +
           std::exp(t * st.lambda_plus) * (st.P_plus * v) +
           std::exp(t * st.lambda_minus) * (st.P_minus * v);
}

/// Coefficients of det(lambda I - A) in ascending powers (Faddeev-LeVerrier).
inline Eigen::VectorXcd char_poly(const Eigen::MatrixXcd& A) {
    const int n = static_cast<int>(A.rows());
    Eigen::VectorXcd c(n + 1);
    c(n) = 1.0;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 1; k <= n; ++k) {
        M = (A * (M + c(n - k + 1) * Eigen::MatrixXcd::Identity(n, n))).eval();
        c(n - k) = -M.trace() / static_cast<double>(k);
    }
    return c;
}

/// Independent eigenvalue oracle (general complex eigen-solver on A).
inline Eigen::VectorXcd general_eigenvalues(const Eigen::MatrixXcd& A) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    if (es.info() != Eigen::Success)
        throw numerical_error("general_eigenvalues: complex eigen-solver failed");
    return es.eigenvalues();
}

/// Radially symmetric Fourier-side data (f(q), h(q) * xi_hat): the density
/// component and the longitudinal velocity component at |xi| = q.
struct DataProfile {
    std::function<double(double)> rho;
    std::function<double(double)> u_long;
};

/// Bounded integrable default modeling L1 data: (e^{-q^2}, 0).
inline DataProfile gaussian_profile() {
    return DataProfile{[](double q) { return std::exp(-q * q); }, [](double) { return 0.0; }};
}

namespace detail {

/// Adaptive Gauss-Legendre panel quadrature (GL7 vs GL15 error gauge).
class AdaptiveGL {
  public:
    AdaptiveGL(std::function<double(double)> f, double rel_tol)
        : f_(std::move(f)), tol_(rel_tol) {}

    double integrate(double a, double b) {
        worst_ = 0.0;
        double v = recurse(a, b, gl(a, b, 7), 0);
        return v;
    }

    double worst_panel_error() const { return worst_; }

  private:
    double gl(double a, double b, int order) const {
        // 7- and 15-point Gauss-Legendre nodes/weights on [-1, 1]
        static const double x7[] = {0.0, 0.4058451513773972, 0.7415311855993945,
                                    0.9491079123427585};
        static const double w7[] = {0.4179591836734694, 0.3818300505051189,
                                    0.2797053914892766, 0.1294849661688697};
        static const double x15[] = {0.0, 0.2011940939974345, 0.3941513470775634,
                                     0.5709721726085388, 0.7244177313601701,
                                     0.8482065834104272, 0.9372733924007060,
                                     0.9879925180204854};
        static const double w15[] = {0.2025782419255613, 0.1984314853271116,
                                     0.1861610000155622, 0.1662692058169939,
                                     0.1395706779261543, 0.1071592204671719,
                                     0.0703660474881081, 0.0307532419961173};
        const double* x = (order == 7) ? x7 : x15;
        const double* w = (order == 7) ? w7 : w15;
        const int half = (order == 7) ? 4 : 8;
        const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
        double acc = w[0] * f_(mid);
        for (int i = 1; i < half; ++i)
            acc += w[i] * (f_(mid + rad * x[i]) + f_(mid - rad * x[i]));
        return acc * rad;
    }

    double recurse(double a, double b, double coarse, int depth) {
        const double fine = gl(a, b, 15);
        const double err = std::abs(fine - coarse);
        if (err <= tol_ * (std::abs(fine) + 1e-300) || depth >= 24) {
            if (depth >= 24) worst_ = std::max(worst_, err / (std::abs(fine) + 1e-300));
            return fine;
        }
        const double mid = 0.5 * (a + b);
        return recurse(a, mid, gl(a, mid, 7), depth + 1) +
               recurse(mid, b, gl(mid, b, 7), depth + 1);
    }

    std::function<double(double)> f_;
    double tol_;
    double worst_ = 0.0;
};

} // namespace detail

/// || e^{tA} U0 ||_{L^2(xi)} for radially symmetric data, by adaptive radial
/// quadrature split at the crossover radius. The angular reduction is exact:
/// data of the form (f, h xi_hat) stays in the longitudinal 2-block along e1.
inline double decay_norm(double t, const ModelParams& p, const DataProfile& prof,
                         double rel_tol = 1e-8) {
    if (t < 0.0) throw std::invalid_argument("decay_norm: t must be >= 0");
    const int d = p.d;
    const double surface = (d == 2) ? 2.0 * 3.14159265358979323846
                                    : 4.0 * 3.14159265358979323846;

    auto integrand = [&](double q) -> double {
        Eigen::VectorXd xi = Eigen::VectorXd::Zero(d);
        xi(0) = q;
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d + 1);
        v(0) = prof.rho(q);
        v(1) = prof.u_long(q);
        Eigen::VectorXcd w = semigroup_apply(t, xi, v, p);
        return std::pow(q, d - 1) * w.squaredNorm();
    };

    const double r1 = crossover_radius(p);
    // outer cutoff: extend until the profile tail is negligible
    double qmax = std::max(2.0 * r1, 4.0);
    while (qmax < 64.0) {
        const double tail = std::abs(prof.rho(qmax)) + std::abs(prof.u_long(qmax));
        if (tail * tail * std::pow(qmax, d - 1) < 1e-18) break;
        qmax *= 2.0;
    }
    if (qmax >= 64.0)
        throw accuracy_error("decay_norm: data profile does not decay fast enough", qmax);

    detail::AdaptiveGL quad(integrand, rel_tol);
    double acc = quad.integrate(0.0, std::min(r1, qmax));
    if (quad.worst_panel_error() > 10.0 * rel_tol)
        throw accuracy_error("decay_norm: quadrature did not converge on the low band",
                             quad.worst_panel_error());
    if (qmax > r1) {
        detail::AdaptiveGL quad2(integrand, rel_tol);
        acc += quad2.integrate(r1, qmax);
        if (quad2.worst_panel_error() > 10.0 * rel_tol)
            throw accuracy_error("decay_norm: quadrature did not converge on the high band",
                                 quad2.worst_panel_error());
    }
    return std::sqrt(surface * acc);
}

/// A sampled decay curve; `slope` is filled in by the fitting diagnostics.
struct DecayProfile {
    std::vector<double> times;
    std::vector<double> values;
};

/// Mild solution U(t) = e^{tA} U0 + int_0^t e^{(t-s)A} f(s) ds with
/// Gauss-Legendre panels in s; each panel evaluation reuses semigroup_apply.
inline Eigen::VectorXcd duhamel_solve(double t, const Eigen::VectorXd& xi,
                                      const Eigen::VectorXcd& initial,
                                      const std::function<Eigen::VectorXcd(double)>& forcing,
                                      const ModelParams& p, int n_panels = 32) {
    if (t < 0.0) throw std::invalid_argument("duhamel_solve: t must be >= 0");
    Eigen::VectorXcd acc = semigroup_apply(t, xi, initial, p);
    if (t == 0.0 || n_panels < 1) return acc;
    static const double xg[] = {-0.8611363115940526, -0.3399810435848563,
                                0.3399810435848563, 0.8611363115940526};
    static const double wg[] = {0.3478548451374538, 0.6521451548625461,
                                0.6521451548625461, 0.3478548451374538};
    const double h = t / n_panels;
    for (int panel = 0; panel < n_panels; ++panel) {
        const double s0 = panel * h, mid = s0 + 0.5 * h, rad = 0.5 * h;
        for (int i = 0; i < 4; ++i) {
            const double s = mid + rad * xg[i];
            acc += (rad * wg[i]) * semigroup_apply(t - s, xi, forcing(s), p);
        }
    }
    return acc;
}

} // namespace fenelab::spectral
