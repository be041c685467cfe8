#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "fenelab/errors.hpp"

namespace fenelab {

/// Jacobi polynomial values P_0..P_n at x for weight (1-x)^alpha (1+x)^beta,
/// standard (non-normalized) convention.
inline std::vector<double> jacobi_values(int n, double alpha, double beta, double x) {
    std::vector<double> p(static_cast<std::size_t>(n) + 1);
    p[0] = 1.0;
    if (n == 0) return p;
    p[1] = 0.5 * (alpha + beta + 2.0) * x + 0.5 * (alpha - beta);
    for (int m = 2; m <= n; ++m) {
        const double t = 2.0 * m + alpha + beta;
        const double c1 = 2.0 * m * (m + alpha + beta) * (t - 2.0);
        const double c2 = (t - 1.0) * (alpha * alpha - beta * beta);
        const double c3 = (t - 2.0) * (t - 1.0) * t;
        const double c4 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * t;
        p[static_cast<std::size_t>(m)] =
            ((c2 + c3 * x) * p[static_cast<std::size_t>(m - 1)] -
             c4 * p[static_cast<std::size_t>(m - 2)]) / c1;
    }
    return p;
}

/// Derivatives dP_0/dx .. dP_n/dx via d/dx P_n^{(a,b)} = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}.
inline std::vector<double> jacobi_derivs(int n, double alpha, double beta, double x) {
    std::vector<double> dp(static_cast<std::size_t>(n) + 1, 0.0);
    if (n == 0) return dp;
    auto shifted = jacobi_values(n - 1, alpha + 1.0, beta + 1.0, x);
    for (int m = 1; m <= n; ++m)
        dp[static_cast<std::size_t>(m)] =
            0.5 * (m + alpha + beta + 1.0) * shifted[static_cast<std::size_t>(m - 1)];
    return dp;
}

/// Squared L2 norm of P_n^{(alpha,beta)} under the Jacobi weight on [-1,1].
inline double jacobi_norm_sq(int n, double alpha, double beta) {
    // 2^(a+b+1)/(2n+a+b+1) * G(n+a+1)G(n+b+1)/(G(n+1)G(n+a+b+1))
    const double lg = (alpha + beta + 1.0) * std::log(2.0) -
                      std::log(2.0 * n + alpha + beta + 1.0) +
                      std::lgamma(n + alpha + 1.0) + std::lgamma(n + beta + 1.0) -
                      std::lgamma(n + 1.0) - std::lgamma(n + alpha + beta + 1.0);
    return std::exp(lg);
}

/// Total mass of the Jacobi weight, mu0 = int_{-1}^{1} (1-x)^a (1+x)^b dx.
inline double jacobi_mu0(double alpha, double beta) {
    const double lg = (alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                      std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0);
    return std::exp(lg);
}

struct QuadratureRule {
    Eigen::VectorXd nodes;   ///< ascending in (-1, 1)
    Eigen::VectorXd weights; ///< nonnegative
};

/// n-point Gauss-Jacobi rule for int_{-1}^{1} (1-x)^alpha (1+x)^beta f(x) dx,
/// exact for polynomials of degree <= 2n-1 (Golub-Welsch on the recurrence
/// tridiagonal).
inline QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
    if (alpha <= -1.0 || beta <= -1.0)
        throw std::invalid_argument("gauss_jacobi: weight exponents must be > -1");

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    const double apb = alpha + beta;
    for (int i = 0; i < n; ++i) {
        // i = 0 uses the cancelled form; the general one is 0/0 when alpha+beta = 0.
        const double t = 2.0 * i + apb;
        J(i, i) = (i == 0) ? (beta - alpha) / (apb + 2.0)
                           : (beta * beta - alpha * alpha) / (t * (t + 2.0));
        if (i >= 1) {
            const double t = 2.0 * i + apb;
            double b2;
            if (i == 1)
                b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) /
                     ((apb + 2.0) * (apb + 2.0) * (apb + 3.0));
            else
                b2 = 4.0 * i * (i + alpha) * (i + beta) * (i + apb) /
                     (t * t * (t + 1.0) * (t - 1.0));
            const double b = std::sqrt(b2);
            J(i, i - 1) = b;
            J(i - 1, i) = b;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success)
        throw numerical_error("gauss_jacobi: tridiagonal eigen-decomposition failed");

    QuadratureRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    const double mu0 = jacobi_mu0(alpha, beta);
    for (int i = 0; i < n; ++i) {
        const double q0 = es.eigenvectors()(0, i);
        rule.weights(i) = mu0 * q0 * q0;
    }
    return rule;
}

} // namespace fenelab
