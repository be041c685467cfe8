#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "fenelab/errors.hpp"
#include "fenelab/gauss_jacobi.hpp"

namespace fenelab::disk {

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// Equilibrium configuration density psi(R) = (1-|R|^2)^k / Z_k on the unit disk.
/// Z_k is computed once per k by radial Gauss-Jacobi quadrature and cached.
inline double equilibrium_weight(double x, double y, double k) {
    const double r2 = x * x + y * y;
    if (r2 >= 1.0) throw std::domain_error("equilibrium_weight: |R| must be < 1");
    if (!(k > 0.0)) throw std::domain_error("equilibrium_weight: k must be > 0");

    static std::mutex mtx;
    static std::unordered_map<double, double> cache;
    double z;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(k);
        if (it != cache.end()) {
            z = it->second;
        } else {
            // Z = 2*pi * 2^-(k+2) * int (1-s)^k ds  after s = 2r^2 - 1
            auto rule = gauss_jacobi(32, k, 0.0);
            z = 2.0 * pi * std::pow(2.0, -(k + 2.0)) * rule.weights.sum();
            cache.emplace(k, z);
        }
    }
    return std::pow(1.0 - r2, k) / z;
}

/// Nodal function on the disk quadrature grid.
struct ConfigFunction {
    Eigen::VectorXd values;
    bool mean_zero = false;
};

namespace detail {

/// Radial leading power for the angular wavenumber m. Smooth disk functions of
/// mode m vanish like r^min(|m|,2) at the pole up to even factors; using the
/// parity-matched power keeps the mode-m radial space exact for smooth data
/// while the 1/r^2 angular stiffness stays integrable.
inline int radial_power(int m) {
    if (m == 0) return 0;
    return (m % 2 == 1) ? 1 : 2;
}

struct ModeBlock {
    int m = 0;
    int a = 0;                   // radial leading power
    Eigen::MatrixXd deriv;       // nodal radial derivative of the mode-m interpolant
    Eigen::VectorXd eigenvalues; // ascending
    Eigen::MatrixXd eigvecs;     // radial nodal eigenvectors, wr-orthonormal columns
    Eigen::MatrixXd op;          // radial block of L: eigvecs * diag(lam) * eigvecs^T * diag(wr)
};

} // namespace detail

/// Quadrature grid, gradient/differentiation matrices and the eigenstructure of
/// the weighted Fokker-Planck operator L g = -(1/psi) div_R(psi grad_R g).
///
/// Node layout: index = ir * n_theta + jt with radial Gauss-Jacobi(k,0) nodes in
/// s = 2r^2-1 and equispaced angles. `weights` integrate against psi dR and sum
/// to 1. L is assembled weakly per angular mode, so it is symmetric positive
/// semidefinite in the weighted inner product with kernel exactly the constants.
///
/// Gradient collocation lives on the half-staggered angular grid: at the plain
/// nodes the Nyquist sine vanishes identically and the highest angular mode
/// would lose its stiffness, leaving a spurious near-kernel direction. The
/// staggered samples share the same quadrature weights, so every weighted-form
/// identity is unchanged.
struct DiskBasis {
    double k = 1.0;
    int n_r = 0;
    int n_theta = 0;

    Eigen::VectorXd r_nodes;     // size n_r, ascending in (0,1)
    Eigen::VectorXd theta_nodes; // size n_theta
    Eigen::VectorXd node_r, node_theta, node_x, node_y; // size N, per node
    Eigen::VectorXd stag_x, stag_y; // gradient collocation points (staggered angles)
    Eigen::VectorXd weights;  // size N, quadrature for int_B f psi dR
    Eigen::VectorXd wr;       // size n_r, radial quadrature for the unit-mass measure

    Eigen::MatrixXd grad_x, grad_y; // nodal gradient of the interpolant
    Eigen::MatrixXd dtheta;         // angular derivative (exactly W-antisymmetric)
    Eigen::MatrixXd L;              // the operator, W^-1-symmetrized spectral form
    Eigen::MatrixXd stiffness;      // grad_x^T W grad_x + grad_y^T W grad_y

    Eigen::VectorXd eigenvalues;  // ascending, size N
    Eigen::MatrixXd eigenvectors; // columns, W-orthonormal, canonical order/sign
    Eigen::MatrixXd eig_adjoint;  // eigenvectors^T * diag(weights)
    Eigen::MatrixXd ang_cos, ang_sin; // nodal trig tables, n_theta x (M+1)

    Eigen::Matrix<double, 2, 2> stress_identity; // stress of the constant 1
    Eigen::MatrixXd stress_rows; // 4 x N; row (2i+j) gives tau_ij(g) = row . g

    std::vector<detail::ModeBlock> modes;

    int size() const { return n_r * n_theta; }

    double mean(const Eigen::VectorXd& g) const { return weights.dot(g); }

    /// Weighted inner product <f, g> = int_B f g psi dR under the basis quadrature.
    double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
        return f.cwiseProduct(weights).dot(g);
    }

    double norm(const Eigen::VectorXd& g) const { return std::sqrt(inner(g, g)); }

    /// || grad_R g || in the weighted norm.
    double grad_norm(const Eigen::VectorXd& g) const {
        Eigen::VectorXd gx = grad_x * g, gy = grad_y * g;
        return std::sqrt(inner(gx, gx) + inner(gy, gy));
    }

    /// Lp norm int_B psi |g|^p under the basis quadrature.
    double lp_norm(const Eigen::VectorXd& g, double p) const {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < g.size(); ++i)
            acc += weights(i) * std::pow(std::abs(g(i)), p);
        return std::pow(acc, 1.0 / p);
    }

    Eigen::VectorXd project_mean_zero(const Eigen::VectorXd& g) const {
        return g - Eigen::VectorXd::Constant(g.size(), mean(g));
    }

    /// e^{-t L} as a dense matrix (exact on the discrete eigenstructure).
    Eigen::MatrixXd heat(double t) const {
        Eigen::VectorXd f(eigenvalues.size());
        for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = std::exp(-t * eigenvalues(i));
        return eigenvectors * f.asDiagonal() * eig_adjoint;
    }

    /// L g applied mode-by-mode; keeps the constant kernel exact and avoids the
    /// roundoff coupling of the dense matrix to the stiff high-mode blocks.
    Eigen::VectorXd apply_operator(const Eigen::VectorXd& g) const {
        const int M = n_theta / 2;
        Eigen::VectorXd gp = project_mean_zero(g);
        Eigen::MatrixXd acoef = Eigen::MatrixXd::Zero(n_r, M + 1);
        Eigen::MatrixXd bcoef = Eigen::MatrixXd::Zero(n_r, M + 1);
        for (int i = 0; i < n_r; ++i) {
            for (int j = 0; j < n_theta; ++j) {
                const double v = gp(i * n_theta + j);
                for (int m = 0; m <= M; ++m) {
                    acoef(i, m) += v * ang_cos(j, m);
                    bcoef(i, m) += v * ang_sin(j, m);
                }
            }
        }
        acoef.col(0) /= n_theta;
        acoef.col(M) /= n_theta;
        for (int m = 1; m < M; ++m) {
            acoef.col(m) *= 2.0 / n_theta;
            bcoef.col(m) *= 2.0 / n_theta;
        }
        Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
        for (int m = 0; m <= M; ++m) {
            Eigen::VectorXd la = modes[static_cast<std::size_t>(m)].op * acoef.col(m);
            Eigen::VectorXd lb = (m > 0 && m < M)
                ? Eigen::VectorXd(modes[static_cast<std::size_t>(m)].op * bcoef.col(m))
                : Eigen::VectorXd::Zero(n_r);
            for (int i = 0; i < n_r; ++i)
                for (int j = 0; j < n_theta; ++j)
                    out(i * n_theta + j) += la(i) * ang_cos(j, m) + lb(i) * ang_sin(j, m);
        }
        return project_mean_zero(out);
    }
};

namespace detail {

/// Angular analysis tables for the equispaced grid (naive DFT; n_theta is small).
struct AngularTransform {
    int n = 0;
    int M = 0; // Nyquist index n/2
    Eigen::MatrixXd cos_t, sin_t; // n x (M+1): trig values at nodes

    explicit AngularTransform(int n_theta) : n(n_theta), M(n_theta / 2) {
        cos_t.resize(n, M + 1);
        sin_t.resize(n, M + 1);
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * pi * j / n;
            for (int m = 0; m <= M; ++m) {
                cos_t(j, m) = std::cos(m * th);
                sin_t(j, m) = std::sin(m * th);
            }
        }
    }

    /// ring values -> coefficients a_m (m=0..M), b_m (m=1..M-1)
    void analyze(const double* ring, Eigen::VectorXd& a, Eigen::VectorXd& b) const {
        a.setZero(M + 1);
        b.setZero(M + 1);
        for (int j = 0; j < n; ++j) {
            const double v = ring[j];
            for (int m = 0; m <= M; ++m) {
                a(m) += v * cos_t(j, m);
                b(m) += v * sin_t(j, m);
            }
        }
        a(0) /= n;
        a(M) /= n;
        for (int m = 1; m < M; ++m) {
            a(m) *= 2.0 / n;
            b(m) *= 2.0 / n;
        }
        b(0) = b(M) = 0.0;
    }
};

} // namespace detail

/// Builds the disk basis: nodes, weights, gradient matrices, the operator and
/// its eigen-decomposition (sorted ascending, canonical cos/sin ordering and
/// sign so results are reproducible across resolutions).
inline DiskBasis build_basis(double k, int n_r, int n_theta) {
    if (n_r < 4) throw std::invalid_argument("build_basis: n_r must be >= 4");
    if (n_theta < 4 || n_theta % 2 != 0)
        throw std::invalid_argument("build_basis: n_theta must be >= 4 and even");
    if (!(k >= 0.25))
        throw std::invalid_argument(
            "build_basis: k below 0.25 makes the weighted quadrature ill-conditioned");

    DiskBasis basis;
    basis.k = k;
    basis.n_r = n_r;
    basis.n_theta = n_theta;
    const int N = n_r * n_theta;
    const int M = n_theta / 2;

    auto rule = gauss_jacobi(n_r, k, 0.0);
    const double mu0 = jacobi_mu0(k, 0.0);

    basis.r_nodes.resize(n_r);
    basis.wr.resize(n_r);
    for (int i = 0; i < n_r; ++i) {
        basis.r_nodes(i) = std::sqrt(0.5 * (1.0 + rule.nodes(i)));
        basis.wr(i) = rule.weights(i) / mu0; // unit total radial mass
    }
    basis.theta_nodes.resize(n_theta);
    for (int j = 0; j < n_theta; ++j) basis.theta_nodes(j) = 2.0 * pi * j / n_theta;

    basis.node_r.resize(N);
    basis.node_theta.resize(N);
    basis.node_x.resize(N);
    basis.node_y.resize(N);
    basis.weights.resize(N);
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            const int idx = i * n_theta + j;
            const double r = basis.r_nodes(i), th = basis.theta_nodes(j);
            basis.node_r(idx) = r;
            basis.node_theta(idx) = th;
            basis.node_x(idx) = r * std::cos(th);
            basis.node_y(idx) = r * std::sin(th);
            basis.weights(idx) = basis.wr(i) / n_theta;
        }
    }

    // Per-mode radial machinery: Vandermonde of r^a * P_j^{(k,a)}(2r^2-1) and its
    // derivative give the nodal radial differentiation of the mode interpolant.
    detail::AngularTransform ang(n_theta);
    basis.modes.resize(M + 1);
    for (int m = 0; m <= M; ++m) {
        auto& blk = basis.modes[m];
        blk.m = m;
        blk.a = detail::radial_power(m);
        const double a = blk.a;

        Eigen::MatrixXd V(n_r, n_r), Vd(n_r, n_r);
        for (int i = 0; i < n_r; ++i) {
            const double r = basis.r_nodes(i);
            const double s = 2.0 * r * r - 1.0;
            auto vals = jacobi_values(n_r - 1, k, a, s);
            auto ders = jacobi_derivs(n_r - 1, k, a, s);
            const double ra = std::pow(r, a);
            const double ra1 = (blk.a == 0) ? 0.0 : a * std::pow(r, a - 1.0);
            for (int j = 0; j < n_r; ++j) {
                const double nrm = 1.0 / std::sqrt(jacobi_norm_sq(j, k, a));
                V(i, j) = ra * vals[static_cast<std::size_t>(j)] * nrm;
                Vd(i, j) = (ra1 * vals[static_cast<std::size_t>(j)] +
                            ra * 4.0 * r * ders[static_cast<std::size_t>(j)]) * nrm;
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(V);
        blk.deriv = Vd * lu.inverse();

        // Weak form per mode from the staggered gradient samples. For m = M the
        // radial part drops (cos(M theta) vanishes on the staggered grid) and
        // only the angular stiffness remains; for m < M both pieces survive.
        Eigen::MatrixXd S;
        if (m == M) {
            S = Eigen::MatrixXd::Zero(n_r, n_r);
        } else {
            S = blk.deriv.transpose() * basis.wr.asDiagonal() * blk.deriv;
        }
        if (m > 0) {
            for (int i = 0; i < n_r; ++i)
                S(i, i) += static_cast<double>(m) * m * basis.wr(i) /
                           (basis.r_nodes(i) * basis.r_nodes(i));
        }
        S = 0.5 * (S + S.transpose()).eval();

        Eigen::VectorXd wr_isqrt(n_r);
        for (int i = 0; i < n_r; ++i) wr_isqrt(i) = 1.0 / std::sqrt(basis.wr(i));
        Eigen::MatrixXd B = wr_isqrt.asDiagonal() * S * wr_isqrt.asDiagonal();
        B = 0.5 * (B + B.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
        if (es.info() != Eigen::Success)
            throw numerical_error("build_basis: radial eigen-decomposition failed for mode m=" +
                                  std::to_string(m) + " (matrix norm " +
                                  std::to_string(B.norm()) + ")");
        blk.eigenvalues = es.eigenvalues();
        blk.eigvecs = wr_isqrt.asDiagonal() * es.eigenvectors();
        // canonical sign: outermost radial value positive
        for (int j = 0; j < n_r; ++j)
            if (blk.eigvecs(n_r - 1, j) < 0.0) blk.eigvecs.col(j) = -blk.eigvecs.col(j);
        blk.op = blk.eigvecs * blk.eigenvalues.asDiagonal() * blk.eigvecs.transpose() *
                 basis.wr.asDiagonal();
    }

    // Staggered-angle coordinates and trig tables for the gradient collocation.
    Eigen::MatrixXd cos_s(n_theta, M + 1), sin_s(n_theta, M + 1);
    basis.stag_x.resize(N);
    basis.stag_y.resize(N);
    for (int j = 0; j < n_theta; ++j) {
        const double th = 2.0 * pi * (j + 0.5) / n_theta;
        for (int m = 0; m <= M; ++m) {
            cos_s(j, m) = std::cos(m * th);
            sin_s(j, m) = std::sin(m * th);
        }
        for (int i = 0; i < n_r; ++i) {
            basis.stag_x(i * n_theta + j) = basis.r_nodes(i) * cos_s(j, 1);
            basis.stag_y(i * n_theta + j) = basis.r_nodes(i) * sin_s(j, 1);
        }
    }

    // Gradient matrices by mode-wise application to the nodal identity.
    basis.grad_x.resize(N, N);
    basis.grad_y.resize(N, N);
    {
        Eigen::VectorXd g(N), dr(N), dth_r(N);
        Eigen::VectorXd am, bm;
        Eigen::MatrixXd acoef(n_r, M + 1), bcoef(n_r, M + 1);
        for (int col = 0; col < N; ++col) {
            g.setZero();
            g(col) = 1.0;
            for (int i = 0; i < n_r; ++i) {
                ang.analyze(g.data() + i * n_theta, am, bm);
                acoef.row(i) = am.transpose();
                bcoef.row(i) = bm.transpose();
            }
            dr.setZero();
            dth_r.setZero();
            for (int m = 0; m <= M; ++m) {
                const auto& blk = basis.modes[m];
                Eigen::VectorXd da = blk.deriv * acoef.col(m);
                Eigen::VectorXd db = blk.deriv * bcoef.col(m);
                for (int i = 0; i < n_r; ++i) {
                    for (int j = 0; j < n_theta; ++j) {
                        const int idx = i * n_theta + j;
                        dr(idx) += da(i) * cos_s(j, m) + db(i) * sin_s(j, m);
                        if (m > 0)
                            dth_r(idx) += m / basis.r_nodes(i) *
                                          (bcoef(i, m) * cos_s(j, m) -
                                           acoef(i, m) * sin_s(j, m));
                    }
                }
            }
            for (int idx = 0; idx < N; ++idx) {
                const double c = cos_s(idx % n_theta, 1);
                const double s = sin_s(idx % n_theta, 1);
                basis.grad_x(idx, col) = c * dr(idx) - s * dth_r(idx);
                basis.grad_y(idx, col) = s * dr(idx) + c * dth_r(idx);
            }
        }
    }

    basis.stiffness = basis.grad_x.transpose() * basis.weights.asDiagonal() * basis.grad_x +
                      basis.grad_y.transpose() * basis.weights.asDiagonal() * basis.grad_y;
    basis.stiffness = 0.5 * (basis.stiffness + basis.stiffness.transpose()).eval();

    // Angular derivative: per-ring spectral differentiation matrix for even n.
    basis.dtheta = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < n_r; ++i) {
        for (int j1 = 0; j1 < n_theta; ++j1) {
            for (int j2 = 0; j2 < n_theta; ++j2) {
                if (j1 == j2) continue;
                const double dth = pi * (j1 - j2) / n_theta;
                basis.dtheta(i * n_theta + j1, i * n_theta + j2) =
                    0.5 * ((j1 - j2) % 2 == 0 ? 1.0 : -1.0) / std::tan(dth);
            }
        }
    }

    // Global eigenstructure assembled from the mode blocks; deterministic order.
    struct Entry {
        double lam;
        int m, radial, trig; // trig: 0 = cos, 1 = sin
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(N));
    for (int m = 0; m <= M; ++m) {
        const int copies = (m == 0 || m == M) ? 1 : 2;
        for (int j = 0; j < n_r; ++j)
            for (int c = 0; c < copies; ++c)
                entries.push_back({basis.modes[m].eigenvalues(j), m, j, c});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& p, const Entry& q) {
        if (p.lam != q.lam) return p.lam < q.lam;
        if (p.m != q.m) return p.m < q.m;
        if (p.trig != q.trig) return p.trig < q.trig;
        return p.radial < q.radial;
    });

    basis.eigenvalues.resize(N);
    basis.eigenvectors.resize(N, N);
    for (int col = 0; col < N; ++col) {
        const auto& e = entries[static_cast<std::size_t>(col)];
        basis.eigenvalues(col) = e.lam;
        const auto& blk = basis.modes[e.m];
        const double scale = (e.m == 0 || e.m == M) ? 1.0 : std::sqrt(2.0);
        for (int i = 0; i < n_r; ++i) {
            const double rad = blk.eigvecs(i, e.radial) * scale;
            for (int j = 0; j < n_theta; ++j) {
                const double trig = (e.trig == 0) ? ang.cos_t(j, e.m) : ang.sin_t(j, e.m);
                basis.eigenvectors(i * n_theta + j, col) = rad * trig;
            }
        }
    }
    basis.eig_adjoint = basis.eigenvectors.transpose() * basis.weights.asDiagonal();
    basis.ang_cos = ang.cos_t;
    basis.ang_sin = ang.sin_t;

    // Dense operator matrix = the modal application on the nodal identity.
    basis.L.resize(N, N);
    {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(N);
        for (int col = 0; col < N; ++col) {
            e(col) = 1.0;
            basis.L.col(col) = basis.apply_operator(e);
            e(col) = 0.0;
        }
    }

    // Stress rows via integration by parts: tau_ij(g) = int (d_ij g + R_i d_j g) psi dR.
    // The gradient factors are quadratured at the staggered collocation points.
    basis.stress_rows.resize(4, N);
    Eigen::RowVectorXd wrow = basis.weights.transpose();
    const Eigen::MatrixXd* grads[2] = {&basis.grad_x, &basis.grad_y};
    const Eigen::VectorXd* coords[2] = {&basis.stag_x, &basis.stag_y};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Eigen::RowVectorXd row =
                (wrow.cwiseProduct(coords[a]->transpose())) * (*grads[b]);
            if (a == b) row += wrow;
            basis.stress_rows.row(2 * a + b) = row;
        }
    }
    basis.stress_identity(0, 0) = basis.stress_rows.row(0).sum();
    basis.stress_identity(0, 1) = basis.stress_rows.row(1).sum();
    basis.stress_identity(1, 0) = basis.stress_rows.row(2).sum();
    basis.stress_identity(1, 1) = basis.stress_rows.row(3).sum();

    return basis;
}

/// L g at the basis nodes.
inline Eigen::VectorXd apply_L(const DiskBasis& basis, const Eigen::VectorXd& g) {
    if (g.size() != basis.size())
        throw std::invalid_argument("apply_L: nodal vector size mismatch");
    return basis.apply_operator(g);
}

/// Co-rotation drag term (1/psi) div_R(sigma(u) R g psi) with
/// sigma(u) = (grad_u - grad_u^T)/2. In 2-D this reduces to -omega * d_theta g,
/// which is exactly energy-neutral and mean-preserving under the basis quadrature.
inline Eigen::VectorXd apply_drag(const DiskBasis& basis, const Eigen::VectorXd& g,
                                  const Eigen::MatrixXd& grad_u) {
    if (grad_u.rows() != grad_u.cols())
        throw std::invalid_argument("apply_drag: grad_u must be square");
    if (grad_u.rows() != 2)
        throw std::invalid_argument("apply_drag: configuration space is 2-D");
    if (g.size() != basis.size())
        throw std::invalid_argument("apply_drag: nodal vector size mismatch");
    const double omega = 0.5 * (grad_u(0, 1) - grad_u(1, 0));
    if (omega == 0.0) return Eigen::VectorXd::Zero(g.size());
    return -omega * (basis.dtheta * g);
}

/// Kramers stress tau_ij(g) = int R_i (d_j U) g psi dR, evaluated through the
/// integrated-by-parts form so that tau(const) = const * Id holds exactly.
inline Eigen::Matrix2d stress(const DiskBasis& basis, const Eigen::VectorXd& g) {
    if (g.size() != basis.size())
        throw std::invalid_argument("stress: nodal vector size mismatch");
    Eigen::Matrix2d tau;
    tau(0, 0) = basis.stress_rows.row(0).dot(g);
    tau(0, 1) = basis.stress_rows.row(1).dot(g);
    tau(1, 0) = basis.stress_rows.row(2).dot(g);
    tau(1, 1) = basis.stress_rows.row(3).dot(g);
    return tau;
}

/// Enforces the ConfigFunction invariant: the nodal vector matches the grid
/// and, when flagged mean-zero, its weighted mean vanishes under the quadrature.
inline void validate(const DiskBasis& basis, const ConfigFunction& f, double tol = 1e-12) {
    if (f.values.size() != basis.size())
        throw std::invalid_argument("ConfigFunction: nodal size does not match the basis");
    if (f.mean_zero && std::abs(basis.mean(f.values)) > tol)
        throw std::invalid_argument("ConfigFunction: mean-zero flag set but the weighted "
                                    "mean is " + std::to_string(basis.mean(f.values)));
}

/// Best discrete constant C with ||g|| <= C ||grad_R g|| on the mean-zero
/// subspace: 1/sqrt(lambda_1) with lambda_1 the first nonzero eigenvalue of L.
inline double poincare_constant(const DiskBasis& basis) {
    const double lam1 = basis.eigenvalues(1);
    if (!(lam1 > 0.0))
        throw numerical_error("poincare_constant: first nonzero eigenvalue is not positive "
                              "(lambda_1 = " + std::to_string(lam1) + ")");
    return 1.0 / std::sqrt(lam1);
}

} // namespace fenelab::disk
