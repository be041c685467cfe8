#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "fenelab/disk.hpp"
#include "fenelab/errors.hpp"
#include "fenelab/flow.hpp"
#include "fenelab/parallel.hpp"

namespace fenelab::coupled {

using flow::Cplx;

/// Full perturbation state: macroscopic Fourier fields, the configuration
/// density g as a (disk node) x (spatial node) matrix, and the cached stress.
struct CoupledState {
    flow::FlowState flow_state;
    Eigen::MatrixXd g_field;
    flow::StressField tau_field;
    double time = 0.0;

    static CoupledState zero(const flow::FlowGrid& grid, const disk::DiskBasis& basis) {
        CoupledState s;
        s.flow_state = flow::FlowState::zero(grid);
        s.g_field = Eigen::MatrixXd::Zero(basis.size(), grid.size());
        s.tau_field = flow::StressField::zero(grid.size());
        return s;
    }
};

/// Kramers stress at every spatial node, tau_ij(x) = stress_row_ij . g(., x).
inline flow::StressField stress_field(const disk::DiskBasis& basis,
                                      const Eigen::MatrixXd& g_field) {
    flow::StressField out;
    Eigen::MatrixXd rows = basis.stress_rows * g_field; // 4 x n_spatial
    for (int c = 0; c < 4; ++c) out.tau[c] = rows.row(c).transpose();
    return out;
}

/// Largest |disk mean of g| over the spatial nodes (conserved-zero invariant).
inline double max_disk_mean(const disk::DiskBasis& basis, const Eigen::MatrixXd& g_field) {
    Eigen::RowVectorXd means = basis.weights.transpose() * g_field;
    return means.cwiseAbs().maxCoeff();
}

inline double min_one_plus_g(const Eigen::MatrixXd& g_field) {
    return 1.0 + g_field.minCoeff();
}

namespace detail {

/// -u . grad_x g per disk node, derivatives spectral, products dealiased.
inline Eigen::MatrixXd transport_rate(const flow::FlowGrid& grid,
                                      const flow::PhysicalFields& coeff,
                                      const Eigen::MatrixXd& g_field, int workers) {
    Eigen::MatrixXd rate(g_field.rows(), g_field.cols());
    parallel_for(static_cast<std::size_t>(g_field.rows()), workers, [&](std::size_t r) {
        Eigen::VectorXcd phys = g_field.row(static_cast<Eigen::Index>(r))
                                    .transpose()
                                    .cast<Cplx>();
        Eigen::VectorXcd hat = flow::detail::to_spectral(grid, phys);
        Eigen::VectorXcd gx = flow::detail::to_physical(grid, flow::detail::derivative(grid, hat, 0));
        Eigen::VectorXcd gy = flow::detail::to_physical(grid, flow::detail::derivative(grid, hat, 1));
        Eigen::VectorXcd prod =
            -(coeff.u[0].cast<Cplx>().cwiseProduct(gx) + coeff.u[1].cast<Cplx>().cwiseProduct(gy));
        Eigen::VectorXcd prod_hat = flow::detail::to_spectral(grid, prod);
        flow::detail::dealias(grid, prod_hat);
        rate.row(static_cast<Eigen::Index>(r)) =
            flow::detail::to_physical(grid, prod_hat).real().transpose();
    });
    return rate;
}

/// Co-rotation drag rate +omega(x) d_theta g (the negative of the drag term).
inline Eigen::MatrixXd drag_rate(const disk::DiskBasis& basis,
                                 const flow::PhysicalFields& coeff,
                                 const Eigen::MatrixXd& g_field) {
    Eigen::VectorXd omega = 0.5 * (coeff.grad_u[0][1] - coeff.grad_u[1][0]);
    Eigen::MatrixXd dth = basis.dtheta * g_field;
    return dth * omega.asDiagonal();
}

/// Exact integration of the drag over a substep: g_t = omega d_theta g is a
/// rigid rotation of the configuration angle, applied per spatial node as a
/// per-mode phase shift. Exactly norm-preserving, so the drag contributes zero
/// energy in discrete time as well.
inline void rotate_g(const disk::DiskBasis& basis, Eigen::MatrixXd& g_field,
                     const Eigen::VectorXd& alpha, int workers) {
    const int n_theta = basis.n_theta;
    const int M = n_theta / 2;
    const Eigen::Index n_sp = g_field.cols();
    parallel_for(static_cast<std::size_t>(n_sp), workers, [&](std::size_t xcol) {
        const auto x = static_cast<Eigen::Index>(xcol);
        const double a = alpha(x);
        if (a == 0.0) return;
        Eigen::VectorXd am(M + 1), bm(M + 1), ring(n_theta);
        for (int i = 0; i < basis.n_r; ++i) {
            am.setZero();
            bm.setZero();
            for (int j = 0; j < n_theta; ++j) {
                const double v = g_field(i * n_theta + j, x);
                for (int m = 0; m <= M; ++m) {
                    am(m) += v * basis.ang_cos(j, m);
                    bm(m) += v * basis.ang_sin(j, m);
                }
            }
            am(0) /= n_theta;
            am(M) /= n_theta;
            for (int m = 1; m < M; ++m) {
                am(m) *= 2.0 / n_theta;
                bm(m) *= 2.0 / n_theta;
            }
            ring.setConstant(am(0));
            for (int m = 1; m <= M; ++m) {
                const double c = std::cos(m * a), s = std::sin(m * a);
                const double ar = am(m) * c + bm(m) * s;
                const double br = (m == M) ? 0.0 : bm(m) * c - am(m) * s;
                for (int j = 0; j < n_theta; ++j)
                    ring(j) += ar * basis.ang_cos(j, m) + br * basis.ang_sin(j, m);
            }
            for (int j = 0; j < n_theta; ++j) g_field(i * n_theta + j, x) = ring(j);
        }
    });
}

} // namespace detail

/// Time derivative of g: -L g - u . grad_x g - drag(g). The output has zero
/// disk mean at every spatial node.
inline Eigen::MatrixXd g_rhs(const flow::FlowGrid& grid, const disk::DiskBasis& basis,
                             const CoupledState& s, int workers = 1) {
    flow::PhysicalFields coeff = flow::physical_fields(s.flow_state);
    Eigen::MatrixXd rate = detail::transport_rate(grid, coeff, s.g_field, workers);
    rate += detail::drag_rate(basis, coeff, s.g_field);
    Eigen::MatrixXd lg(s.g_field.rows(), s.g_field.cols());
    for (Eigen::Index c = 0; c < s.g_field.cols(); ++c)
        lg.col(c) = basis.apply_operator(s.g_field.col(c));
    return rate - lg;
}

/// Precomputed pieces shared by every step of a run.
struct Stepper {
    flow::FlowGrid grid;
    const disk::DiskBasis* basis = nullptr;
    ModelParams params;
    double dt = 0.0;
    int workers = 1;
    Eigen::MatrixXd heat_half; // e^{-(dt/2) L}

    Stepper(const flow::FlowGrid& g, const disk::DiskBasis& b, const ModelParams& p,
            double dt_, int workers_ = 1)
        : grid(g), basis(&b), params(p), dt(dt_), workers(workers_),
          heat_half(b.heat(0.5 * dt_)) {
        if (!(dt_ > 0.0)) throw std::invalid_argument("Stepper: dt must be > 0");
    }

    /// Half-step of the configuration equation: explicit transport with frozen
    /// coefficients, exact co-rotation as an angular rotation, then the exact
    /// Fokker-Planck propagator.
    void g_half_step(CoupledState& s, const flow::PhysicalFields& coeff) const {
        s.g_field += (0.5 * dt) * detail::transport_rate(grid, coeff, s.g_field, workers);
        Eigen::VectorXd alpha = (0.25 * dt) * (coeff.grad_u[0][1] - coeff.grad_u[1][0]);
        detail::rotate_g(*basis, s.g_field, alpha, workers);
        s.g_field = (heat_half * s.g_field).eval();
    }

    /// One Strang step g/flow/g. `coeff_begin` supplies the frozen coefficient
    /// fields at the step start; `coeff_end`, when present, the fields at the
    /// step end (the lagged mode). When absent the updated flow state is used,
    /// which makes the lagged fixed point coincide with this direct scheme.
    CoupledState step(const CoupledState& s, const flow::PhysicalFields& coeff_begin,
                      const flow::PhysicalFields* coeff_end = nullptr) const {
        CoupledState next = s;
        g_half_step(next, coeff_begin);

        next.tau_field = stress_field(*basis, next.g_field); // frozen within the substep
        next.flow_state =
            flow::imex_step_with_coeffs(next.flow_state, coeff_begin, next.tau_field,
                                        params, dt);

        if (coeff_end) {
            g_half_step(next, *coeff_end);
        } else {
            flow::PhysicalFields own = flow::physical_fields(next.flow_state);
            g_half_step(next, own);
        }
        next.tau_field = stress_field(*basis, next.g_field);
        next.time = s.time + dt;
        return next;
    }

    CoupledState step(const CoupledState& s) const {
        flow::PhysicalFields own = flow::physical_fields(s.flow_state);
        return step(s, own, nullptr);
    }
};

/// Low-norm squared value ||rho||_L2^2 + ||u||_L2^2 + ||g||_{L2(L2)}^2 of the
/// difference of two states (the contraction metric of the local scheme).
inline double low_norm_sq_diff(const flow::FlowGrid& grid, const disk::DiskBasis& basis,
                               const CoupledState& a, const CoupledState& b) {
    const double vol = grid.box_length * grid.box_length;
    double acc = vol * (a.flow_state.rho_hat - b.flow_state.rho_hat).squaredNorm();
    acc += vol * (a.flow_state.u_hat[0] - b.flow_state.u_hat[0]).squaredNorm();
    acc += vol * (a.flow_state.u_hat[1] - b.flow_state.u_hat[1]).squaredNorm();
    Eigen::MatrixXd dg = a.g_field - b.g_field;
    const double cell = vol / grid.size();
    acc += cell * (basis.weights.transpose() * dg.cwiseProduct(dg)).sum();
    return acc;
}

struct PicardResult {
    std::vector<double> deltas;       ///< sup-in-time low-norm distance of consecutive iterates
    std::vector<CoupledState> limit;  ///< trajectory of the last iterate at step resolution
};

/// Iterates the lagged linearized systems over [0, T]: coefficients are frozen
/// from the previous iterate's trajectory while the new iterate is integrated
/// with the same Strang/IMEX machinery. Starts from the zero trajectory.
inline PicardResult picard_iterate(const flow::FlowGrid& grid, const disk::DiskBasis& basis,
                                   const ModelParams& params, const CoupledState& initial,
                                   double T, int n_iters, double dt, int workers = 1) {
    if (!(T > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("picard_iterate: T and dt must be > 0");
    const int n_steps = static_cast<int>(std::llround(T / dt));
    if (n_steps < 1) throw std::invalid_argument("picard_iterate: T/dt below one step");

    Stepper stepper(grid, basis, params, dt, workers);

    // iterate 0: the zero trajectory
    std::vector<CoupledState> prev(static_cast<std::size_t>(n_steps) + 1,
                                   CoupledState::zero(grid, basis));
    std::vector<flow::PhysicalFields> prev_snap(prev.size());
    for (std::size_t m = 0; m < prev.size(); ++m)
        prev_snap[m] = flow::physical_fields(prev[m].flow_state);

    PicardResult result;
    int rising = 0;
    for (int iter = 1; iter <= n_iters; ++iter) {
        std::vector<CoupledState> cur;
        cur.reserve(prev.size());
        cur.push_back(initial);
        for (int m = 0; m < n_steps; ++m)
            cur.push_back(stepper.step(cur.back(), prev_snap[static_cast<std::size_t>(m)],
                                       &prev_snap[static_cast<std::size_t>(m) + 1]));

        double worst = 0.0;
        for (std::size_t m = 0; m < cur.size(); ++m)
            worst = std::max(worst, low_norm_sq_diff(grid, basis, cur[m], prev[m]));
        result.deltas.push_back(std::sqrt(worst));

        const std::size_t nd = result.deltas.size();
        if (nd >= 2 && result.deltas[nd - 1] > result.deltas[nd - 2]) {
            if (++rising >= 3)
                throw contraction_failure(
                    "picard_iterate: iterate distances grew three times in a row");
        } else {
            rising = 0;
        }

        prev = std::move(cur);
        for (std::size_t m = 0; m < prev.size(); ++m)
            prev_snap[m] = flow::physical_fields(prev[m].flow_state);
    }
    result.limit = std::move(prev);
    return result;
}

} // namespace fenelab::coupled
