#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "fenelab/errors.hpp"
#include "fenelab/fft.hpp"
#include "fenelab/params.hpp"
#include "fenelab/spectral.hpp"

namespace fenelab::flow {

using Cplx = std::complex<double>;

/// Periodic box [0, L)^2 with n modes per dimension (n a power of two).
/// Mode index m in [0, n) maps to the signed wavenumber m or m-n; the Nyquist
/// column n/2 carries no state (initial data is band-limited and products are
/// dealiased below it).
struct FlowGrid {
    int n = 32;
    double box_length = 2.0 * 3.14159265358979323846;

    int size() const { return n * n; }
    int index(int ix, int iy) const { return ix * n + iy; }

    int signed_mode(int idx) const { return (idx <= n / 2) ? idx : idx - n; }

    double kappa(int idx) const {
        const int m = signed_mode(idx);
        if (idx == n / 2) return 0.0; // no odd-derivative symbol at Nyquist
        return 2.0 * 3.14159265358979323846 * m / box_length;
    }

    bool dealias_keep(int ix, int iy) const {
        const int cut = n / 3;
        return std::abs(signed_mode(ix)) <= cut && std::abs(signed_mode(iy)) <= cut;
    }

    double dx() const { return box_length / n; }
};

/// Fourier-coefficient state of the macroscopic fields (rho, u).
struct FlowState {
    FlowGrid grid;
    Eigen::VectorXcd rho_hat;
    std::array<Eigen::VectorXcd, 2> u_hat;
    double time = 0.0;

    static FlowState zero(const FlowGrid& g) {
        FlowState s;
        s.grid = g;
        s.rho_hat = Eigen::VectorXcd::Zero(g.size());
        s.u_hat[0] = Eigen::VectorXcd::Zero(g.size());
        s.u_hat[1] = Eigen::VectorXcd::Zero(g.size());
        return s;
    }
};

/// Pointwise gamma-law pressure coefficients h(rho) = P'(1+rho)/(1+rho) and
/// i(rho) = 1/(1+rho) on the collocation grid.
struct PressureCoeffs {
    Eigen::VectorXd h_of_rho;
    Eigen::VectorXd i_of_rho;
};

namespace detail {

inline Eigen::VectorXcd to_physical(const FlowGrid& g, const Eigen::VectorXcd& hat) {
    Eigen::VectorXcd work = hat;
    fft::transform2(work.data(), g.n, true);
    return work;
}

inline Eigen::VectorXcd to_spectral(const FlowGrid& g, const Eigen::VectorXcd& phys) {
    Eigen::VectorXcd work = phys;
    fft::transform2(work.data(), g.n, false);
    work /= static_cast<double>(g.size());
    return work;
}

inline Eigen::VectorXd real_part(const Eigen::VectorXcd& v) { return v.real(); }

inline Eigen::VectorXcd derivative(const FlowGrid& g, const Eigen::VectorXcd& hat, int dim) {
    Eigen::VectorXcd out(g.size());
    for (int ix = 0; ix < g.n; ++ix) {
        for (int iy = 0; iy < g.n; ++iy) {
            const double kap = (dim == 0) ? g.kappa(ix) : g.kappa(iy);
            out(g.index(ix, iy)) = Cplx(0.0, kap) * hat(g.index(ix, iy));
        }
    }
    return out;
}

inline void dealias(const FlowGrid& g, Eigen::VectorXcd& hat) {
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            if (!g.dealias_keep(ix, iy)) hat(g.index(ix, iy)) = Cplx(0.0, 0.0);
}

inline void hermitianize(const FlowGrid& g, Eigen::VectorXcd& hat) {
    for (int ix = 0; ix < g.n; ++ix) {
        for (int iy = 0; iy < g.n; ++iy) {
            const int jx = (g.n - ix) % g.n, jy = (g.n - iy) % g.n;
            const int a = g.index(ix, iy), b = g.index(jx, jy);
            if (a > b) continue;
            const Cplx mean = 0.5 * (hat(a) + std::conj(hat(b)));
            hat(a) = mean;
            hat(b) = std::conj(mean);
        }
    }
}

/// Spectral product of two physical fields with the 2/3-rule mask.
inline Eigen::VectorXcd product_spectral(const FlowGrid& g, const Eigen::VectorXcd& fa,
                                         const Eigen::VectorXcd& fb) {
    Eigen::VectorXcd prod = fa.cwiseProduct(fb);
    Eigen::VectorXcd hat = to_spectral(g, prod);
    dealias(g, hat);
    return hat;
}

} // namespace detail

inline PressureCoeffs pressure_coeffs(const Eigen::VectorXd& rho_phys, const ModelParams& p) {
    PressureCoeffs pc;
    pc.h_of_rho.resize(rho_phys.size());
    pc.i_of_rho.resize(rho_phys.size());
    for (Eigen::Index i = 0; i < rho_phys.size(); ++i) {
        const double denom = 1.0 + rho_phys(i);
        pc.h_of_rho(i) = p.a * p.gamma * std::pow(denom, p.gamma - 2.0);
        pc.i_of_rho(i) = 1.0 / denom;
    }
    return pc;
}

/// Physical-space views of a state used by the explicit terms and diagnostics.
struct PhysicalFields {
    Eigen::VectorXd rho;
    std::array<Eigen::VectorXd, 2> u;
    std::array<std::array<Eigen::VectorXd, 2>, 2> grad_u; // grad_u[i][j] = d_i u_j
};

inline PhysicalFields physical_fields(const FlowState& s) {
    PhysicalFields f;
    f.rho = detail::real_part(detail::to_physical(s.grid, s.rho_hat));
    for (int j = 0; j < 2; ++j)
        f.u[j] = detail::real_part(detail::to_physical(s.grid, s.u_hat[j]));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            f.grad_u[i][j] = detail::real_part(
                detail::to_physical(s.grid, detail::derivative(s.grid, s.u_hat[j], i)));
    return f;
}

/// Per-node Kramers stress over the box, row-major 2x2 entries.
struct StressField {
    std::array<Eigen::VectorXd, 4> tau; // tau[2i+j] = tau_ij(x)
    int size() const { return static_cast<int>(tau[0].size()); }

    static StressField zero(int n_nodes) {
        StressField s;
        for (auto& c : s.tau) c = Eigen::VectorXd::Zero(n_nodes);
        return s;
    }

    static StressField constant(int n_nodes, const Eigen::Matrix2d& m) {
        StressField s;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                s.tau[2 * i + j] = Eigen::VectorXd::Constant(n_nodes, m(i, j));
        return s;
    }
};

/// Spectral rates of the flow system split for IMEX use.
struct FlowRates {
    Eigen::VectorXcd rho;
    std::array<Eigen::VectorXcd, 2> u;
};

namespace detail {

/// Explicit right-hand side with separate coefficient fields (`coeff`) and
/// evolved fields (`self`). With coeff == self this is exactly the collected
/// nonlinearity F(U) + i(rho) div tau of the flow system; with lagged
/// coefficients it is the linearized form used by the fixed-point solver.
inline FlowRates explicit_terms(const FlowGrid& g, const ModelParams& p,
                                const PhysicalFields& coeff, const FlowState& self,
                                const StressField& tau_field) {
    FlowRates out;
    const auto& gg = g;

    // physical views of the evolved fields and their derivatives
    Eigen::VectorXcd drho_x = to_physical(gg, derivative(gg, self.rho_hat, 0));
    Eigen::VectorXcd drho_y = to_physical(gg, derivative(gg, self.rho_hat, 1));
    Eigen::VectorXcd divu_hat = derivative(gg, self.u_hat[0], 0) + derivative(gg, self.u_hat[1], 1);
    Eigen::VectorXcd divu_phys = to_physical(gg, divu_hat);

    Eigen::VectorXcd ux = coeff.u[0].cast<Cplx>();
    Eigen::VectorXcd uy = coeff.u[1].cast<Cplx>();

    // rho equation: -(u . grad rho) - rho div u, divergence form => zero mean
    out.rho = -product_spectral(gg, ux, drho_x) - product_spectral(gg, uy, drho_y) -
              product_spectral(gg, coeff.rho.cast<Cplx>(), divu_phys);
    out.rho(0) = Cplx(0.0, 0.0);

    PressureCoeffs pc = pressure_coeffs(coeff.rho, p);
    Eigen::VectorXcd i_minus_1 = (pc.i_of_rho.array() - 1.0).matrix().cast<Cplx>();
    Eigen::VectorXcd g_minus_h = (p.gamma_eff() - pc.h_of_rho.array()).matrix().cast<Cplx>();
    Eigen::VectorXcd i_full = pc.i_of_rho.cast<Cplx>();

    for (int j = 0; j < 2; ++j) {
        // -(u . grad u_j)
        Eigen::VectorXcd du_x = to_physical(gg, derivative(gg, self.u_hat[j], 0));
        Eigen::VectorXcd du_y = to_physical(gg, derivative(gg, self.u_hat[j], 1));
        Eigen::VectorXcd rate = -product_spectral(gg, ux, du_x) - product_spectral(gg, uy, du_y);

        // (i(rho) - 1) (div Sigma(u))_j with div Sigma(u) = mu Lap u + (mu+mu') grad div u
        Eigen::VectorXcd divsig(gg.size());
        for (int ix = 0; ix < gg.n; ++ix) {
            for (int iy = 0; iy < gg.n; ++iy) {
                const int id = gg.index(ix, iy);
                const double kx = gg.kappa(ix), ky = gg.kappa(iy);
                const double k2 = kx * kx + ky * ky;
                const double kj = (j == 0) ? kx : ky;
                divsig(id) = -p.mu * k2 * self.u_hat[j](id) +
                             Cplx(0.0, kj) * (p.mu + p.mu_prime) * divu_hat(id);
            }
        }
        rate += product_spectral(gg, i_minus_1, to_physical(gg, divsig));

        // (gamma - h(rho)) d_j rho
        rate += product_spectral(gg, g_minus_h, (j == 0) ? drho_x : drho_y);

        // i(rho) (div tau)_j
        Eigen::VectorXcd divtau_hat =
            derivative(gg, to_spectral(gg, tau_field.tau[0 + j].cast<Cplx>()), 0) +
            derivative(gg, to_spectral(gg, tau_field.tau[2 + j].cast<Cplx>()), 1);
        rate += product_spectral(gg, i_full, to_physical(gg, divtau_hat));

        out.u[j] = rate;
    }
    return out;
}

/// Linear rate A(xi) U per mode.
inline FlowRates linear_terms(const FlowGrid& g, const ModelParams& p, const FlowState& s) {
    FlowRates out;
    out.rho.resize(g.size());
    out.u[0].resize(g.size());
    out.u[1].resize(g.size());
    for (int ix = 0; ix < g.n; ++ix) {
        for (int iy = 0; iy < g.n; ++iy) {
            const int id = g.index(ix, iy);
            const double kx = g.kappa(ix), ky = g.kappa(iy);
            const double k2 = kx * kx + ky * ky;
            const Cplx mi(0.0, -1.0);
            const Cplx divu = -mi * (kx * s.u_hat[0](id) + ky * s.u_hat[1](id)); // i k . u
            out.rho(id) = -divu;
            for (int j = 0; j < 2; ++j) {
                const double kj = (j == 0) ? kx : ky;
                out.u[j](id) = mi * p.gamma_eff() * kj * s.rho_hat(id) -
                               p.mu * k2 * s.u_hat[j](id) -
                               (p.mu + p.mu_prime) * kj *
                                   (kx * s.u_hat[0](id) + ky * s.u_hat[1](id));
            }
        }
    }
    return out;
}

inline void check_nonvacuum(const FlowGrid& g, const Eigen::VectorXd& rho_phys, double time) {
    Eigen::Index worst = 0;
    const double mn = (1.0 + rho_phys.array()).minCoeff(&worst);
    if (mn <= 0.0) {
        std::ostringstream os;
        os << "nonvacuum violation: min(1+rho) = " << mn << " at node ("
           << worst / g.n << "," << worst % g.n << "), t = " << time
           << "; state dump: |rho|_max = " << rho_phys.cwiseAbs().maxCoeff();
        throw nonvacuum_error(os.str());
    }
}

} // namespace detail

/// Full spectral time derivative (linear part + collected nonlinearity), the
/// rates of the right-hand-side-collected form of the system.
inline FlowRates nonlinear_rhs(const FlowState& s, const StressField& tau_field,
                               const ModelParams& p) {
    PhysicalFields f = physical_fields(s);
    detail::check_nonvacuum(s.grid, f.rho, s.time);
    FlowRates lin = detail::linear_terms(s.grid, p, s);
    FlowRates nl = detail::explicit_terms(s.grid, p, f, s, tau_field);
    lin.rho += nl.rho;
    lin.u[0] += nl.u[0];
    lin.u[1] += nl.u[1];
    return lin;
}

/// Largest advective step the grid admits for the current velocity.
inline double admissible_dt(const FlowState& s, double cfl = 0.5) {
    PhysicalFields f = physical_fields(s);
    double umax = 0.0;
    for (Eigen::Index i = 0; i < f.u[0].size(); ++i)
        umax = std::max(umax, std::hypot(f.u[0](i), f.u[1](i)));
    if (umax == 0.0) return std::numeric_limits<double>::infinity();
    return cfl * s.grid.dx() / umax;
}

/// One IMEX step: the constant-coefficient core (div u, gamma grad rho,
/// div Sigma(u)) is treated implicitly through the per-mode matrix A(xi), the
/// collected nonlinearity and the stress coupling explicitly. `coeff` supplies
/// the coefficient fields (pass the state's own fields for the direct solver,
/// a lagged iterate for the fixed-point mode).
inline FlowState imex_step_with_coeffs(const FlowState& s, const PhysicalFields& coeff,
                                       const StressField& tau_field, const ModelParams& p,
                                       double dt, bool include_explicit = true,
                                       double cfl = 0.5) {
    if (!(dt > 0.0)) throw std::invalid_argument("imex_step: dt must be > 0");
    const double dt_ok = admissible_dt(s, cfl);
    if (dt > dt_ok) {
        std::ostringstream os;
        os << "imex_step: dt = " << dt << " exceeds the advective limit " << dt_ok;
        throw step_rejected(os.str(), dt_ok);
    }

    FlowState next = s;
    Eigen::VectorXcd rho_rhs = s.rho_hat;
    std::array<Eigen::VectorXcd, 2> u_rhs = {s.u_hat[0], s.u_hat[1]};

    if (include_explicit) {
        detail::check_nonvacuum(s.grid, coeff.rho, s.time);
        FlowRates nl = detail::explicit_terms(s.grid, p, coeff, s, tau_field);
        rho_rhs += dt * nl.rho;
        u_rhs[0] += dt * nl.u[0];
        u_rhs[1] += dt * nl.u[1];
    }

    // per-mode solve (I - dt A(xi)) U' = rhs
    for (int ix = 0; ix < s.grid.n; ++ix) {
        for (int iy = 0; iy < s.grid.n; ++iy) {
            const int id = s.grid.index(ix, iy);
            Eigen::VectorXd xi(2);
            xi << s.grid.kappa(ix), s.grid.kappa(iy);
            Eigen::Matrix3cd M =
                Eigen::Matrix3cd::Identity() - dt * spectral::assemble_A(xi, p);
            Eigen::Vector3cd rhs(rho_rhs(id), u_rhs[0](id), u_rhs[1](id));
            Eigen::Vector3cd sol = M.partialPivLu().solve(rhs);
            next.rho_hat(id) = sol(0);
            next.u_hat[0](id) = sol(1);
            next.u_hat[1](id) = sol(2);
        }
    }

    detail::hermitianize(next.grid, next.rho_hat);
    detail::hermitianize(next.grid, next.u_hat[0]);
    detail::hermitianize(next.grid, next.u_hat[1]);
    next.rho_hat(0) = Cplx(s.rho_hat(0).real(), 0.0); // discrete mass conservation
    next.time = s.time + dt;
    return next;
}

inline FlowState imex_step(const FlowState& s, const StressField& tau_field,
                           const ModelParams& p, double dt, bool include_explicit = true,
                           double cfl = 0.5) {
    PhysicalFields coeff = physical_fields(s);
    return imex_step_with_coeffs(s, coeff, tau_field, p, dt, include_explicit, cfl);
}

} // namespace fenelab::flow
