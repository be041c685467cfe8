#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fenelab/coupled.hpp"
#include "fenelab/spectral.hpp"

namespace fenelab::diag {

using flow::Cplx;

/// Per-step energy/dissipation snapshot of a coupled run. E and D are the
/// squared-norm functionals; the remaining entries are plain norms.
struct EnergyRecord {
    double t = 0.0;
    double E = 0.0;
    double D = 0.0;
    double rho_Hs = 0.0, u_Hs = 0.0, g_Hs = 0.0;
    double rho_L2 = 0.0, u_L2 = 0.0, g_L2L2 = 0.0;
    double gradRg_L2L2 = 0.0;
    double tau_L2 = 0.0, tau_L1 = 0.0;
    double gradu_Linf = 0.0;
    double cum_gradu_Linf = 0.0; ///< trapezoidal accumulation, set by the run loop
    double min_one_plus_rho = 0.0;
    double min_one_plus_g = 0.0;
    double divu_g2 = 0.0; ///< <div u, g^2> pairing entering the g-balance
};

/// Fixed CSV schema (column order is part of the interface).
inline std::string csv_header() {
    return "t,E,D,rho_L2,u_L2,g_L2L2,gradR_g,tau_L2,tau_L1,gradu_Linf,"
           "cum_gradu_Linf,min_one_plus_rho,min_one_plus_g";
}

inline std::string csv_row(const EnergyRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g,%.17g",
                  r.t, r.E, r.D, r.rho_L2, r.u_L2, r.g_L2L2, r.gradRg_L2L2, r.tau_L2,
                  r.tau_L1, r.gradu_Linf, r.cum_gradu_Linf, r.min_one_plus_rho,
                  r.min_one_plus_g);
    return std::string(buf);
}

/// Sobolev multiplier norms via (1 + |k|^{2s}); s may be fractional.
inline EnergyRecord energy(const flow::FlowGrid& grid, const disk::DiskBasis& basis,
                           const coupled::CoupledState& state, const ModelParams& p,
                           double s_disc = 2.0) {
    if (s_disc < 0.0) throw std::invalid_argument("energy: s_disc must be >= 0");
    EnergyRecord rec;
    rec.t = state.time;
    const int n = grid.n;
    const double vol = grid.box_length * grid.box_length;
    const double cell = vol / grid.size();

    double rho_hs2 = 0, rho_l22 = 0, u_hs2 = 0, u_l22 = 0;
    double gradrho_hsm1 = 0, gradu_hs2 = 0, divu_hs2 = 0;
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            const int id = grid.index(ix, iy);
            const double kx = grid.kappa(ix), ky = grid.kappa(iy);
            const double k2 = kx * kx + ky * ky;
            const double mult = 1.0 + std::pow(k2, s_disc);
            const double mult_m1 = 1.0 + std::pow(k2, s_disc - 1.0);
            const double r2 = std::norm(state.flow_state.rho_hat(id));
            const double u02 = std::norm(state.flow_state.u_hat[0](id));
            const double u12 = std::norm(state.flow_state.u_hat[1](id));
            rho_hs2 += mult * r2;
            rho_l22 += r2;
            u_hs2 += mult * (u02 + u12);
            u_l22 += u02 + u12;
            gradrho_hsm1 += k2 * mult_m1 * r2;
            gradu_hs2 += k2 * mult * (u02 + u12);
            const double divu2 = std::norm(Cplx(0, kx) * state.flow_state.u_hat[0](id) +
                                           Cplx(0, ky) * state.flow_state.u_hat[1](id));
            divu_hs2 += mult * divu2;
        }
    }
    rho_hs2 *= vol;
    rho_l22 *= vol;
    u_hs2 *= vol;
    u_l22 *= vol;
    gradrho_hsm1 *= vol;
    gradu_hs2 *= vol;
    divu_hs2 *= vol;

    // configuration field: transform each disk row over the box
    const Eigen::Index nd = state.g_field.rows();
    Eigen::MatrixXcd ghat(nd, grid.size());
    for (Eigen::Index r = 0; r < nd; ++r) {
        Eigen::VectorXcd row = state.g_field.row(r).transpose().cast<Cplx>();
        ghat.row(r) = flow::detail::to_spectral(grid, row).transpose();
    }
    Eigen::MatrixXcd sghat = basis.stiffness * ghat;

    double g_hs2 = 0, g_l22 = 0, gradg_hs2 = 0, gradg_l22 = 0;
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            const int id = grid.index(ix, iy);
            const double kx = grid.kappa(ix), ky = grid.kappa(iy);
            const double mult = 1.0 + std::pow(kx * kx + ky * ky, s_disc);
            double a = 0, b = 0;
            for (Eigen::Index r = 0; r < nd; ++r) {
                a += basis.weights(r) * std::norm(ghat(r, id));
                // stiffness already carries the quadrature weights
                b += std::real(std::conj(ghat(r, id)) * sghat(r, id));
            }
            b = std::max(b, 0.0); // roundoff guard on the quadratic form
            g_hs2 += mult * a;
            g_l22 += a;
            gradg_hs2 += mult * b;
            gradg_l22 += b;
        }
    }
    g_hs2 *= vol;
    g_l22 *= vol;
    gradg_hs2 *= vol;
    gradg_l22 *= vol;

    rec.rho_Hs = std::sqrt(rho_hs2);
    rec.u_Hs = std::sqrt(u_hs2);
    rec.g_Hs = std::sqrt(g_hs2);
    rec.rho_L2 = std::sqrt(rho_l22);
    rec.u_L2 = std::sqrt(u_l22);
    rec.g_L2L2 = std::sqrt(g_l22);
    rec.gradRg_L2L2 = std::sqrt(gradg_l22);
    rec.E = rho_hs2 + u_hs2 + g_hs2;
    rec.D = gradrho_hsm1 + p.mu * gradu_hs2 + (p.mu + p.mu_prime) * divu_hs2 + gradg_hs2;

    // pointwise fields
    flow::PhysicalFields f = flow::physical_fields(state.flow_state);
    rec.min_one_plus_rho = 1.0 + f.rho.minCoeff();
    rec.min_one_plus_g = coupled::min_one_plus_g(state.g_field);
    for (int i = 0; i < grid.size(); ++i) {
        double fro2 = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) fro2 += f.grad_u[a][b](i) * f.grad_u[a][b](i);
        rec.gradu_Linf = std::max(rec.gradu_Linf, std::sqrt(fro2));
    }

    double tau2 = 0, tau1 = 0;
    for (int i = 0; i < grid.size(); ++i) {
        double fro2 = 0.0;
        for (int c = 0; c < 4; ++c) fro2 += state.tau_field.tau[c](i) * state.tau_field.tau[c](i);
        tau2 += fro2;
        tau1 += std::sqrt(fro2);
    }
    rec.tau_L2 = std::sqrt(cell * tau2);
    rec.tau_L1 = cell * tau1;

    Eigen::VectorXd divu = (f.grad_u[0][0] + f.grad_u[1][1]);
    Eigen::RowVectorXd g2disk =
        basis.weights.transpose() * state.g_field.cwiseProduct(state.g_field);
    rec.divu_g2 = cell * divu.dot(g2disk.transpose());

    return rec;
}

/// Residuals of the discrete configuration-energy balance
///   r = d||g||^2/dt + 2 ||grad_R g||^2 - <div u, g^2>,
/// first order in dt for the split scheme. Records must be uniformly spaced.
inline std::vector<double> check_g_balance(const std::vector<EnergyRecord>& records,
                                           double dt) {
    if (records.size() < 2)
        throw std::invalid_argument("check_g_balance: need at least two records");
    for (std::size_t i = 1; i < records.size(); ++i) {
        const double step = records[i].t - records[i - 1].t;
        if (std::abs(step - dt) > 1e-9 * (std::abs(dt) + 1.0))
            throw std::invalid_argument("check_g_balance: records are not uniformly spaced");
    }
    std::vector<double> res(records.size() - 1);
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const double g2a = records[i].g_L2L2 * records[i].g_L2L2;
        const double g2b = records[i + 1].g_L2L2 * records[i + 1].g_L2L2;
        const double diss = records[i].gradRg_L2L2 * records[i].gradRg_L2L2;
        res[i] = (g2b - g2a) / dt + 2.0 * diss - records[i].divu_g2;
    }
    return res;
}

struct TauGrowthReport {
    double sqrt_fit_C = 0.0;   ///< least-squares C in cum ~ C sqrt(t)
    double sqrt_corr = 0.0;    ///< Pearson correlation of cum against sqrt(t)
    double tau_late_rate = 0.0; ///< exponential rate of tau_L1 on the late window
    double bound_ratio_sup = 0.0; ///< sup tau_L1 / (vol^{1/2} ||g||^{1/2} ||grad g||^{1/2})
};

/// Fits the stress-growth driver: cum = int ||grad u||_inf ds against sqrt(t),
/// the late-time behaviour of ||tau||_L1, and the interpolation-bound ratio.
inline TauGrowthReport check_tau_growth(const std::vector<EnergyRecord>& records,
                                        double box_volume) {
    if (records.size() < 50)
        throw std::invalid_argument("check_tau_growth: need at least 50 records");
    TauGrowthReport rep;

    double st2 = 0, scum_st = 0;
    double sum_c = 0, sum_s = 0, sum_cc = 0, sum_ss = 0, sum_cs = 0;
    int n = 0;
    for (const auto& r : records) {
        if (r.t <= 0.0) continue;
        const double sq = std::sqrt(r.t);
        st2 += r.t;
        scum_st += r.cum_gradu_Linf * sq;
        sum_c += r.cum_gradu_Linf;
        sum_s += sq;
        sum_cc += r.cum_gradu_Linf * r.cum_gradu_Linf;
        sum_ss += sq * sq;
        sum_cs += r.cum_gradu_Linf * sq;
        ++n;
    }
    rep.sqrt_fit_C = (st2 > 0.0) ? scum_st / st2 : 0.0;
    const double var_c = n * sum_cc - sum_c * sum_c;
    const double var_s = n * sum_ss - sum_s * sum_s;
    rep.sqrt_corr = (var_c > 1e-300 && var_s > 1e-300)
                        ? (n * sum_cs - sum_c * sum_s) / std::sqrt(var_c * var_s)
                        : 0.0;

    // exponential rate of tau_L1 over the second half
    std::vector<double> ts, ys;
    for (std::size_t i = records.size() / 2; i < records.size(); ++i) {
        if (records[i].tau_L1 > 0.0) {
            ts.push_back(records[i].t);
            ys.push_back(std::log(records[i].tau_L1));
        }
    }
    if (ts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            sx += ts[i];
            sy += ys[i];
            sxx += ts[i] * ts[i];
            sxy += ts[i] * ys[i];
        }
        const double m = static_cast<double>(ts.size());
        rep.tau_late_rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }

    for (const auto& r : records) {
        const double denom =
            std::sqrt(box_volume) * std::sqrt(r.g_L2L2) * std::sqrt(r.gradRg_L2L2);
        if (denom > 1e-300)
            rep.bound_ratio_sup = std::max(rep.bound_ratio_sup, r.tau_L1 / denom);
    }
    return rep;
}

enum class DecayLaw { Algebraic, Exponential };

struct DecayFit {
    double slope = 0.0;     ///< algebraic: d log v / d log(1+t); exponential: d log v / dt
    double prefactor = 0.0; ///< fitted multiplicative constant (rate and prefactor kept apart)
    double residual = 0.0;  ///< RMS of the fit residuals
};

/// Least-squares decay fit on [t0, t1]. Algebraic fits log v against log(1+t),
/// exponential against t. Positive values required on the window.
inline DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                          double t0, double t1, DecayLaw law) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_decay: times/values size mismatch");
    if (!(t0 < t1)) throw std::invalid_argument("fit_decay: need t0 < t1");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t0 || times[i] > t1) continue;
        if (!(values[i] > 0.0))
            throw std::domain_error("fit_decay: nonpositive value inside the fit window");
        xs.push_back(law == DecayLaw::Algebraic ? std::log1p(times[i]) : times[i]);
        ys.push_back(std::log(values[i]));
    }
    if (xs.size() < 2) throw std::invalid_argument("fit_decay: fewer than two samples in window");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    DecayFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icept = (sy - fit.slope * sx) / n;
    fit.prefactor = std::exp(icept);
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (icept + fit.slope * xs[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

inline DecayFit fit_decay(const spectral::DecayProfile& prof, double t0, double t1,
                          DecayLaw law) {
    return fit_decay(prof.times, prof.values, t0, t1, law);
}

} // namespace fenelab::diag
