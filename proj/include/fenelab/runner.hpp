#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fenelab/config.hpp"
#include "fenelab/coupled.hpp"
#include "fenelab/diagnostics.hpp"
#include "fenelab/inequalities.hpp"
#include "fenelab/spectral.hpp"

namespace fenelab::harness {

namespace detail {

/// Minimal standalone SVG polyline plot.
inline void svg_plot(const std::string& path, const std::string& title,
                     const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::string& xlabel, const std::string& ylabel) {
    if (xs.size() != ys.size() || xs.size() < 2) return;
    const double W = 640, H = 420, mL = 70, mR = 20, mT = 40, mB = 50;
    double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xmin = std::min(xmin, xs[i]);
        xmax = std::max(xmax, xs[i]);
        ymin = std::min(ymin, ys[i]);
        ymax = std::max(ymax, ys[i]);
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return mL + (x - xmin) / (xmax - xmin) * (W - mL - mR); };
    auto py = [&](double y) { return H - mB - (y - ymin) / (ymax - ymin) * (H - mT - mB); };

    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << " " << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    out << "<rect x='" << mL << "' y='" << mT << "' width='" << W - mL - mR << "' height='"
        << H - mT - mB << "' fill='none' stroke='black'/>\n";
    out << "<text x='" << W / 2 << "' y='" << H - 12 << "' text-anchor='middle' font-size='12'>"
        << xlabel << "</text>\n";
    out << "<text x='16' y='" << H / 2 << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 "
        << H / 2 << ")'>" << ylabel << "</text>\n";
    std::ostringstream pts;
    pts.precision(8);
    for (std::size_t i = 0; i < xs.size(); ++i) pts << px(xs[i]) << "," << py(ys[i]) << " ";
    out << "<polyline points='" << pts.str() << "' fill='none' stroke='#1f5fbf' stroke-width='1.5'/>\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "[%.4g, %.4g] x [%.4g, %.4g]", xmin, xmax, ymin, ymax);
    out << "<text x='" << mL + 6 << "' y='" << mT + 16 << "' font-size='11' fill='#555'>" << buf
        << "</text>\n";
    out << "</svg>\n";
}

/// Pass/fail collector for report.txt; exit status 0 iff everything passed.
class Report {
  public:
    void check(const std::string& name, bool ok, const std::string& detail) {
        std::ostringstream os;
        os << (ok ? "PASS" : "FAIL") << ": " << name << " (" << detail << ")";
        lines_.push_back(os.str());
        ok_ = ok_ && ok;
    }

    void info(const std::string& text) { lines_.push_back("INFO: " + text); }

    bool all_passed() const { return ok_; }

    void write(const std::string& path) const {
        std::ofstream out(path);
        for (const auto& l : lines_) out << l << "\n";
        out << (ok_ ? "RESULT: all checks passed\n" : "RESULT: some checks failed\n");
    }

  private:
    std::vector<std::string> lines_;
    bool ok_ = true;
};

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace detail

/// Initial data families. All of them return a state with per-node zero disk
/// mean of g (within roundoff), min(1+g) > 0 and E(0) = epsilon under the
/// energy functional used by the diagnostics.
inline coupled::CoupledState initial_condition(const RunConfig& cfg,
                                               const flow::FlowGrid& grid,
                                               const disk::DiskBasis& basis) {
    Rng rng(cfg.seed);
    coupled::CoupledState s = coupled::CoupledState::zero(grid, basis);

    auto band_hat = [&](double amp, int band) {
        Eigen::VectorXcd phys(grid.size());
        for (int i = 0; i < grid.size(); ++i) phys(i) = flow::Cplx(rng.normal(), 0.0);
        Eigen::VectorXcd hat = flow::detail::to_spectral(grid, phys);
        for (int ix = 0; ix < grid.n; ++ix)
            for (int iy = 0; iy < grid.n; ++iy)
                if (std::abs(grid.signed_mode(ix)) > band ||
                    std::abs(grid.signed_mode(iy)) > band)
                    hat(grid.index(ix, iy)) = flow::Cplx(0, 0);
        hat *= amp;
        flow::detail::hermitianize(grid, hat);
        return hat;
    };

    if (cfg.family == "single-mode") {
        // one shear mode in u and the first configuration eigenmode modulated
        // by one spatial cosine
        const flow::Cplx half_i(0.0, -0.5);
        s.flow_state.u_hat[0](grid.index(0, 1)) = half_i;
        s.flow_state.u_hat[0](grid.index(0, grid.n - 1)) = std::conj(half_i);
        Eigen::RowVectorXcd xmode = Eigen::RowVectorXcd::Zero(grid.size());
        xmode(grid.index(1, 0)) = flow::Cplx(0.5, 0.0);
        xmode(grid.index(grid.n - 1, 0)) = flow::Cplx(0.5, 0.0);
        Eigen::RowVectorXd cosx(grid.size());
        for (int ix = 0; ix < grid.n; ++ix)
            for (int iy = 0; iy < grid.n; ++iy)
                cosx(grid.index(ix, iy)) =
                    std::cos(2.0 * disk::pi * ix / grid.n);
        s.g_field = basis.eigenvectors.col(1) * cosx;
    } else if (cfg.family == "random-band") {
        s.flow_state.rho_hat = band_hat(1.0, 2);
        s.flow_state.rho_hat(0) = flow::Cplx(0, 0);
        s.flow_state.u_hat[0] = band_hat(1.0, 2);
        s.flow_state.u_hat[1] = band_hat(1.0, 2);
        for (int j = 1; j <= 6; ++j) {
            Eigen::VectorXcd w = band_hat(1.0, 2);
            Eigen::VectorXd wr = flow::detail::to_physical(grid, w).real();
            s.g_field += rng.normal() * basis.eigenvectors.col(j) * wr.transpose();
        }
    } else { // boundary-probe
        Eigen::VectorXd bump(basis.size());
        const double w = 0.1;
        for (int i = 0; i < basis.size(); ++i) {
            const double r2 = basis.node_r(i) * basis.node_r(i);
            bump(i) = std::exp(-(1.0 - r2) / w) * std::cos(2.0 * basis.node_theta(i));
        }
        bump = basis.project_mean_zero(bump);
        Eigen::RowVectorXd cosx(grid.size());
        for (int ix = 0; ix < grid.n; ++ix)
            for (int iy = 0; iy < grid.n; ++iy)
                cosx(grid.index(ix, iy)) = std::cos(2.0 * disk::pi * ix / grid.n);
        s.g_field = bump * cosx;
    }

    if (cfg.epsilon == 0.0) return coupled::CoupledState::zero(grid, basis);

    ModelParams p = cfg.model;
    const double e0 = diag::energy(grid, basis, s, p, cfg.s_disc).E;
    if (e0 <= 0.0) throw std::invalid_argument("initial_condition: degenerate family");
    const double scale = std::sqrt(cfg.epsilon / e0);
    s.flow_state.rho_hat *= scale;
    s.flow_state.u_hat[0] *= scale;
    s.flow_state.u_hat[1] *= scale;
    s.g_field *= scale;
    s.tau_field = coupled::stress_field(basis, s.g_field);

    if (coupled::min_one_plus_g(s.g_field) <= 0.0)
        throw std::invalid_argument(
            "initial_condition: epsilon too large, 1 + g is not positive");
    flow::PhysicalFields f = flow::physical_fields(s.flow_state);
    if (1.0 + f.rho.minCoeff() <= 0.0)
        throw std::invalid_argument(
            "initial_condition: epsilon too large, 1 + rho is not positive");
    return s;
}

namespace detail {

inline int run_simulate(const RunConfig& cfg, const std::filesystem::path& out) {
    flow::FlowGrid grid;
    grid.n = cfg.n_x;
    grid.box_length = cfg.box_length;
    auto basis = disk::build_basis(cfg.model.k, cfg.n_r, cfg.n_theta);
    auto state = initial_condition(cfg, grid, basis);
    coupled::Stepper stepper(grid, basis, cfg.model, cfg.dt, cfg.workers);

    const int n_steps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
    std::vector<diag::EnergyRecord> records;
    records.reserve(static_cast<std::size_t>(n_steps) + 1);

    double worst_mean = 0.0;
    bool positive = true;
    for (int m = 0; m <= n_steps; ++m) {
        diag::EnergyRecord rec = diag::energy(grid, basis, state, cfg.model, cfg.s_disc);
        if (!records.empty()) {
            const auto& prev = records.back();
            rec.cum_gradu_Linf = prev.cum_gradu_Linf +
                                 0.5 * (prev.gradu_Linf + rec.gradu_Linf) * cfg.dt;
        }
        records.push_back(rec);
        worst_mean = std::max(worst_mean, coupled::max_disk_mean(basis, state.g_field));
        positive = positive && rec.min_one_plus_g > 0.0 && rec.min_one_plus_rho > 0.0;
        if (m < n_steps) state = stepper.step(state);
    }

    // series.csv at the output stride
    {
        std::ofstream csv(out / "series.csv");
        csv << diag::csv_header() << "\n";
        for (std::size_t i = 0; i < records.size(); i += static_cast<std::size_t>(cfg.output_stride))
            csv << diag::csv_row(records[i]) << "\n";
    }

    Report rep;
    rep.info("mode simulate: " + std::to_string(n_steps) + " steps, dt = " + fmt(cfg.dt));
    rep.info("lambda_1 of the configuration operator: " + fmt(basis.eigenvalues(1)));
    rep.check("mean-zero propagation", worst_mean <= 1e-10,
              "max |int g psi dR| = " + fmt(worst_mean));
    rep.check("positivity 1+g and 1+rho", positive,
              "min(1+g) = " + fmt(records.back().min_one_plus_g) +
                  ", min(1+rho) = " + fmt(records.back().min_one_plus_rho));

    // discrete configuration-energy balance
    auto residuals = diag::check_g_balance(records, cfg.dt);
    double worst_bal = 0.0;
    bool bal_ok = true;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const double g2 = records[i].g_L2L2 * records[i].g_L2L2;
        const double tol = cfg.balance_tol * cfg.dt * (1.0 + g2);
        worst_bal = std::max(worst_bal, std::abs(residuals[i]) / (1.0 + g2));
        bal_ok = bal_ok && residuals[i] <= tol;
    }
    rep.check("configuration energy balance", bal_ok,
              "worst scaled residual = " + fmt(worst_bal) + " vs tol " +
                  fmt(cfg.balance_tol * cfg.dt));

    // decay fit of ||g|| over the second half of the run
    bool have_g = records.front().g_L2L2 > 0.0;
    if (have_g && records.back().g_L2L2 > 0.0) {
        std::vector<double> ts, gs, us;
        for (const auto& r : records) {
            ts.push_back(r.t);
            gs.push_back(r.g_L2L2);
        }
        auto fit = diag::fit_decay(ts, gs, 0.5 * cfg.t_end, cfg.t_end,
                                   diag::DecayLaw::Exponential);
        const double target = 0.9 * basis.eigenvalues(1);
        rep.check("g relaxation rate >= 0.9 lambda_1", -fit.slope >= target,
                  "rate = " + fmt(-fit.slope) + ", 0.9 lambda_1 = " + fmt(target));
    } else if (cfg.epsilon == 0.0) {
        bool quiet = records.back().E == 0.0;
        rep.check("zero data stays at equilibrium", quiet, "E(t_end) = " + fmt(records.back().E));
    }

    // stress growth driver
    if (records.size() >= 50) {
        auto tg = diag::check_tau_growth(records, grid.box_length * grid.box_length);
        rep.info("sqrt-driver fit C = " + fmt(tg.sqrt_fit_C) +
                 ", correlation = " + fmt(tg.sqrt_corr));
        if (records.front().u_L2 > 0.0)
            rep.check("cum ||grad u||_inf tracks sqrt(t)", tg.sqrt_corr >= 0.99,
                      "corr = " + fmt(tg.sqrt_corr));
        double tau_peak = 0.0;
        for (const auto& r : records) tau_peak = std::max(tau_peak, r.tau_L1);
        if (have_g && tau_peak > 1e-12)
            rep.check("tau_L1 decays after transients", tg.tau_late_rate < 0.0,
                      "late rate = " + fmt(tg.tau_late_rate));
        else if (have_g)
            rep.info("tau_L1 at roundoff scale (" + fmt(tau_peak) +
                     "), decay check skipped");
        rep.info("tau_L1 interpolation-bound ratio sup = " + fmt(tg.bound_ratio_sup));
    }

    if (cfg.plots && records.size() >= 2) {
        std::vector<double> ts, lg, lr;
        for (const auto& r : records) {
            if (r.g_L2L2 <= 0.0 || r.rho_L2 + r.u_L2 <= 0.0) continue;
            ts.push_back(r.t);
            lg.push_back(std::log10(r.g_L2L2));
            lr.push_back(std::log10(std::hypot(r.rho_L2, r.u_L2)));
        }
        if (ts.size() >= 2) {
            svg_plot((out / "g_decay.svg").string(), "log10 ||g|| vs t", ts, lg, "t",
                     "log10 ||g||");
            svg_plot((out / "flow_decay.svg").string(), "log10 ||(rho,u)|| vs t", ts, lr,
                     "t", "log10 ||(rho,u)||");
        }
    }

    rep.write((out / "report.txt").string());
    return rep.all_passed() ? 0 : 1;
}

inline int run_picard(const RunConfig& cfg, const std::filesystem::path& out) {
    flow::FlowGrid grid;
    grid.n = cfg.n_x;
    grid.box_length = cfg.box_length;
    auto basis = disk::build_basis(cfg.model.k, cfg.n_r, cfg.n_theta);
    auto initial = initial_condition(cfg, grid, basis);

    auto pr = coupled::picard_iterate(grid, basis, cfg.model, initial, cfg.picard_horizon,
                                      cfg.picard_iters, cfg.dt, cfg.workers);

    {
        std::ofstream csv(out / "picard.csv");
        csv << "iteration,delta\n";
        for (std::size_t i = 0; i < pr.deltas.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i + 1, pr.deltas[i]);
            csv << buf;
        }
    }

    Report rep;
    rep.info("mode picard: horizon " + fmt(cfg.picard_horizon) + ", dt = " + fmt(cfg.dt) +
             ", iterations = " + std::to_string(cfg.picard_iters));
    bool contracts = true;
    double worst_ratio = 0.0;
    for (std::size_t n = 2; n < pr.deltas.size(); ++n) {
        if (pr.deltas[n - 1] <= 1e-14) break;
        const double ratio = pr.deltas[n] / pr.deltas[n - 1];
        worst_ratio = std::max(worst_ratio, ratio);
        contracts = contracts && ratio <= 0.5;
    }
    rep.check("iterate distances contract (ratio <= 1/2 from the 2nd iterate)", contracts,
              "worst ratio = " + fmt(worst_ratio));

    // limit vs the direct solver at the horizon
    coupled::Stepper stepper(grid, basis, cfg.model, cfg.dt, cfg.workers);
    coupled::CoupledState direct = initial;
    const int n_steps = static_cast<int>(std::llround(cfg.picard_horizon / cfg.dt));
    for (int m = 0; m < n_steps; ++m) direct = stepper.step(direct);
    const double dist =
        std::sqrt(coupled::low_norm_sq_diff(grid, basis, pr.limit.back(), direct));
    rep.check("iterate limit matches the direct solver", dist <= 1e-6,
              "low-norm distance = " + fmt(dist));

    rep.write((out / "report.txt").string());
    return rep.all_passed() ? 0 : 1;
}

inline int run_linear_decay(const RunConfig& cfg, const std::filesystem::path& out) {
    auto prof = spectral::gaussian_profile();
    spectral::DecayProfile curve;
    const double t_lo = cfg.fit_t0, t_hi = cfg.fit_t1;
    curve.times.resize(static_cast<std::size_t>(cfg.n_times));
    curve.values.resize(static_cast<std::size_t>(cfg.n_times));
    for (int i = 0; i < cfg.n_times; ++i)
        curve.times[static_cast<std::size_t>(i)] =
            t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (cfg.n_times - 1));
    parallel_for(static_cast<std::size_t>(cfg.n_times), cfg.workers, [&](std::size_t i) {
        curve.values[i] = spectral::decay_norm(curve.times[i], cfg.model, prof);
    });

    {
        std::ofstream csv(out / "decay.csv");
        csv << "t,norm\n";
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", curve.times[i], curve.values[i]);
            csv << buf;
        }
    }

    auto fit = diag::fit_decay(curve, t_lo, t_hi, diag::DecayLaw::Algebraic);
    const double target = -0.25 * cfg.model.d;

    Report rep;
    rep.info("mode linear-decay: d = " + std::to_string(cfg.model.d) + ", window [" +
             fmt(t_lo) + ", " + fmt(t_hi) + "]");
    rep.info("fitted slope = " + fmt(fit.slope) + " (residual " + fmt(fit.residual) + ")");
    rep.check("algebraic decay exponent within 0.05 of -d/4",
              std::abs(fit.slope - target) <= 0.05,
              "slope = " + fmt(fit.slope) + ", target = " + fmt(target));

    if (cfg.plots) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
            lx.push_back(std::log10(1.0 + curve.times[i]));
            ly.push_back(std::log10(curve.values[i]));
        }
        svg_plot((out / "linear_decay.svg").string(), "log10 ||U|| vs log10(1+t)", lx, ly,
                 "log10(1+t)", "log10 ||U||");
    }

    rep.write((out / "report.txt").string());
    return rep.all_passed() ? 0 : 1;
}

inline int run_spectrum(const RunConfig& cfg, const std::filesystem::path& out) {
    const int n_q = 60;
    Report rep;
    std::ofstream csv(out / "spectrum.csv");
    csv << "q,re_l0,im_l0,re_lp,im_lp,re_lm,im_lm,degenerate,proj_sum_resid,"
           "recon_resid,solver_mismatch\n";

    bool stable = true, proj_ok = true, solver_ok = true;
    double worst_proj = 0.0, worst_solver = 0.0;
    for (int i = 0; i < n_q; ++i) {
        const double q = std::pow(10.0, -3.0 + 6.0 * i / (n_q - 1.0));
        Eigen::VectorXd xi = Eigen::VectorXd::Zero(cfg.model.d);
        xi(0) = q;
        auto st = spectral::make_triple(xi, cfg.model);
        stable = stable && st.lambda0.real() <= 0.0 && st.lambda_plus.real() <= 0.0 &&
                 st.lambda_minus.real() <= 0.0;

        double proj_sum = 0.0, recon = 0.0;
        if (!st.degenerate) {
            const Eigen::MatrixXcd I =
                Eigen::MatrixXcd::Identity(cfg.model.d + 1, cfg.model.d + 1);
            proj_sum = (st.P0 + st.P_plus + st.P_minus - I).cwiseAbs().maxCoeff();
            recon = (st.lambda0 * st.P0 + st.lambda_plus * st.P_plus +
                     st.lambda_minus * st.P_minus - st.A)
                        .cwiseAbs()
                        .maxCoeff() /
                    (1.0 + st.A.cwiseAbs().maxCoeff());
            proj_ok = proj_ok && proj_sum <= 1e-9 && recon <= 1e-9;
            worst_proj = std::max({worst_proj, proj_sum, recon});
        }

        auto got = spectral::general_eigenvalues(st.A);
        std::vector<spectral::Cplx> expected(static_cast<std::size_t>(cfg.model.d - 1),
                                             st.lambda0);
        expected.push_back(st.lambda_plus);
        expected.push_back(st.lambda_minus);
        std::vector<bool> used(static_cast<std::size_t>(got.size()), false);
        double mismatch = 0.0;
        for (const auto& lam : expected) {
            double best = 1e300;
            int bi = -1;
            for (Eigen::Index j = 0; j < got.size(); ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                if (std::abs(got(j) - lam) < best) {
                    best = std::abs(got(j) - lam);
                    bi = static_cast<int>(j);
                }
            }
            used[static_cast<std::size_t>(bi)] = true;
            mismatch = std::max(mismatch, best / (1.0 + std::abs(lam)));
        }
        solver_ok = solver_ok && mismatch <= 1e-10;
        worst_solver = std::max(worst_solver, mismatch);

        char buf[512];
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.3g,%.3g,%.3g\n", q,
                      st.lambda0.real(), st.lambda0.imag(), st.lambda_plus.real(),
                      st.lambda_plus.imag(), st.lambda_minus.real(), st.lambda_minus.imag(),
                      st.degenerate ? 1 : 0, proj_sum, recon, mismatch);
        csv << buf;
    }

    rep.info("mode spectrum: d = " + std::to_string(cfg.model.d) + ", crossover radius = " +
             fmt(spectral::crossover_radius(cfg.model)));
    rep.check("real parts nonpositive on the log grid", stable, "60 frequencies");
    rep.check("projection identities within 1e-9", proj_ok, "worst = " + fmt(worst_proj));
    rep.check("closed-form eigenvalues match the general solver to 1e-10", solver_ok,
              "worst = " + fmt(worst_solver));
    rep.write((out / "report.txt").string());
    return rep.all_passed() ? 0 : 1;
}

inline int run_inequalities(const RunConfig& cfg, const std::filesystem::path& out) {
    auto basis = disk::build_basis(cfg.model.k, cfg.n_r, cfg.n_theta);
    auto fine = disk::build_basis(cfg.model.k, 2 * cfg.n_r, 2 * cfg.n_theta);

    Report rep;
    rep.info("mode inequalities: k = " + fmt(cfg.model.k) + ", trials = " +
             std::to_string(cfg.trials));

    std::ofstream csv(out / "ratios.csv");
    csv << "inequality,trial,ratio\n";
    auto dump = [&csv](const ineq::InequalityReport& r) {
        for (std::size_t i = 0; i < r.ratios.size(); ++i) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s,%zu,%.17g\n", r.id.c_str(), i, r.ratios[i]);
            csv << buf;
        }
    };

    auto ri = ineq::check_tau_interpolation(basis, cfg.delta, cfg.trials, cfg.seed, 1e4,
                                            {}, cfg.workers);
    auto ri_f = ineq::check_tau_interpolation(fine, cfg.delta, cfg.trials, cfg.seed, 1e4,
                                              {}, cfg.workers);
    dump(ri);
    rep.check("tau interpolation: empirical C_delta finite",
              std::isfinite(ri.worst_ratio) && !ri.violated,
              "C_delta = " + fmt(ri.worst_ratio));
    rep.check("tau interpolation: stable under resolution doubling",
              std::abs(ri.worst_ratio - ri_f.worst_ratio) <= 0.05 * ri_f.worst_ratio,
              fmt(ri.worst_ratio) + " vs " + fmt(ri_f.worst_ratio));

    const bool lp_admissible = (cfg.p_exp - 1.0) * cfg.model.k > 1.0;
    if (lp_admissible) {
        auto rl = ineq::check_tau_lp(basis, cfg.p_exp, cfg.trials, cfg.seed, 10.0, {},
                                     cfg.workers);
        auto rl_f = ineq::check_tau_lp(fine, cfg.p_exp, cfg.trials, cfg.seed, 10.0, {},
                                       cfg.workers);
        dump(rl);
        rep.check("tau Lp bound holds", !rl.violated, "worst ratio = " + fmt(rl.worst_ratio));
        rep.check("tau Lp: stable under resolution doubling",
                  std::abs(rl.worst_ratio - rl_f.worst_ratio) <= 0.05 * rl_f.worst_ratio,
                  fmt(rl.worst_ratio) + " vs " + fmt(rl_f.worst_ratio));
    } else {
        rep.info("tau Lp skipped: hypothesis (p-1)k > 1 fails for p = " + fmt(cfg.p_exp) +
                 ", k = " + fmt(cfg.model.k));
    }

    auto rh = ineq::check_tau_hardy(basis, cfg.trials, cfg.seed, 10.0, {}, cfg.workers);
    auto rh_f = ineq::check_tau_hardy(fine, cfg.trials, cfg.seed, 10.0, {}, cfg.workers);
    dump(rh);
    rep.check("tau Hardy-type bound holds", !rh.violated,
              "worst ratio = " + fmt(rh.worst_ratio));
    rep.check("tau Hardy: stable under resolution doubling",
              std::abs(rh.worst_ratio - rh_f.worst_ratio) <= 0.05 * rh_f.worst_ratio,
              fmt(rh.worst_ratio) + " vs " + fmt(rh_f.worst_ratio));

    // Poincare: sampled ratios against the eigenvalue bound
    {
        Rng rng(cfg.seed ^ 0x50C0ULL);
        const double c = disk::poincare_constant(basis);
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            Eigen::VectorXd g = ineq::random_mean_zero_g(basis, rng);
            const double dn = basis.grad_norm(g);
            if (dn > 0.0) worst = std::max(worst, basis.norm(g) / dn);
        }
        rep.check("Poincare sampled ratio below 1/sqrt(lambda_1)", worst <= c + 1e-9,
                  "worst = " + fmt(worst) + ", constant = " + fmt(c));
        rep.info("poincare constant = " + fmt(c));
    }

    // 1-D boundary inequalities: analytic sample and power sweep
    {
        auto idf = [](double x) { return x; };
        auto did = [](double) { return 1.0; };
        auto res = ineq::hardy_1d(idf, did, 0.5);
        const double ratio = ineq::hardy_ratio(res, 0.5);
        rep.check("1-D inequality analytic sample (k=1/2, psi=x)",
                  std::abs(ratio - 1.538) < 1e-3, "ratio = " + fmt(ratio));

        bool swept = true;
        double worst = 0.0;
        for (double a : {0.6, 0.8, 1.0, 1.5, 2.0, 3.0}) {
            auto psi = [a](double x) { return std::pow(x, a); };
            auto dpsi = [a](double x) { return a * std::pow(x, a - 1.0); };
            const double rr = ineq::hardy_ratio(ineq::hardy_1d(psi, dpsi, 0.5), 0.5);
            worst = std::max(worst, rr);
            swept = swept && std::isfinite(rr);
        }
        rep.check("1-D inequality power sweep bounded", swept && worst < 5.0,
                  "worst ratio = " + fmt(worst));

        auto psi15 = [](double x) { return std::pow(x, 1.5); };
        auto dpsi15 = [](double x) { return 1.5 * std::sqrt(x); };
        auto r15 = ineq::hardy_1d_k1(psi15, dpsi15, 1);
        bool k1_ok = true;
        for (int n : {1, 2, 3}) k1_ok = k1_ok && ineq::hardy_ratio_k1(r15, n) < 5.0;
        rep.check("k=1 family bounded for n in {1,2,3}", k1_ok,
                  "n=1 ratio = " + fmt(ineq::hardy_ratio_k1(r15, 1)));
    }

    rep.write((out / "report.txt").string());
    return rep.all_passed() ? 0 : 1;
}

} // namespace detail

/// Executes the configured mode; writes the effective configuration echo,
/// series/report files and optional SVG plots into the output directory.
/// Returns 0 iff every enabled invariant check passed.
inline int run(const RunConfig& cfg) {
    cfg.validate();
    std::filesystem::path out(cfg.out_dir);
    std::filesystem::create_directories(out);
    {
        std::ofstream echo(out / "effective_config.cfg");
        echo << effective_config(cfg);
    }
    switch (cfg.mode) {
    case RunMode::Simulate: return detail::run_simulate(cfg, out);
    case RunMode::Picard: return detail::run_picard(cfg, out);
    case RunMode::LinearDecay: return detail::run_linear_decay(cfg, out);
    case RunMode::Spectrum: return detail::run_spectrum(cfg, out);
    case RunMode::Inequalities: return detail::run_inequalities(cfg, out);
    }
    return 2;
}

} // namespace fenelab::harness
