// Acceptance suite: one line per criterion, exit nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fenelab/runner.hpp"

using namespace fenelab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ModelParams unit_coefficients(int d) {
    ModelParams p;
    p.mu = 1.0;
    p.mu_prime = 0.0;
    p.gamma = 1.0;
    p.a = 1.0;
    p.k = 1.0;
    p.d = d;
    return p;
}

// ---------------------------------------------------------------- criterion 1
Outcome linear_decay_law(double& runtime) {
    Timer timer;
    Outcome out;
    auto prof = spectral::gaussian_profile();
    double slopes[2] = {0.0, 0.0};
    for (int di = 0; di < 2; ++di) {
        const int d = (di == 0) ? 3 : 2;
        ModelParams p = unit_coefficients(d);
        std::vector<double> ts(25), vs(25);
        for (int i = 0; i < 25; ++i)
            ts[static_cast<std::size_t>(i)] = 10.0 * std::pow(100.0, i / 24.0);
        parallel_for(25, 2, [&](std::size_t i) {
            vs[i] = spectral::decay_norm(ts[i], p, prof);
        });
        auto fit = diag::fit_decay(ts, vs, 10.0, 1000.0, diag::DecayLaw::Algebraic);
        slopes[di] = fit.slope;
    }
    runtime = timer.seconds();
    const bool ok3 = std::abs(slopes[0] + 0.75) <= 0.05;
    const bool ok2 = std::abs(slopes[1] + 0.50) <= 0.05;
    out.pass = ok3 && ok2 && runtime <= 60.0;
    out.detail = "d=3 slope " + fmt(slopes[0]) + " (target -0.75 +/- 0.05), d=2 slope " +
                 fmt(slopes[1]) + " (reported, -0.50 +/- 0.05)";
    return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome eigen_structure(double& runtime) {
    Timer timer;
    Outcome out;
    Rng rng(20260808);
    double worst_eig = 0.0, worst_proj = 0.0, worst_poly = 0.0;
    int tested = 0;
    while (tested < 1000) {
        const int d = (tested % 2) ? 2 : 3;
        ModelParams p;
        p.mu = 0.2 + 2.0 * rng.uniform();
        p.mu_prime = -p.mu + 0.1 + 2.0 * rng.uniform();
        p.gamma = 1.0 + 2.0 * rng.uniform();
        p.a = 1.0;
        p.d = d;
        Eigen::VectorXd xi(d);
        for (int i = 0; i < d; ++i) xi(i) = 1.5 * rng.normal();
        auto st = spectral::make_triple(xi, p);
        if (st.degenerate) continue;
        ++tested;

        // closed form vs the general solver
        auto got = spectral::general_eigenvalues(st.A);
        std::vector<spectral::Cplx> expected(static_cast<std::size_t>(d - 1), st.lambda0);
        expected.push_back(st.lambda_plus);
        expected.push_back(st.lambda_minus);
        std::vector<bool> used(static_cast<std::size_t>(got.size()), false);
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
            worst_eig = std::max(worst_eig, best / (1.0 + std::abs(lam)));
        }

        // projection identities and spectral reconstruction
        const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d + 1, d + 1);
        worst_proj = std::max(
            worst_proj, (st.P0 + st.P_plus + st.P_minus - I).cwiseAbs().maxCoeff());
        worst_proj =
            std::max(worst_proj, (st.P0 * st.P0 - st.P0).cwiseAbs().maxCoeff());
        worst_proj = std::max(
            worst_proj, (st.P_plus * st.P_plus - st.P_plus).cwiseAbs().maxCoeff());
        worst_proj = std::max(
            worst_proj, (st.P_minus * st.P_minus - st.P_minus).cwiseAbs().maxCoeff());
        worst_proj = std::max(worst_proj, (st.P0 * st.P_plus).cwiseAbs().maxCoeff());
        worst_proj = std::max(worst_proj, (st.P_plus * st.P_minus).cwiseAbs().maxCoeff());
        Eigen::MatrixXcd recon = st.lambda0 * st.P0 + st.lambda_plus * st.P_plus +
                                 st.lambda_minus * st.P_minus;
        worst_proj = std::max(worst_proj, (recon - st.A).cwiseAbs().maxCoeff() /
                                              (1.0 + st.A.cwiseAbs().maxCoeff()));

        // characteristic polynomial against the factored determinant
        const double q2 = xi.squaredNorm();
        auto coeffs = spectral::char_poly(st.A);
        Eigen::VectorXcd poly(3);
        poly << spectral::Cplx(p.gamma_eff() * q2),
            spectral::Cplx((2.0 * p.mu + p.mu_prime) * q2), spectral::Cplx(1.0);
        for (int rep = 0; rep < d - 1; ++rep) {
            Eigen::VectorXcd next = Eigen::VectorXcd::Zero(poly.size() + 1);
            for (Eigen::Index i = 0; i < poly.size(); ++i) {
                next(i) += poly(i) * p.mu * q2;
                next(i + 1) += poly(i);
            }
            poly = next;
        }
        const double scale = poly.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < poly.size(); ++i)
            worst_poly = std::max(worst_poly, std::abs(coeffs(i) - poly(i)) / scale);
    }
    runtime = timer.seconds();
    out.pass = worst_eig <= 1e-10 && worst_proj <= 1e-9 && worst_poly <= 1e-12 &&
               runtime <= 10.0;
    out.detail = "1000 cases: eig mismatch " + fmt(worst_eig) + " (<=1e-10), projections " +
                 fmt(worst_proj) + " (<=1e-9), char-poly " + fmt(worst_poly) +
                 " (<=1e-12)";
    return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome cancellation_and_balance(double& runtime) {
    Timer timer;
    Outcome out;
    auto basis = disk::build_basis(1.0, 16, 16);
    Rng rng(333);

    double worst_pair = 0.0;
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd g(basis.size());
        for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.normal();
        Eigen::MatrixXd gu(2, 2);
        gu << rng.normal(), rng.normal(), rng.normal(), rng.normal();
        const double pairing = basis.inner(disk::apply_drag(basis, g, gu), g);
        worst_pair = std::max(worst_pair, std::abs(pairing) / basis.inner(g, g));
    }

    // balance residual refinement on a small coupled run
    flow::FlowGrid grid;
    grid.n = 8;
    ModelParams p;
    p.gamma = 2.0;
    auto bsmall = disk::build_basis(1.0, 12, 12);
    harness::RunConfig icfg;
    icfg.n_x = grid.n;
    icfg.n_r = 12;
    icfg.n_theta = 12;
    icfg.family = "random-band";
    icfg.epsilon = 1e-3;
    icfg.seed = 11;
    icfg.model = p;
    auto initial = harness::initial_condition(icfg, grid, bsmall);

    std::vector<double> worsts;
    for (double dt : {0.01, 0.005, 0.0025}) {
        coupled::Stepper st(grid, bsmall, p, dt, 2);
        auto s = initial;
        std::vector<diag::EnergyRecord> recs;
        const int n_steps = static_cast<int>(std::llround(0.4 / dt));
        for (int m = 0; m <= n_steps; ++m) {
            recs.push_back(diag::energy(grid, bsmall, s, p));
            if (m < n_steps) s = st.step(s);
        }
        double worst = 0.0;
        for (double r : diag::check_g_balance(recs, dt)) worst = std::max(worst, std::abs(r));
        worsts.push_back(worst);
    }
    const double order = std::log(worsts[0] / worsts[2]) / std::log(4.0);

    runtime = timer.seconds();
    out.pass = worst_pair <= 1e-11 && order >= 0.9 && runtime <= 30.0;
    out.detail = "drag-energy pairing " + fmt(worst_pair) + " (<=1e-11), balance order " +
                 fmt(order) + " (>=0.9)";
    return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome poincare_hardy_suites(double& runtime) {
    Timer timer;
    Outcome out;
    bool ok = true;
    std::string notes;
    for (double k : {0.5, 1.0, 2.0}) {
        auto coarse = disk::build_basis(k, 16, 16);
        auto fine = disk::build_basis(k, 32, 32);
        const std::uint64_t seed = 314159;

        auto ri = ineq::check_tau_interpolation(coarse, 0.1, 1000, seed, 1e4, {}, 2);
        auto ri_f = ineq::check_tau_interpolation(fine, 0.1, 1000, seed, 1e4, {}, 2);
        const double p_exp = (k < 1.0) ? 4.0 : ((k < 2.0) ? 3.0 : 2.0);
        auto rl = ineq::check_tau_lp(coarse, p_exp, 1000, seed, 10.0, {}, 2);
        auto rl_f = ineq::check_tau_lp(fine, p_exp, 1000, seed, 10.0, {}, 2);
        auto rh = ineq::check_tau_hardy(coarse, 1000, seed, 10.0, {}, 2);
        auto rh_f = ineq::check_tau_hardy(fine, 1000, seed, 10.0, {}, 2);

        const bool no_viol = !ri.violated && !rl.violated && !rh.violated;
        const bool stable =
            std::abs(ri.worst_ratio - ri_f.worst_ratio) <= 0.05 * ri_f.worst_ratio &&
            std::abs(rl.worst_ratio - rl_f.worst_ratio) <= 0.05 * rl_f.worst_ratio &&
            std::abs(rh.worst_ratio - rh_f.worst_ratio) <= 0.05 * rh_f.worst_ratio;

        Rng rng(seed ^ 0xABC);
        const double c = disk::poincare_constant(coarse);
        double worst_poincare = 0.0;
        for (int t = 0; t < 1000; ++t) {
            Eigen::VectorXd g = ineq::random_mean_zero_g(coarse, rng);
            const double dn = coarse.grad_norm(g);
            if (dn > 0.0) worst_poincare = std::max(worst_poincare, coarse.norm(g) / dn);
        }
        const bool poincare_ok = worst_poincare <= c + 1e-9;

        ok = ok && no_viol && stable && poincare_ok;
        notes += "k=" + fmt(k) + (no_viol && stable && poincare_ok ? " ok" : " FAIL") + "; ";
    }

    auto idf = [](double x) { return x; };
    auto did = [](double) { return 1.0; };
    const double ratio = ineq::hardy_ratio(ineq::hardy_1d(idf, did, 0.5), 0.5);
    const bool analytic_ok = std::abs(ratio - 1.538) <= 1e-3;
    ok = ok && analytic_ok;

    runtime = timer.seconds();
    out.pass = ok && runtime <= 120.0;
    out.detail = notes + "1-D analytic ratio " + fmt(ratio) + " (1.538 +/- 1e-3)";
    return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome stress_identity(double& runtime) {
    Timer timer;
    Outcome out;
    double worst = 0.0;
    for (double k : {0.5, 1.0, 2.0}) {
        auto basis = disk::build_basis(k, 16, 16);
        Eigen::VectorXd c = Eigen::VectorXd::Constant(basis.size(), 1.7);
        Eigen::Matrix2d tau = disk::stress(basis, c);
        worst = std::max(worst,
                         (tau - 1.7 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
    }
    runtime = timer.seconds();
    out.pass = worst <= 1e-10 && runtime <= 1.0;
    out.detail = "max |tau(c) - c Id| = " + fmt(worst) + " (<=1e-10) over k in {0.5,1,2}";
    return out;
}

// ------------------------------------------------------- criteria 6 and 8
Outcome g_exponential_decay(double& runtime, Outcome& tau_driver) {
    Timer timer;
    Outcome out;
    flow::FlowGrid grid;
    grid.n = 32;
    ModelParams p;
    p.gamma = 2.0;
    auto basis = disk::build_basis(1.0, 16, 16);

    harness::RunConfig icfg;
    icfg.n_x = grid.n;
    icfg.n_r = 16;
    icfg.n_theta = 16;
    icfg.family = "random-band";
    icfg.epsilon = 1e-3;
    icfg.seed = 7;
    icfg.model = p;
    auto s = harness::initial_condition(icfg, grid, basis);

    const double dt = 0.01, t_end = 2.0;
    coupled::Stepper st(grid, basis, p, dt, 2);
    std::vector<diag::EnergyRecord> recs;
    double worst_mean = 0.0;
    bool positive = true;
    const int n_steps = static_cast<int>(std::llround(t_end / dt));
    for (int m = 0; m <= n_steps; ++m) {
        auto rec = diag::energy(grid, basis, s, p);
        if (!recs.empty())
            rec.cum_gradu_Linf = recs.back().cum_gradu_Linf +
                                 0.5 * (recs.back().gradu_Linf + rec.gradu_Linf) * dt;
        recs.push_back(rec);
        worst_mean = std::max(worst_mean, coupled::max_disk_mean(basis, s.g_field));
        positive = positive && rec.min_one_plus_g > 0.0 && rec.min_one_plus_rho > 0.0;
        if (m < n_steps) s = st.step(s);
    }

    std::vector<double> ts, gs;
    for (const auto& r : recs) {
        ts.push_back(r.t);
        gs.push_back(r.g_L2L2);
    }
    auto fit = diag::fit_decay(ts, gs, 0.5 * t_end, t_end, diag::DecayLaw::Exponential);
    const double target = 0.9 * basis.eigenvalues(1);

    runtime = timer.seconds();
    out.pass = (-fit.slope >= target) && worst_mean <= 1e-10 && positive &&
               runtime <= 300.0;
    out.detail = "rate " + fmt(-fit.slope) + " >= 0.9 lambda_1 = " + fmt(target) +
                 ", max |disk mean| " + fmt(worst_mean) + " (<=1e-10), positivity " +
                 (positive ? "held" : "VIOLATED");

    auto tg = diag::check_tau_growth(recs, grid.box_length * grid.box_length);
    tau_driver.pass = tg.sqrt_corr >= 0.99 && tg.tau_late_rate < 0.0;
    tau_driver.detail = "cum ||grad u||_inf vs sqrt(t) correlation " + fmt(tg.sqrt_corr) +
                        " (>=0.99), tau_L1 late rate " + fmt(tg.tau_late_rate) + " (<0)";
    return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome picard_contraction(double& runtime) {
    Timer timer;
    Outcome out;
    flow::FlowGrid grid;
    grid.n = 32;
    ModelParams p;
    p.gamma = 2.0;
    auto basis = disk::build_basis(1.0, 16, 16);

    harness::RunConfig icfg;
    icfg.n_x = grid.n;
    icfg.n_r = 16;
    icfg.n_theta = 16;
    icfg.family = "random-band";
    icfg.epsilon = 1e-3;
    icfg.seed = 7;
    icfg.model = p;
    auto initial = harness::initial_condition(icfg, grid, basis);

    const double T = 0.1, dt = 0.005;
    const int iters = 8;
    auto pr = coupled::picard_iterate(grid, basis, p, initial, T, iters, dt, 2);

    bool contracts = true;
    double worst_ratio = 0.0;
    for (std::size_t n = 2; n < pr.deltas.size(); ++n) {
        if (pr.deltas[n - 1] <= 1e-14) break;
        const double ratio = pr.deltas[n] / pr.deltas[n - 1];
        worst_ratio = std::max(worst_ratio, ratio);
        contracts = contracts && ratio <= 0.5;
    }

    coupled::Stepper st(grid, basis, p, dt, 2);
    auto direct = initial;
    for (int m = 0; m < static_cast<int>(std::llround(T / dt)); ++m) direct = st.step(direct);
    const double dist =
        std::sqrt(coupled::low_norm_sq_diff(grid, basis, pr.limit.back(), direct));

    runtime = timer.seconds();
    out.pass = contracts && dist <= 1e-6 && runtime <= 300.0;
    out.detail = "worst ratio " + fmt(worst_ratio) + " (<=0.5 from 2nd iterate), limit vs "
                 "direct " + fmt(dist) + " (<=1e-6)";
    return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome determinism(double& runtime) {
    Timer timer;
    Outcome out;
    namespace fs = std::filesystem;
    auto base = fs::temp_directory_path() / "fenelab_acceptance";
    fs::remove_all(base);

    harness::RunConfig cfg;
    cfg.n_x = 16;
    cfg.n_r = 12;
    cfg.n_theta = 12;
    cfg.dt = 0.01;
    cfg.t_end = 0.3;
    cfg.family = "random-band";
    cfg.epsilon = 1e-3;
    cfg.seed = 2024;
    cfg.plots = false;
    cfg.mode = harness::RunMode::Simulate;
    cfg.out_dir = (base / "sim_w1").string();
    cfg.workers = 1;
    harness::run(cfg);
    cfg.out_dir = (base / "sim_w2").string();
    cfg.workers = 3;
    harness::run(cfg);
    const bool sim_same =
        slurp(base / "sim_w1" / "series.csv") == slurp(base / "sim_w2" / "series.csv");

    cfg.mode = harness::RunMode::Inequalities;
    cfg.trials = 300;
    cfg.out_dir = (base / "iq_w1").string();
    cfg.workers = 1;
    harness::run(cfg);
    cfg.out_dir = (base / "iq_w2").string();
    cfg.workers = 3;
    harness::run(cfg);
    const bool iq_same =
        slurp(base / "iq_w1" / "ratios.csv") == slurp(base / "iq_w2" / "ratios.csv");

    runtime = timer.seconds();
    out.pass = sim_same && iq_same;
    out.detail = std::string("series.csv ") + (sim_same ? "identical" : "DIFFERS") +
                 ", ratios.csv " + (iq_same ? "identical" : "DIFFERS") +
                 " across worker counts";
    return out;
}

void report(int id, const char* name, const Outcome& o, double seconds, bool& all_ok) {
    std::printf("[%s] criterion %d: %s -- %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id,
                name, o.detail.c_str(), seconds);
    std::fflush(stdout);
    all_ok = all_ok && o.pass;
}

} // namespace

int main() {
    bool all_ok = true;
    double rt = 0.0;

    Outcome o1 = linear_decay_law(rt);
    report(1, "linear decay law", o1, rt, all_ok);

    Outcome o2 = eigen_structure(rt);
    report(2, "eigen-structure of A(xi)", o2, rt, all_ok);

    Outcome o3 = cancellation_and_balance(rt);
    report(3, "co-rotation cancellation and energy balance", o3, rt, all_ok);

    Outcome o4 = poincare_hardy_suites(rt);
    report(4, "Poincare and Hardy suites", o4, rt, all_ok);

    Outcome o5 = stress_identity(rt);
    report(5, "stress identity", o5, rt, all_ok);

    Outcome o8;
    Outcome o6 = g_exponential_decay(rt, o8);
    report(6, "exponential decay of g", o6, rt, all_ok);

    Outcome o7 = picard_contraction(rt);
    report(7, "picard contraction", o7, rt, all_ok);

    report(8, "stress growth driver", o8, 0.0, all_ok);

    Outcome o9 = determinism(rt);
    report(9, "determinism across worker counts", o9, rt, all_ok);

    std::printf("%s\n", all_ok ? "ACCEPTANCE: all criteria passed"
                               : "ACCEPTANCE: some criteria FAILED");
    return all_ok ? 0 : 1;
}
