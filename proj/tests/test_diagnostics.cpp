#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fenelab/diagnostics.hpp"
#include "fenelab/rng.hpp"

using namespace fenelab;
using namespace fenelab::diag;

namespace {

ModelParams default_params() {
    ModelParams p;
    p.mu = 1.0;
    p.mu_prime = 0.0;
    p.gamma = 2.0;
    p.a = 1.0;
    p.d = 2;
    return p;
}

} // namespace

TEST_CASE("equilibrium has zero energy and dissipation") {
    flow::FlowGrid grid;
    grid.n = 8;
    auto basis = disk::build_basis(1.0, 8, 8);
    auto p = default_params();
    auto s = coupled::CoupledState::zero(grid, basis);
    auto rec = energy(grid, basis, s, p);
    CHECK(rec.E == 0.0);
    CHECK(rec.D == 0.0);
    CHECK(rec.min_one_plus_rho == doctest::Approx(1.0));
    CHECK(rec.min_one_plus_g == doctest::Approx(1.0));
}

TEST_CASE("single velocity mode reproduces the multiplier formula") {
    flow::FlowGrid grid;
    grid.n = 16;
    auto basis = disk::build_basis(1.0, 8, 8);
    auto p = default_params();
    auto s = coupled::CoupledState::zero(grid, basis);

    const double c = 3e-2;
    s.flow_state.u_hat[0](grid.index(2, 0)) = Cplx(0.0, -0.5 * c);
    s.flow_state.u_hat[0](grid.index(grid.n - 2, 0)) = Cplx(0.0, 0.5 * c);

    const double s_disc = 2.0;
    auto rec = energy(grid, basis, s, p, s_disc);
    const double vol = grid.box_length * grid.box_length;
    const double kap = grid.kappa(2);
    const double u_l2_sq = vol * 2.0 * (0.25 * c * c);
    const double expect_E = (1.0 + std::pow(kap * kap, s_disc)) * u_l2_sq;
    CHECK(rec.E == doctest::Approx(expect_E).epsilon(1e-12));
    CHECK(rec.u_L2 == doctest::Approx(std::sqrt(u_l2_sq)).epsilon(1e-12));
    CHECK(rec.rho_L2 == 0.0);
    CHECK(rec.g_L2L2 == 0.0);
}

TEST_CASE("dissipation vanishes exactly on spatially constant states with flat g") {
    flow::FlowGrid grid;
    grid.n = 8;
    auto basis = disk::build_basis(1.0, 12, 12);
    auto p = default_params();
    auto s = coupled::CoupledState::zero(grid, basis);

    // constant density shift, constant velocity, g constant over the disk
    s.flow_state.rho_hat(0) = Cplx(0.05, 0.0);
    s.flow_state.u_hat[0](0) = Cplx(0.2, 0.0);
    Rng rng(3);
    for (int c = 0; c < grid.size(); ++c)
        s.g_field.col(c).setConstant(0.1);
    auto rec = energy(grid, basis, s, p);
    CHECK(rec.D <= 1e-12);
    CHECK(rec.E > 0.0);

    s.g_field(0, 0) += 1e-3; // disk-varying perturbation switches dissipation on
    auto rec2 = energy(grid, basis, s, p);
    CHECK(rec2.D > 1e-12);
}

TEST_CASE("g-balance residual: zero at equilibrium, first order in dt") {
    flow::FlowGrid grid;
    grid.n = 4;
    auto basis = disk::build_basis(1.0, 12, 12);
    auto p = default_params();

    // equilibrium: residual identically zero
    {
        auto s = coupled::CoupledState::zero(grid, basis);
        std::vector<EnergyRecord> recs;
        coupled::Stepper st(grid, basis, p, 0.01);
        for (int m = 0; m < 3; ++m) {
            recs.push_back(energy(grid, basis, s, p));
            s = st.step(s);
        }
        for (double r : check_g_balance(recs, 0.01)) CHECK(r == 0.0);
    }

    // pure relaxation: the residual converges at first order
    auto residual_at = [&](double dt) {
        auto s = coupled::CoupledState::zero(grid, basis);
        s.g_field = (0.7 * basis.eigenvectors.col(1) - 0.4 * basis.eigenvectors.col(3)) *
                    Eigen::RowVectorXd::Ones(grid.size());
        coupled::Stepper st(grid, basis, p, dt);
        std::vector<EnergyRecord> recs;
        const int n_steps = static_cast<int>(std::llround(0.4 / dt));
        for (int m = 0; m <= n_steps; ++m) {
            recs.push_back(energy(grid, basis, s, p));
            if (m < n_steps) s = st.step(s);
        }
        double worst = 0.0;
        for (double r : check_g_balance(recs, dt)) worst = std::max(worst, std::abs(r));
        return worst;
    };
    const double r1 = residual_at(0.02);
    const double r2 = residual_at(0.01);
    const double r3 = residual_at(0.005);
    const double order = std::log(r1 / r3) / std::log(4.0);
    CHECK(order >= 0.9);
    CHECK(r2 < r1);

    // nonuniform spacing is rejected
    std::vector<EnergyRecord> bad(3);
    bad[0].t = 0.0;
    bad[1].t = 0.01;
    bad[2].t = 0.03;
    CHECK_THROWS_AS(check_g_balance(bad, 0.01), std::invalid_argument);
}

TEST_CASE("tau growth report: quiet run, synthetic sqrt driver, late decay") {
    std::vector<EnergyRecord> recs(80);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const double t = 0.1 * static_cast<double>(i + 1);
        recs[i].t = t;
        recs[i].cum_gradu_Linf = 0.0;
        recs[i].tau_L1 = 0.0;
    }
    auto quiet = check_tau_growth(recs, 1.0);
    CHECK(quiet.sqrt_fit_C == 0.0);

    for (std::size_t i = 0; i < recs.size(); ++i) {
        const double t = recs[i].t;
        recs[i].cum_gradu_Linf = 2.0 * std::sqrt(t);
        recs[i].tau_L1 = 5.0 * std::exp(-0.8 * t);
        recs[i].g_L2L2 = 1.0;
        recs[i].gradRg_L2L2 = 1.0;
    }
    auto rep = check_tau_growth(recs, 1.0);
    CHECK(rep.sqrt_fit_C == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.sqrt_corr == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.tau_late_rate == doctest::Approx(-0.8).epsilon(1e-9));
    CHECK(rep.bound_ratio_sup > 0.0);

    std::vector<EnergyRecord> few(10);
    CHECK_THROWS_AS(check_tau_growth(few, 1.0), std::invalid_argument);
}

TEST_CASE("decay fit: exact algebraic law, scaling invariance, error paths") {
    std::vector<double> ts, vs;
    for (int i = 0; i <= 40; ++i) {
        const double t = 1.0 + 0.5 * i;
        ts.push_back(t);
        vs.push_back(2.7 * std::pow(1.0 + t, -0.75));
    }
    auto fit = fit_decay(ts, vs, 1.0, 25.0, DecayLaw::Algebraic);
    CHECK(std::abs(fit.slope + 0.75) < 1e-6);
    CHECK(fit.residual < 1e-12);

    std::vector<double> vs_scaled = vs;
    for (double& v : vs_scaled) v *= 1234.5;
    auto fit2 = fit_decay(ts, vs_scaled, 1.0, 25.0, DecayLaw::Algebraic);
    CHECK(std::abs(fit2.slope - fit.slope) < 1e-12);

    std::vector<double> es;
    for (double t : ts) es.push_back(0.3 * std::exp(-1.7 * t));
    auto fite = fit_decay(ts, es, 1.0, 25.0, DecayLaw::Exponential);
    CHECK(std::abs(fite.slope + 1.7) < 1e-9);

    std::vector<double> bad = vs;
    bad[5] = -1.0;
    CHECK_THROWS_AS(fit_decay(ts, bad, 1.0, 25.0, DecayLaw::Algebraic), std::domain_error);
    CHECK_THROWS_AS(fit_decay(ts, vs, 5.0, 5.0, DecayLaw::Algebraic), std::invalid_argument);
}

TEST_CASE("csv row round-trips the fixed column order") {
    EnergyRecord r;
    r.t = 0.25;
    r.E = 1.5;
    r.D = 0.5;
    r.rho_L2 = 0.1;
    std::string header = csv_header();
    CHECK(header.substr(0, 6) == "t,E,D,");
    std::string row = csv_row(r);
    CHECK(row.substr(0, 5) == "0.25,");
    CHECK(std::count(row.begin(), row.end(), ',') ==
          std::count(header.begin(), header.end(), ','));
}
