#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fenelab/inequalities.hpp"

using namespace fenelab;
using namespace fenelab::ineq;

TEST_CASE("tau interpolation: finite, seed-stable, monotone in delta") {
    auto basis = disk::build_basis(1.0, 16, 16);
    auto rep_a = check_tau_interpolation(basis, 0.1, 1000, 11);
    auto rep_b = check_tau_interpolation(basis, 0.1, 1000, 517);
    CHECK(std::isfinite(rep_a.worst_ratio));
    CHECK(rep_a.worst_ratio >= 0.0);
    CHECK(std::abs(rep_a.worst_ratio - rep_b.worst_ratio) <= 0.10 * rep_b.worst_ratio);

    auto rep_small_delta = check_tau_interpolation(basis, 0.01, 1000, 11);
    CHECK(rep_small_delta.worst_ratio >= rep_a.worst_ratio);
    CHECK(!rep_a.violated);
    CHECK(rep_a.worst_trial >= 0);
    CHECK(rep_a.worst_sample.size() == basis.size());
}

TEST_CASE("tau Lp bound holds over random and boundary-adversarial samples") {
    auto basis = disk::build_basis(1.0, 16, 16);
    auto rep = check_tau_lp(basis, 3.0, 1000, 23);
    CHECK(rep.worst_ratio > 0.0);
    CHECK(!rep.violated);

    // hypothesis (p-1)k > 1 is enforced
    auto b_half = disk::build_basis(0.5, 16, 16);
    CHECK_THROWS_AS(check_tau_lp(b_half, 2.0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(check_tau_lp(basis, 1.5, 10, 1), std::invalid_argument);
}

TEST_CASE("tau Hardy-type interpolation for small and large k") {
    for (double k : {0.5, 2.0}) {
        auto basis = disk::build_basis(k, 16, 16);
        auto rep = check_tau_hardy(basis, 1000, 37);
        CHECK(rep.worst_ratio > 0.0);
        CHECK(!rep.violated);
    }
}

TEST_CASE("worst ratios are stable under resolution doubling") {
    auto coarse = disk::build_basis(1.0, 16, 16);
    auto fine = disk::build_basis(1.0, 32, 32);
    const std::uint64_t seed = 4242;

    auto ri_c = check_tau_interpolation(coarse, 0.1, 400, seed);
    auto ri_f = check_tau_interpolation(fine, 0.1, 400, seed);
    CHECK(std::abs(ri_c.worst_ratio - ri_f.worst_ratio) <= 0.05 * ri_f.worst_ratio);

    auto rl_c = check_tau_lp(coarse, 3.0, 400, seed);
    auto rl_f = check_tau_lp(fine, 3.0, 400, seed);
    CHECK(std::abs(rl_c.worst_ratio - rl_f.worst_ratio) <= 0.05 * rl_f.worst_ratio);

    auto rh_c = check_tau_hardy(coarse, 400, seed);
    auto rh_f = check_tau_hardy(fine, 400, seed);
    CHECK(std::abs(rh_c.worst_ratio - rh_f.worst_ratio) <= 0.05 * rh_f.worst_ratio);
}

TEST_CASE("reports are deterministic across worker counts") {
    auto basis = disk::build_basis(1.0, 16, 16);
    auto one = check_tau_hardy(basis, 200, 99, 10.0, {}, 1);
    auto two = check_tau_hardy(basis, 200, 99, 10.0, {}, 2);
    REQUIRE(one.ratios.size() == two.ratios.size());
    for (std::size_t i = 0; i < one.ratios.size(); ++i)
        CHECK(one.ratios[i] == two.ratios[i]);
    CHECK(one.worst_trial == two.worst_trial);
}

TEST_CASE("1-D boundary inequality: analytic example and parameter sweep") {
    auto zero = [](double) { return 0.0; };
    auto res0 = hardy_1d(zero, zero, 0.5);
    CHECK(res0.lhs == 0.0);
    CHECK(res0.factor1 == 0.0);
    CHECK(res0.factor2 == 0.0);

    // psi = x, k = 1/2: lhs = 1, factors (2/5, 1/2), ratio ~ 1.5376
    auto idf = [](double x) { return x; };
    auto did = [](double) { return 1.0; };
    auto res = hardy_1d(idf, did, 0.5);
    CHECK(res.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.factor1 == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(res.factor2 == doctest::Approx(0.5).epsilon(1e-6));
    const double ratio = hardy_ratio(res, 0.5);
    const double expect = 1.0 / (std::pow(0.4, 0.375) * std::pow(0.5, 0.125));
    CHECK(std::abs(ratio - expect) < 1e-6);
    CHECK(std::abs(ratio - 1.538) < 1e-3);

    // power family stays uniformly bounded (divergent factors only help)
    for (double a : {0.6, 0.8, 1.0, 1.5, 2.0, 3.0}) {
        auto psi = [a](double x) { return std::pow(x, a); };
        auto dpsi = [a](double x) { return a * std::pow(x, a - 1.0); };
        auto r = hardy_1d(psi, dpsi, 0.5);
        CHECK(std::isfinite(hardy_ratio(r, 0.5)));
        CHECK(hardy_ratio(r, 0.5) < 5.0);
    }
}

TEST_CASE("k = 1 family: degenerate linear sample, analytic power sample") {
    auto idf = [](double x) { return x; };
    auto did = [](double) { return 1.0; };
    auto res_lin = hardy_1d_k1(idf, did, 1);
    CHECK(res_lin.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res_lin.factor1 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(res_lin.degenerate); // (psi/x)' = 0: excluded sample

    auto psi = [](double x) { return std::pow(x, 1.5); };
    auto dpsi = [](double x) { return 1.5 * std::sqrt(x); };
    auto res = hardy_1d_k1(psi, dpsi, 1);
    CHECK(res.lhs == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(res.factor1 == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(res.factor2 == doctest::Approx(0.25).epsilon(1e-9));
    for (int n : {1, 2, 3}) {
        const double nn = n;
        const double expect = (2.0 / 3.0) / (std::pow(1.0 / 3.0, nn / (2 * nn + 1)) *
                                             std::pow(0.25, 1.0 / (4 * nn + 2)));
        CHECK(hardy_ratio_k1(res, n) == doctest::Approx(expect).epsilon(1e-8));
        CHECK(hardy_ratio_k1(res, n) < 5.0);
    }
    CHECK_THROWS_AS(hardy_1d_k1(psi, dpsi, 0), std::invalid_argument);
}

TEST_CASE("sampled Poincare ratios never exceed the eigenvalue bound") {
    auto basis = disk::build_basis(1.0, 16, 16);
    const double c = disk::poincare_constant(basis);
    Rng rng(2718);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        Eigen::VectorXd g = random_mean_zero_g(basis, rng);
        const double dn = basis.grad_norm(g);
        if (dn > 0.0) worst = std::max(worst, basis.norm(g) / dn);
    }
    CHECK(worst <= c + 1e-9);
}
