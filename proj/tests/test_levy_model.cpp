#include <doctest.h>

#include <cmath>

#include "levykit/conditions.hpp"
#include "levykit/levy_model.hpp"
#include "levykit/model_config.hpp"
#include "levykit/numerics.hpp"
#include "levykit/quadrature.hpp"
#include "levykit/rng.hpp"

using namespace levykit;

TEST_CASE("stable exponent agrees with |lambda|^alpha across the band") {
    auto m = SymmetricLevyModel::stable(1.5);
    for (double lam = 1e-3; lam <= 1e3; lam *= 3.7) {
        CHECK(m.theta(lam) == doctest::Approx(std::pow(lam, 1.5)).epsilon(1e-10));
        CHECK(m.theta(-lam) == m.theta(lam));
    }
    CHECK(m.theta(0.0) == 0.0);
    CHECK(m.theta(2.0) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
}

TEST_CASE("exponent symmetry and vanishing at zero across families") {
    CounterRng rng(7, 0);
    std::vector<SymmetricLevyModel> models;
    models.push_back(SymmetricLevyModel::brownian());
    models.push_back(SymmetricLevyModel::stable_mixture({{0.5, 1.0}, {1.5, 1.0}}));
    models.push_back(SymmetricLevyModel::tempered_stable(0.8, 1.0, 1.0));
    models.push_back(SymmetricLevyModel::point_masses({{1.0, 1.0}, {2.5, 0.25}}));
    for (int i = 0; i < 4; ++i) {
        const double a = 1.0 + rng.uniform() * 0.9;
        const double c = 0.25 + rng.uniform();
        models.push_back(SymmetricLevyModel::stable(a, c));
    }
    for (const auto& m : models) {
        CHECK(m.theta(0.0) == 0.0);
        for (int i = 0; i < 12; ++i) {
            const double lam = std::exp((rng.uniform() - 0.5) * 12.0);
            CHECK(m.theta(lam) == m.theta(-lam));
            CHECK(m.theta(lam) >= 0.0);
        }
    }
}

TEST_CASE("point-mass exponent at the half period") {
    auto m = SymmetricLevyModel::point_masses({{1.0, 1.0}});
    CHECK(m.theta(pi) == doctest::Approx(4.0).epsilon(1e-13));  // 2 m (1 - cos pi)
}

TEST_CASE("tempered-stable closed form against the defining integral") {
    const double alpha = 0.8, scale = 1.0, rate = 1.3;
    auto m = SymmetricLevyModel::tempered_stable(alpha, scale, rate);
    auto nu = [&](double x) { return scale * std::exp(-rate * x) / std::pow(x, 1.0 + alpha); };
    for (double lam : {0.3, 1.0, 4.0, 17.0}) {
        auto near = quad::integrate_to_zero([&](double x) { return one_minus_cos(lam * x) * nu(x); },
                                            1.0, 1e-13, 1e-11, 4000);
        auto flat = quad::integrate_tail(nu, 1.0, 1e-13, 1e-11, 4000);
        auto osc = quad::oscillatory_tail(nu, lam, 1.0, 1e-13, 1e-11, 4000);
        const double direct = 2.0 * (near.value + flat.value - osc.value);
        CHECK(m.theta(lam) == doctest::Approx(direct).epsilon(1e-8));
    }
    // alpha in (1,2) exercises the other branch of the gamma prefactor
    const double a2 = 1.6;
    auto m2 = SymmetricLevyModel::tempered_stable(a2, 0.7, 0.9);
    auto nu2 = [&](double x) { return 0.7 * std::exp(-0.9 * x) / std::pow(x, 1.0 + a2); };
    for (double lam : {0.5, 2.0, 9.0}) {
        auto near = quad::integrate_to_zero(
            [&](double x) { return one_minus_cos(lam * x) * nu2(x); }, 1.0, 1e-13, 1e-11, 4000);
        auto flat = quad::integrate_tail(nu2, 1.0, 1e-13, 1e-11, 4000);
        auto osc = quad::oscillatory_tail(nu2, lam, 1.0, 1e-13, 1e-11, 4000);
        const double direct = 2.0 * (near.value + flat.value - osc.value);
        CHECK(m2.theta(lam) == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("user-density model reproduces a stable exponent through quadrature") {
    // nu(x) = c x^{-1-alpha} gives theta = |lambda|^alpha when c matches the
    // known normalization 2 int (1-cos u) u^{-1-alpha} du = 1
    const double alpha = 1.5;
    const double norm = -std::tgamma(-alpha) * std::cos(pi * alpha / 2.0);
    const double c = 1.0 / (2.0 * norm);
    auto m = SymmetricLevyModel::from_user_density(
        {[c, alpha](double x) { return c * std::pow(x, -1.0 - alpha); }, 1.0 + alpha, alpha});
    for (double lam : {0.01, 0.5, 1.0, 20.0, 900.0})
        CHECK(m.theta(lam) == doctest::Approx(std::pow(lam, alpha)).epsilon(1e-6));
}

TEST_CASE("condition checks classify the standard examples") {
    QuadratureConfig cfg;
    SUBCASE("stable 1.5: everything holds, recurrent") {
        auto rep = check_conditions(SymmetricLevyModel::stable(1.5), cfg);
        CHECK(rep.passes_A);
        CHECK(rep.passes_B);
        CHECK(rep.passes_T);
        CHECK(rep.is_recurrent);
        CHECK(rep.kappa == 0.0);
    }
    SUBCASE("brownian: (B) fails, still recurrent") {
        auto rep = check_conditions(SymmetricLevyModel::brownian(), cfg);
        CHECK(rep.passes_A);
        CHECK(!rep.passes_B);
        CHECK(rep.passes_T);
        CHECK(rep.is_recurrent);
    }
    SUBCASE("stable 1: condition (A) integral diverges") {
        auto rep = check_conditions(SymmetricLevyModel::stable(1.0), cfg);
        CHECK(!rep.passes_A);
    }
    SUBCASE("transient mixture: kappa = 1") {
        auto rep = check_conditions(
            SymmetricLevyModel::stable_mixture({{0.5, 1.0}, {1.5, 1.0}}), cfg);
        CHECK(rep.passes_A);
        CHECK(rep.passes_T);
        CHECK(!rep.is_recurrent);
        CHECK(rep.kappa == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("point masses without Gaussian part: compound Poisson fails (A)") {
        auto rep = check_conditions(SymmetricLevyModel::point_masses({{1.0, 1.0}}), cfg);
        CHECK(!rep.passes_A);
        CHECK(!rep.passes_T);  // oscillating exponent
    }
}

TEST_CASE("passes_B forces a zero Gaussian coefficient") {
    QuadratureConfig cfg;
    auto with_gauss = SymmetricLevyModel::stable_mixture({{2.0, 0.5}, {1.5, 1.0}});
    auto rep = check_conditions(with_gauss, cfg);
    CHECK(with_gauss.gaussian_coeff() > 0.0);
    CHECK(!rep.passes_B);
}

TEST_CASE("model config parser round trips the supported families") {
    auto stable = parse_model_config("model = stable\nalpha = 1.5\n");
    CHECK(stable.model.describe() == SymmetricLevyModel::stable(1.5).describe());

    auto mix = parse_model_config("# comment\nmodel = stable_mixture\nalphas = 0.5, 1.5\n"
                                  "scales = 1, 1\n");
    CHECK(mix.model.describe() ==
          SymmetricLevyModel::stable_mixture({{0.5, 1.0}, {1.5, 1.0}}).describe());

    auto pm = parse_model_config("model = point_masses\nlocations = 1, 2\nmasses = 0.5, 0.25\n"
                                 "gaussian_coeff = 1\nlambda0 = 2\n");
    CHECK(pm.lambda0 == 2.0);
    CHECK(pm.model.gaussian_coeff() == 1.0);

    CHECK_THROWS(parse_model_config("model = stable\n"));              // missing alpha
    CHECK_THROWS(parse_model_config("model = stable\nalpha = 1.5\nbogus = 2\n"));
    CHECK_THROWS(parse_model_config("model = nope\n"));
    CHECK_THROWS(parse_model_config("alpha = 1.5\n"));
}

TEST_CASE("model validation rejects out-of-range parameters") {
    CHECK_THROWS(SymmetricLevyModel::stable(2.5));
    CHECK_THROWS(SymmetricLevyModel::stable(0.0));
    CHECK_THROWS(SymmetricLevyModel::tempered_stable(1.0, 1.0, 1.0));  // alpha = 1 excluded
    CHECK_THROWS(SymmetricLevyModel::from_user_density(
        {[](double) { return 1.0; }, 3.5, 1.0}));  // singularity too strong
}
