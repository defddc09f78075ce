#include <doctest.h>

#include <cmath>

#include "levykit/levy_model.hpp"
#include "levykit/numerics.hpp"
#include "levykit/spectral_kernels.hpp"
#include "levykit/time_domain.hpp"

using namespace levykit;
namespace td = levykit::timedomain;

namespace {

const SymmetricLevyModel& bm() {
    static auto m = SymmetricLevyModel::brownian();
    return m;
}
const SymmetricLevyModel& st15() {
    static auto m = SymmetricLevyModel::stable(1.5);
    return m;
}
const SymmetricLevyModel& mix() {
    static auto m = SymmetricLevyModel::stable_mixture({{0.5, 1.0}, {1.5, 1.0}});
    return m;
}

// closed forms for theta = |lambda|^alpha, from the tabulated Laplace pairs
double R_stable(double alpha, double t) {
    return alpha * std::sin(pi / alpha) * std::pow(t, 1.0 / alpha - 1.0) /
           std::tgamma(1.0 / alpha);
}
double rho_stable(double alpha, double t) {
    return (alpha - 1.0) * std::sin(pi / alpha) / std::tgamma(1.0 / alpha) *
           std::pow(t, 1.0 / alpha - 2.0);
}
double rho_brownian(double t, double x) {
    return std::fabs(x) * std::exp(-x * x / (4.0 * t)) /
           (2.0 * std::sqrt(pi) * std::pow(t, 1.5));
}

}  // namespace

TEST_CASE("lifetime survival matches the Brownian and stable closed forms") {
    CHECK(td::lifetime_survival(bm(), 1.0) ==
          doctest::Approx(2.0 / std::sqrt(pi)).epsilon(1e-8));
    for (double t : {0.25, 1.0, 4.0}) {
        CHECK(td::lifetime_survival(bm(), t) ==
              doctest::Approx(2.0 / std::sqrt(pi * t)).epsilon(1e-8));
        CHECK(td::lifetime_survival(st15(), t) ==
              doctest::Approx(R_stable(1.5, t)).epsilon(1e-8));
    }
}

TEST_CASE("lifetime survival approaches kappa for the transient mixture") {
    const double k = spectral::kappa(mix());
    const double r64 = td::lifetime_survival(mix(), 64.0);
    const double r256 = td::lifetime_survival(mix(), 256.0);
    CHECK(r64 > k);
    CHECK(r256 > k);
    CHECK(r256 - k < r64 - k);
    CHECK(r256 == doctest::Approx(k).epsilon(0.05));
}

TEST_CASE("lifetime density: stable coefficient and the Brownian value") {
    CHECK(td::lifetime_density(bm(), 1.0) == doctest::Approx(1.0 / std::sqrt(pi)).epsilon(1e-7));
    for (double t : {0.5, 1.0, 2.0})
        CHECK(td::lifetime_density(st15(), t) ==
              doctest::Approx(rho_stable(1.5, t)).epsilon(1e-7));
}

TEST_CASE("gaver-stehfest fallback reproduces the closed forms") {
    td::LaplaceInversionConfig gs;
    gs.method = td::LaplaceInversionConfig::Method::gaver_stehfest;
    gs.node_count = 14;
    CHECK(td::lifetime_survival(bm(), 1.0, {}, gs) ==
          doctest::Approx(2.0 / std::sqrt(pi)).epsilon(1e-6));
    CHECK(td::lifetime_survival(st15(), 2.0, {}, gs) ==
          doctest::Approx(R_stable(1.5, 2.0)).epsilon(1e-6));
    CHECK(td::lifetime_density(st15(), 1.0, {}, gs) ==
          doctest::Approx(rho_stable(1.5, 1.0)).epsilon(1e-4));
    td::LaplaceInversionConfig odd = gs;
    odd.node_count = 13;
    CHECK_THROWS(td::lifetime_survival(bm(), 1.0, {}, odd));
}

TEST_CASE("entrance density: Brownian closed form") {
    // inversion accuracy is bounded by the Talbot noise amplification of the
    // contour-point quadrature (~1e-7), not by the 1e-12 inner tolerance
    CHECK(td::entrance_density(bm(), 1.0, 1.0) ==
          doctest::Approx(rho_brownian(1.0, 1.0)).epsilon(1e-6));
    CHECK(td::entrance_density(bm(), 0.5, -1.3) ==
          doctest::Approx(rho_brownian(0.5, 1.3)).epsilon(1e-6));
    // equivalently e^{-1/4}/(2 sqrt(pi)) at t = x = 1
    CHECK(td::entrance_density(bm(), 1.0, 1.0) ==
          doctest::Approx(std::exp(-0.25) / (2.0 * std::sqrt(pi))).epsilon(1e-6));
}

TEST_CASE("entrance density cross-method agreement") {
    const double direct = td::entrance_density(st15(), 1.0, 1.0);
    const double alt = td::entrance_density_alt(st15(), 1.0, 1.0);
    CHECK(alt == doctest::Approx(direct).epsilon(1e-3));
    const double d2 = td::entrance_density(st15(), 0.5, 0.7);
    const double a2 = td::entrance_density_alt(st15(), 0.5, 0.7);
    CHECK(a2 == doctest::Approx(d2).epsilon(1e-3));
}

TEST_CASE("entrance density boundary row approaches the lifetime density") {
    const double rho = td::lifetime_density(st15(), 1.0);
    double prev = 1e9;
    for (int k = 2; k <= 6; ++k) {
        const double x = std::ldexp(1.0, -k);
        const double ratio =
            td::entrance_density(st15(), 1.0, x) / spectral::h_approx(st15(), 0.0, x).value;
        const double gap = std::fabs(ratio - rho);
        CHECK(gap < prev * (1.0 + 1e-6));
        prev = gap;
    }
    CHECK(prev / rho < 1e-2);
}

TEST_CASE("killed transition: Brownian reflection principle") {
    // image charges for the killed motion: p_t(y-x) - p_t(y+x) on one side
    const double expect = (1.0 - std::exp(-1.0)) / (2.0 * std::sqrt(pi));
    CHECK(td::killed_transition(bm(), 1.0, 1.0, 1.0) == doctest::Approx(expect).epsilon(1e-6));
    const double e2 = (std::exp(-0.25) - std::exp(-2.25)) / (2.0 * std::sqrt(pi));
    CHECK(td::killed_transition(bm(), 1.0, 1.0, 2.0) == doctest::Approx(e2).epsilon(1e-6));
}

TEST_CASE("killed transition is dominated by the free density and symmetric") {
    for (auto [x, y] : {std::pair{0.7, 1.5}, std::pair{1.0, -1.0}}) {
        const double v = td::killed_transition(st15(), 1.0, x, y);
        CHECK(v >= 0.0);
        CHECK(v <= spectral::transition_p(st15(), 1.0, y - x).value + 1e-10);
        CHECK(td::killed_transition(st15(), 1.0, y, x) == doctest::Approx(v).epsilon(1e-5));
    }
}

TEST_CASE("h-path transition rows") {
    // corner equals the lifetime density by definition
    CHECK(td::hpath_transition(st15(), 1.0, 0.0, 0.0) ==
          doctest::Approx(td::lifetime_density(st15(), 1.0)).epsilon(1e-12));
    // boundary row
    const double x = 0.8;
    CHECK(td::hpath_transition(st15(), 1.0, x, 0.0) ==
          doctest::Approx(td::entrance_density(st15(), 1.0, x) /
                          spectral::h_approx(st15(), 0.0, x).value)
              .epsilon(1e-10));
    // interior symmetry
    const double ab = td::hpath_transition(st15(), 1.0, 0.7, 1.4);
    const double ba = td::hpath_transition(st15(), 1.0, 1.4, 0.7);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-4));
}

TEST_CASE("time grid validation and batch evaluation") {
    CHECK_THROWS(td::TimeGrid({}));
    CHECK_THROWS(td::TimeGrid({1.0, 1.0}));
    CHECK_THROWS(td::TimeGrid({-1.0, 1.0}));
    td::TimeGrid grid({0.5, 1.0, 2.0});
    const auto R = td::lifetime_survival_grid(st15(), grid);
    REQUIRE(R.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(R[i] == doctest::Approx(R_stable(1.5, grid.times[i])).epsilon(1e-8));
    const auto rho = td::lifetime_density_grid(st15(), grid);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(rho[i] == doctest::Approx(rho_stable(1.5, grid.times[i])).epsilon(1e-7));
}

TEST_CASE("survival is completely monotone on a sampled grid") {
    std::vector<double> ts{0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    std::vector<double> R(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) R[i] = td::lifetime_survival(st15(), ts[i]);
    std::vector<double> d = R;
    for (int order = 1; order <= 3; ++order) {
        for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
        d.pop_back();
        const double sign = (order % 2 == 0) ? 1.0 : -1.0;
        for (double v : d) CHECK(v * sign >= 0.0);
    }
}
