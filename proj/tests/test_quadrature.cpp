#include <doctest.h>

#include <cmath>

#include "levykit/numerics.hpp"
#include "levykit/quadrature.hpp"

using namespace levykit;

TEST_CASE("adaptive GK reproduces closed-form integrals") {
    auto r = quad::integrate([](double x) { return std::exp(-x * x); }, 0.0, 6.0, 1e-12, 1e-12,
                             500);
    CHECK(r.value == doctest::Approx(std::sqrt(pi) / 2.0).epsilon(1e-12));

    auto s = quad::integrate([](double x) { return std::log(x); }, 0.0, 1.0, 1e-10, 1e-10, 2000);
    CHECK(s.value == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("substituted tail handles power decay") {
    // int_1^inf dx / x^1.5 = 2
    auto r = quad::integrate_tail([](double x) { return std::pow(x, -1.5); }, 1.0, 1e-12, 1e-12,
                                  2000);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
    // int_2^inf dx/(1+x^2) = pi/2 - atan 2
    auto s = quad::integrate_tail([](double x) { return 1.0 / (1.0 + x * x); }, 2.0, 1e-12, 1e-12,
                                  2000);
    CHECK(s.value == doctest::Approx(pi / 2.0 - std::atan(2.0)).epsilon(1e-10));
}

TEST_CASE("oscillatory tail matches the cosine-Lorentz closed form") {
    // int_0^inf cos(a x)/(1+x^2) dx = (pi/2) e^{-a}
    const double a = 1.7;
    auto head = quad::integrate([&](double x) { return std::cos(a * x) / (1.0 + x * x); }, 0.0,
                                4.0, 1e-13, 1e-13, 2000);
    auto tail = quad::oscillatory_tail([](double x) { return 1.0 / (1.0 + x * x); }, a, 4.0,
                                       1e-12, 1e-12, 4000);
    CHECK(head.value + tail.value == doctest::Approx(pi / 2.0 * std::exp(-a)).epsilon(1e-9));
}

TEST_CASE("oscillatory tail converges for slowly decaying envelopes") {
    // int_0^inf cos(x)/sqrt(x) dx = sqrt(pi/2), so the tail beyond L is the
    // closed form minus the (integrable-singular) head
    const double L = 3.0 * pi / 2.0;
    auto acc = quad::oscillatory_tail([](double x) { return 1.0 / std::sqrt(x); }, 1.0, L, 1e-10,
                                      1e-10, 4000);
    auto head = quad::integrate([](double x) { return std::cos(x) / std::sqrt(x); }, 0.0, L,
                                1e-13, 1e-13, 4000);
    const double expected = std::sqrt(pi / 2.0) - head.value;
    CHECK(acc.value == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("endpoint refinement classifies integrable vs divergent") {
    auto conv = quad::integrate_to_zero([](double x) { return 1.0 / std::sqrt(x); }, 1.0, 1e-10,
                                        1e-10, 4000);
    CHECK(!conv.diverged);
    CHECK(!conv.inconclusive);
    CHECK(conv.value == doctest::Approx(2.0).epsilon(1e-8));

    auto div = quad::integrate_to_zero([](double x) { return 1.0 / x; }, 1.0, 1e-10, 1e-10, 4000);
    CHECK(div.diverged);

    auto div2 = quad::integrate_to_zero([](double x) { return std::pow(x, -1.5); }, 1.0, 1e-10,
                                        1e-10, 4000);
    CHECK(div2.diverged);
}

TEST_CASE("whole-line integration with power tails") {
    // int exp(-|x|) dx = 2 and int dx/(1+x^2)^{1.5} = 2
    auto a = quad::integrate_line([](double x) { return std::exp(-std::fabs(x)); }, 4.0, 1e-9,
                                  1e-9, 4000);
    CHECK(a.value == doctest::Approx(2.0).epsilon(1e-8));
    auto b = quad::integrate_line([](double x) { return std::pow(1.0 + x * x, -1.5); }, 4.0, 1e-9,
                                  1e-9, 4000);
    CHECK(b.value == doctest::Approx(2.0).epsilon(1e-6));
    auto c = quad::integrate_line([](double x) { return std::pow(1.0 + x * x, -1.5); }, 4.0, 1e-9,
                                  1e-9, 4000, 1e7, true);
    CHECK(c.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("pairwise sum is order-stable and exact on small sets") {
    std::vector<double> v{1.0, 2.0, 3.0, 4.5};
    CHECK(pairwise_sum(v) == 10.5);
}

TEST_CASE("natural cubic spline interpolates smooth data") {
    std::vector<double> x, y;
    for (int i = 0; i <= 40; ++i) {
        x.push_back(i * 0.1);
        y.push_back(std::sin(x.back()));
    }
    CubicSpline s(x, y);
    CHECK(s(1.234) == doctest::Approx(std::sin(1.234)).epsilon(1e-6));
    CHECK(s(3.9) == doctest::Approx(std::sin(3.9)).epsilon(1e-6));
}
