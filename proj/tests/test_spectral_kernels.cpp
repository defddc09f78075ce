#include <doctest.h>

#include <cmath>
#include <complex>

#include "levykit/levy_model.hpp"
#include "levykit/numerics.hpp"
#include "levykit/rng.hpp"
#include "levykit/spectral_kernels.hpp"

using namespace levykit;
namespace sk = levykit::spectral;

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

// closed form for the Brownian resolvent density under theta = lambda^2
double u_brownian(double q, double x) {
    return std::exp(-std::sqrt(q) * std::fabs(x)) / (2.0 * std::sqrt(q));
}

// u_q(0) for theta = |lambda|^alpha via the beta integral
double u0_stable(double alpha, double q) {
    return std::pow(q, 1.0 / alpha - 1.0) / (alpha * std::sin(pi / alpha));
}

// independent oracle for (1/pi) int_0^inf (1 - cos lambda)/lambda^s dlambda:
// explicit half-period panels to Z plus a two-term integration-by-parts tail
double harmonic_integral_oracle(double s) {
    const double Z = 127.5 * pi;
    double head = 0.0;
    double a = 0.0;
    while (a < Z) {
        const double b = std::min(a + pi / 2.0, Z);
        head += quad::integrate(
                    [&](double lam) { return one_minus_cos(lam) / std::pow(lam, s); }, a, b,
                    1e-15, 1e-14, 80)
                    .value;
        a = b;
    }
    const double flat_tail = std::pow(Z, 1.0 - s) / (s - 1.0);
    const double cos_tail =
        -std::sin(Z) * std::pow(Z, -s) + s * std::cos(Z) * std::pow(Z, -s - 1.0);
    return (head + flat_tail - cos_tail) / pi;
}

}  // namespace

TEST_CASE("resolvent density against the Brownian closed form") {
    CHECK(sk::resolvent_u(bm(), 1.0, 0.0).value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(sk::resolvent_u(bm(), 4.0, 1.0).value ==
          doctest::Approx(std::exp(-2.0) / 4.0).epsilon(1e-10));
    for (double x : {0.25, 1.0, 3.5})
        for (double q : {0.5, 1.0, 4.0})
            CHECK(sk::resolvent_u(bm(), q, x).value ==
                  doctest::Approx(u_brownian(q, x)).epsilon(1e-9));
}

TEST_CASE("resolvent density at zero for the stable family") {
    CHECK(sk::resolvent_u(st15(), 1.0, 0.0).value ==
          doctest::Approx(u0_stable(1.5, 1.0)).epsilon(1e-10));
    CHECK(sk::resolvent_u(st15(), 3.0, 0.0).value ==
          doctest::Approx(u0_stable(1.5, 3.0)).epsilon(1e-10));
    CHECK(sk::resolvent_u(SymmetricLevyModel::stable(1.2), 2.0, 0.0).value ==
          doctest::Approx(u0_stable(1.2, 2.0)).epsilon(1e-10));
}

TEST_CASE("resolvent symmetry and maximum at the origin") {
    CounterRng rng(11, 0);
    for (int i = 0; i < 8; ++i) {
        const double q = 0.25 + 3.0 * rng.uniform();
        const double x = (rng.uniform() - 0.5) * 6.0;
        const auto a = sk::resolvent_u(st15(), q, x);
        const auto b = sk::resolvent_u(st15(), q, -x);
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-11));
        CHECK(a.value > 0.0);
        CHECK(a.value <= sk::resolvent_at_zero(st15(), q).value + 1e-12);
    }
}

TEST_CASE("complex resolvent agrees with the real one on the real axis") {
    const auto real = sk::resolvent_u(st15(), 2.0, 0.7);
    const auto cplx = sk::resolvent_u_complex(st15(), {2.0, 0.0}, 0.7);
    CHECK(cplx.value.real() == doctest::Approx(real.value).epsilon(1e-10));
    CHECK(std::fabs(cplx.value.imag()) < 1e-12);
    // conjugate symmetry off the axis, including left-half-plane contour points
    const std::complex<double> q(-3.0, 4.0);
    const auto up = sk::resolvent_u_complex(st15(), q, 0.7);
    const auto dn = sk::resolvent_u_complex(st15(), std::conj(q), 0.7);
    CHECK(up.value.real() == doctest::Approx(dn.value.real()).epsilon(1e-9));
    CHECK(up.value.imag() == doctest::Approx(-dn.value.imag()).epsilon(1e-9));
}

TEST_CASE("transition density closed forms") {
    // Brownian: variance 2t normal density
    CHECK(sk::transition_p(bm(), 1.0, 0.0).value ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(pi))).epsilon(1e-10));
    CHECK(sk::transition_p(bm(), 0.5, 1.3).value ==
          doctest::Approx(std::exp(-1.3 * 1.3 / 2.0) / (2.0 * std::sqrt(pi * 0.5)))
              .epsilon(1e-10));
    // stable at the origin: Gamma integral
    CHECK(sk::transition_p(st15(), 1.0, 0.0).value ==
          doctest::Approx(std::tgamma(1.0 + 2.0 / 3.0) / pi).epsilon(1e-10));
    // symmetry is exact by construction
    CHECK(sk::transition_p(st15(), 1.0, 1.7).value == sk::transition_p(st15(), 1.0, -1.7).value);
    // time derivative against a central difference
    const double dp = sk::transition_p_time_derivative(st15(), 1.0, 0.8).value;
    const double fd = (sk::transition_p(st15(), 1.0 + 1e-5, 0.8).value -
                       sk::transition_p(st15(), 1.0 - 1e-5, 0.8).value) /
                      2e-5;
    CHECK(dp == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("harmonic function: Brownian and stable closed forms") {
    CHECK(sk::h_approx(bm(), 0.0, 1.0).value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(sk::h_approx(bm(), 0.0, -2.5).value == doctest::Approx(1.25).epsilon(1e-10));
    CHECK(sk::h_approx(st15(), 0.0, 1.0).value ==
          doctest::Approx(std::sqrt(2.0 / pi)).epsilon(1e-10));
    CHECK(sk::h_approx(st15(), 0.0, 0.0).value == 0.0);
    // h(x) = C(alpha)|x|^{alpha-1} across a wide grid
    for (double x : {0.1, 0.7, 2.0, 3.0})
        CHECK(sk::h_approx(st15(), 0.0, x).value ==
              doctest::Approx(sk::c_alpha(1.5) * std::sqrt(x)).epsilon(1e-9));
}

TEST_CASE("c_alpha values and the removable singularity at 2") {
    CHECK(sk::c_alpha(2.0) == 0.5);
    CHECK(sk::c_alpha(1.5) == doctest::Approx(std::sqrt(2.0 / pi)).epsilon(1e-13));
    CHECK(sk::c_alpha(1.9999999) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK_THROWS(sk::c_alpha(1.0));
    CHECK_THROWS(sk::c_alpha(2.1));
}

TEST_CASE("c_alpha matches the defining integral") {
    CHECK(sk::c_alpha(1.9) == doctest::Approx(harmonic_integral_oracle(1.9)).epsilon(1e-8));
    CHECK(sk::c_alpha(1.5) == doctest::Approx(harmonic_integral_oracle(1.5)).epsilon(1e-8));
}

TEST_CASE("h_q is dominated by h and increases as q drops") {
    for (double x : {0.5, 2.0}) {
        const double h = sk::h_approx(st15(), 0.0, x).value;
        double prev = 0.0;
        for (double q : {4.0, 1.0, 0.25, 0.0625}) {
            const double hq = sk::h_approx(st15(), q, x).value;
            CHECK(hq <= h + 1e-12);
            CHECK(hq >= prev - 1e-12);
            prev = hq;
        }
    }
}

TEST_CASE("kappa: recurrent models give zero, the heavy mixture gives one") {
    CHECK(sk::kappa(bm()) == 0.0);
    CHECK(sk::kappa(st15()) == 0.0);
    CHECK(sk::kappa(mix()) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("killed resolvent: Brownian Green function and stable values") {
    // q = 0 Brownian: (|x| + |y| - |y-x|)/2
    CHECK(sk::killed_resolvent(bm(), 0.0, 1.0, 2.0).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sk::killed_resolvent(bm(), 0.0, 1.0, -2.0).value == doctest::Approx(0.0).epsilon(1e-9));
    // stable 1.5 at (1,-1): C(1.5) (2 - 2^{1/2})
    const double expect = sk::c_alpha(1.5) * (2.0 - std::sqrt(2.0));
    CHECK(sk::killed_resolvent(st15(), 0.0, 1.0, -1.0).value ==
          doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("killed resolvent invariants") {
    CounterRng rng(23, 0);
    for (int i = 0; i < 6; ++i) {
        const double q = 0.25 + 2.0 * rng.uniform();
        const double x = 0.2 + 2.0 * rng.uniform();
        const double y = -2.5 + 5.0 * rng.uniform();
        if (std::fabs(y) < 0.05) continue;
        const auto uxy = sk::killed_resolvent(st15(), q, x, y);
        const auto uyx = sk::killed_resolvent(st15(), q, y, x);
        CHECK(uxy.value == doctest::Approx(uyx.value).epsilon(1e-8));
        CHECK(uxy.value >= -1e-10);
        CHECK(uxy.value <= sk::resolvent_u(st15(), q, y - x).value + 1e-10);
    }
}

TEST_CASE("h-path resolvent boundary rows and interior") {
    // stable: u^h_0(x,0) = 1/h(x) - kappa with kappa = 0
    CHECK(sk::hpath_resolvent(st15(), 0.0, 1.0, 0.0).value ==
          doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-9));
    // Brownian boundary at q = 1: u_q(x)/(h(x) u_q(0)) = 2/e
    CHECK(sk::hpath_resolvent(bm(), 1.0, 1.0, 0.0).value ==
          doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-9));
    // symmetry of the interior entry
    const auto ab = sk::hpath_resolvent(st15(), 1.0, 0.7, 1.4);
    const auto ba = sk::hpath_resolvent(st15(), 1.0, 1.4, 0.7);
    CHECK(ab.value == doctest::Approx(ba.value).epsilon(1e-8));
    // transient mixture: boundary Green entry is 1/h - kappa
    const double h2 = sk::h_approx(mix(), 0.0, 2.0).value;
    CHECK(sk::hpath_resolvent(mix(), 0.0, 2.0, 0.0).value ==
          doctest::Approx(1.0 / h2 - 1.0).epsilon(5e-6));
    CHECK_THROWS(sk::hpath_resolvent(st15(), 0.0, 0.0, 0.0));
}

TEST_CASE("hitting-time Laplace transform") {
    CHECK(sk::hitting_laplace(bm(), 1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(sk::hitting_laplace(bm(), 2.25, 2.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-9));
    CHECK(sk::hitting_laplace(st15(), 1.0, 0.0) == 1.0);
    const double v = sk::hitting_laplace(st15(), 1.0, 1.0);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
}

TEST_CASE("never-hit probability") {
    CHECK(sk::never_hit_probability(st15(), 1.7) == 0.0);  // recurrent
    CHECK(sk::never_hit_probability(mix(), 0.0) == 0.0);
    // kappa h(x) -> 1 as x grows for the transient mixture
    CHECK(sk::never_hit_probability(mix(), 1e5) == doctest::Approx(1.0).epsilon(1e-2));
    const double p2 = sk::never_hit_probability(mix(), 2.0);
    CHECK(p2 > 0.0);
    CHECK(p2 < 1.0);
}

TEST_CASE("Barlow's function") {
    CHECK(sk::barlow_hB(bm(), 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sk::barlow_hB(bm(), 0.0) == 0.0);
    // recurrent: h_B = 2h exactly
    for (double x : {0.5, 2.0})
        CHECK(sk::barlow_hB(st15(), x) ==
              doctest::Approx(2.0 * sk::h_approx(st15(), 0.0, x).value).epsilon(1e-12));
}

TEST_CASE("two-point hitting probabilities") {
    // Brownian gambler's ruin
    CHECK(sk::two_point_hitting(bm(), 0.3, 1.0) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(sk::two_point_hitting(bm(), 0.8, 1.0) == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(sk::two_point_hitting(st15(), 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sk::two_point_hitting(st15(), 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-10));
    double resid = 1.0;
    const double v = sk::two_point_hitting(st15(), 0.4, 1.0, {}, &resid);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(std::fabs(resid) < 1e-8);
}

TEST_CASE("excursion measure of hitting a point") {
    CHECK(sk::excursion_hits_point(bm(), 2.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sk::excursion_hits_point(st15(), 1.0) ==
          doctest::Approx(1.0 / (2.0 * sk::c_alpha(1.5))).epsilon(1e-9));
    // transient mixture: mass vanishes for remote points
    CHECK(sk::excursion_hits_point(mix(), 2e4) == doctest::Approx(0.0).epsilon(5e-3));
    std::string warning;
    sk::excursion_hits_point(bm(), 1.0, {}, &warning);
    CHECK(warning.find("(B)") != std::string::npos);  // Brownian violates (B)
}
