#include "levykit/time_domain.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "levykit/spectral_kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levykit::timedomain {

namespace {

using std::complex;

void validate_inversion(const LaplaceInversionConfig& inv) {
    if (inv.node_count < 8) throw std::invalid_argument("inversion: node_count must be >= 8");
    if (inv.method == LaplaceInversionConfig::Method::gaver_stehfest && inv.node_count % 2 != 0)
        throw std::invalid_argument("inversion: gaver_stehfest needs an even node_count");
}

QuadratureConfig contour_quad(const QuadratureConfig& quad, const LaplaceInversionConfig& inv) {
    QuadratureConfig q = quad;
    q.abs_tol = std::min(q.abs_tol, inv.working_tolerance);
    q.rel_tol = std::min(q.rel_tol, inv.working_tolerance);
    return q;
}

/// Fixed-Talbot inversion of F at t; also returns the inverse of s F(s)
/// (the time derivative along the same contour) when dvalue is non-null.
/// F receives points off the negative real axis only.
template <class F>
double talbot(const F& f, double t, int M, double* dvalue) {
    const double r = 2.0 * M / (5.0 * t);
    std::vector<double> terms(M, 0.0), dterms(M, 0.0);
    // independent contour nodes; safe to fan out when not already inside a
    // parallel region
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel())
#endif
    for (int k = 0; k < M; ++k) {
        if (k == 0) {
            const complex<double> fr = f(complex<double>(r, 0.0));
            terms[0] = 0.5 * std::exp(r * t) * fr.real();
            dterms[0] = r * terms[0];
            continue;
        }
        const double th = k * pi / M;
        const double cot = std::cos(th) / std::sin(th);
        const complex<double> s(r * th * cot, r * th);
        if (s.real() * t < -46.0) continue;  // exp factor below double noise
        const double sigma = th + (th * cot - 1.0) * cot;
        const complex<double> term = std::exp(s * t) * f(s) * complex<double>(1.0, sigma);
        terms[k] = term.real();
        dterms[k] = (s * term).real();
    }
    const double scale = r / M;
    if (dvalue) *dvalue = scale * pairwise_sum(dterms);
    return scale * pairwise_sum(terms);
}

std::vector<double> stehfest_weights(int n) {
    std::vector<double> zeta(n + 1, 0.0);
    const int half = n / 2;
    auto lfact = [](int v) { return std::lgamma(static_cast<double>(v) + 1.0); };
    for (int k = 1; k <= n; ++k) {
        double sum = 0.0;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            double lg = half * std::log(static_cast<double>(j)) + lfact(2 * j) - lfact(half - j) -
                        lfact(j) - lfact(j - 1) - lfact(k - j) - lfact(2 * j - k);
            sum += std::exp(lg);
        }
        zeta[k] = ((k + half) % 2 == 0 ? 1.0 : -1.0) * sum;
    }
    return zeta;
}

template <class F>
double gaver_stehfest(const F& f_real, double t, int n) {
    static std::mutex mu;
    static std::map<int, std::vector<double>> cache;
    std::vector<double> zeta;
    {
        std::lock_guard lock(mu);
        auto it = cache.find(n);
        if (it == cache.end()) it = cache.emplace(n, stehfest_weights(n)).first;
        zeta = it->second;
    }
    const double l2t = std::log(2.0) / t;
    std::vector<double> terms(n, 0.0);
    for (int k = 1; k <= n; ++k) terms[k - 1] = zeta[k] * f_real(k * l2t);
    return l2t * pairwise_sum(terms);
}

// ---- transform targets --------------------------------------------------

complex<double> survival_transform(const SymmetricLevyModel& m, complex<double> q,
                                   const QuadratureConfig& quad) {
    const auto u0 = spectral::resolvent_u_complex(m, q, 0.0, quad);
    return 1.0 / (q * u0.value);
}

complex<double> entrance_transform(const SymmetricLevyModel& m, complex<double> q, double x,
                                   const QuadratureConfig& quad) {
    const auto ux = spectral::resolvent_u_complex(m, q, x, quad);
    const auto u0 = spectral::resolvent_u_complex(m, q, 0.0, quad);
    return ux.value / u0.value;
}

double survival_transform_real(const SymmetricLevyModel& m, double q,
                               const QuadratureConfig& quad) {
    return 1.0 / (q * spectral::resolvent_at_zero(m, q, quad).value);
}

double entrance_transform_real(const SymmetricLevyModel& m, double q, double x,
                               const QuadratureConfig& quad) {
    return spectral::resolvent_u(m, q, x, quad).value /
           spectral::resolvent_at_zero(m, q, quad).value;
}

// rho(s, x) tabulated on a log-time grid so convolutions do not re-run the
// inversion at every quadrature node; shared across threads once built
struct RhoTable {
    double s_min, s_max;
    CubicSpline spline;  // rho as a function of log s
    double at(double s) const {
        if (s <= 0.0) return 0.0;
        if (s < s_min) return spline(std::log(s_min)) * (s / s_min);
        if (s > s_max) return 0.0;  // only used beyond the built horizon
        return std::max(0.0, spline(std::log(s)));
    }
};

const RhoTable& rho_table(const SymmetricLevyModel& m, double x, double t_max,
                          const QuadratureConfig& quad, const LaplaceInversionConfig& inv);

double entrance_density_impl(const SymmetricLevyModel& m, double t, double x,
                             const QuadratureConfig& quad, const LaplaceInversionConfig& inv) {
    const QuadratureConfig cq = contour_quad(quad, inv);
    if (inv.method == LaplaceInversionConfig::Method::gaver_stehfest)
        return gaver_stehfest([&](double q) { return entrance_transform_real(m, q, x, cq); }, t,
                              inv.node_count);
    return talbot([&](complex<double> q) { return entrance_transform(m, q, x, cq); }, t,
                  inv.node_count, nullptr);
}

struct RhoKey {
    std::uint64_t model;
    double x, t_max;
    bool operator<(const RhoKey& o) const {
        return std::tie(model, x, t_max) < std::tie(o.model, o.x, o.t_max);
    }
};

const RhoTable& rho_table(const SymmetricLevyModel& m, double x, double t_max,
                          const QuadratureConfig& quad, const LaplaceInversionConfig& inv) {
    static std::mutex mu;
    static std::map<RhoKey, std::unique_ptr<RhoTable>> cache;
    const RhoKey key{fnv1a_hash(m.describe()), x, t_max};
    {
        std::lock_guard lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    const double s_min = std::min(1e-4, 1e-4 * t_max);
    const double s_max = t_max;
    const int n = 140;
    std::vector<double> ls(n), vals(n);
    for (int i = 0; i < n; ++i)
        ls[i] = std::log(s_min) + (std::log(s_max) - std::log(s_min)) * i / (n - 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel())
#endif
    for (int i = 0; i < n; ++i) vals[i] = entrance_density_impl(m, std::exp(ls[i]), x, quad, inv);
    auto table = std::make_unique<RhoTable>();
    table->s_min = s_min;
    table->s_max = s_max;
    table->spline = CubicSpline(ls, vals);
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.emplace(key, std::move(table));
    (void)inserted;
    return *it->second;
}

std::vector<double> graded_breaks(double a, double b, int levels) {
    // cluster toward both endpoints; integrable endpoint singularities
    std::vector<double> pts{a, b};
    const double len = b - a;
    for (int k = 1; k <= levels; ++k) {
        pts.push_back(a + len * std::ldexp(1.0, -k));
        pts.push_back(b - len * std::ldexp(1.0, -k));
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> t) : times(std::move(t)) {
    if (times.empty()) throw std::invalid_argument("TimeGrid: empty");
    double prev = 0.0;
    for (double v : times) {
        if (!(v > prev)) throw std::invalid_argument("TimeGrid: times must be positive increasing");
        prev = v;
    }
}

double lifetime_survival(const SymmetricLevyModel& m, double t, const QuadratureConfig& quad,
                         const LaplaceInversionConfig& inv) {
    if (!(t > 0.0)) throw std::invalid_argument("lifetime_survival: t must be positive");
    validate_inversion(inv);
    const QuadratureConfig cq = contour_quad(quad, inv);
    double value;
    if (inv.method == LaplaceInversionConfig::Method::gaver_stehfest)
        value = gaver_stehfest([&](double q) { return survival_transform_real(m, q, cq); }, t,
                               inv.node_count);
    else
        value = talbot([&](complex<double> q) { return survival_transform(m, q, cq); }, t,
                       inv.node_count, nullptr);
    if (!std::isfinite(value) || value < 0.0)
        throw EvaluationError("lifetime_survival: inversion produced an invalid value", value, 0.0);
    return value;
}

double lifetime_density(const SymmetricLevyModel& m, double t, const QuadratureConfig& quad,
                        const LaplaceInversionConfig& inv) {
    if (!(t > 0.0)) throw std::invalid_argument("lifetime_density: t must be positive");
    validate_inversion(inv);
    const QuadratureConfig cq = contour_quad(quad, inv);
    if (inv.method == LaplaceInversionConfig::Method::gaver_stehfest) {
        // step-controlled central difference of R
        double prev = 0.0;
        for (double rel = 1e-2;; rel *= 0.5) {
            const double dt = rel * t;
            const double lo = lifetime_survival(m, t - dt, quad, inv);
            const double hi = lifetime_survival(m, t + dt, quad, inv);
            const double est = -(hi - lo) / (2.0 * dt);
            if (prev != 0.0 && std::fabs(est - prev) < 1e-5 * std::fabs(est)) return est;
            if (rel < 1e-5) return est;
            prev = est;
        }
    }
    double deriv = 0.0;
    talbot([&](complex<double> q) { return survival_transform(m, q, cq); }, t, inv.node_count,
           &deriv);
    const double rho = -deriv;
    if (!std::isfinite(rho))
        throw EvaluationError("lifetime_density: inversion produced an invalid value", rho, 0.0);
    return rho;
}

double entrance_density(const SymmetricLevyModel& m, double t, double x,
                        const QuadratureConfig& quad, const LaplaceInversionConfig& inv) {
    if (!(t > 0.0)) throw std::invalid_argument("entrance_density: t must be positive");
    if (x == 0.0) throw std::invalid_argument("entrance_density: x must be nonzero");
    validate_inversion(inv);
    const double value = entrance_density_impl(m, t, x, quad, inv);
    if (!std::isfinite(value))
        throw EvaluationError("entrance_density: inversion produced an invalid value", value, 0.0);
    return std::max(0.0, value);
}

double entrance_density_alt(const SymmetricLevyModel& m, double t, double x,
                            const QuadratureConfig& quad, const LaplaceInversionConfig& inv) {
    if (!(t > 0.0)) throw std::invalid_argument("entrance_density_alt: t must be positive");
    if (x == 0.0) throw std::invalid_argument("entrance_density_alt: x must be nonzero");
    validate_inversion(inv);
    const QuadratureConfig cq = contour_quad(quad, inv);

    // R and R' are tabulated once on a log grid in tau = t - s (both behave
    // like powers of tau near zero, so log-log splines track them tightly)
    const int n = 72;
    const double tau_min = 1e-7 * t;
    std::vector<double> lt(n), lr(n), ldr(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel())
#endif
    for (int i = 0; i < n; ++i) {
        const double tau = std::exp(std::log(tau_min) +
                                    (std::log(t) - std::log(tau_min)) * i / (n - 1));
        double dR;
        const double R = talbot([&](complex<double> q) { return survival_transform(m, q, cq); },
                                tau, inv.node_count, &dR);
        lt[i] = std::log(tau);
        lr[i] = std::log(std::max(R, 1e-300));
        ldr[i] = std::log(std::max(-dR, 1e-300));
    }
    const CubicSpline logR(lt, lr), logDR(lt, ldr);
    auto R_of = [&](double tau) { return std::exp(logR(std::log(std::max(tau, 1e-12 * t)))); };
    auto dR_of = [&](double tau) { return -std::exp(logDR(std::log(std::max(tau, 1e-12 * t)))); };

    auto integrand = [&](double s) {
        const double tau = t - s;
        const double ps = spectral::transition_p(m, s, x, quad).value;
        const double dps = spectral::transition_p_time_derivative(m, s, x, quad).value;
        return R_of(tau) * ps + tau * dR_of(tau) * ps + R_of(tau) * s * dps;
    };
    auto r = quad::integrate_seeded(integrand, graded_breaks(0.0, t, 26), 1e-8, 1e-7, 900);
    return r.value / t;
}

double killed_transition(const SymmetricLevyModel& m, double t, double x, double y,
                         const QuadratureConfig& quad, const LaplaceInversionConfig& inv,
                         double* clamp_residual) {
    if (!(t > 0.0)) throw std::invalid_argument("killed_transition: t must be positive");
    if (x == 0.0 || y == 0.0)
        throw std::invalid_argument("killed_transition: x, y must be nonzero");
    validate_inversion(inv);
    const double free = spectral::transition_p(m, t, y - x, quad).value;
    // the hitting-time density of x enters through its table; symmetry makes
    // rho(s,-x) = rho(s,x)
    const double ax = std::fabs(x);
    const RhoTable& rho = rho_table(m, ax, std::max(8.0, 2.0 * t), quad, inv);
    auto integrand = [&](double s) {
        return spectral::transition_p(m, t - s, y, quad).value * rho.at(s);
    };
    auto conv = quad::integrate_seeded(integrand, graded_breaks(0.0, t, 30), 1e-9, 1e-7, 1200);
    const double raw = free - conv.value;
    if (clamp_residual) *clamp_residual = std::min(raw, 0.0);
    return std::max(0.0, raw);
}

double hpath_transition(const SymmetricLevyModel& m, double t, double x, double y,
                        const QuadratureConfig& quad, const LaplaceInversionConfig& inv) {
    if (!(t > 0.0)) throw std::invalid_argument("hpath_transition: t must be positive");
    if (x == 0.0 && y == 0.0) return lifetime_density(m, t, quad, inv);
    if (x == 0.0 || y == 0.0) {
        const double z = (x == 0.0) ? y : x;
        return entrance_density(m, t, z, quad, inv) /
               spectral::h_approx(m, 0.0, z, quad).value;
    }
    return killed_transition(m, t, x, y, quad, inv) /
           (spectral::h_approx(m, 0.0, x, quad).value *
            spectral::h_approx(m, 0.0, y, quad).value);
}

std::vector<double> lifetime_survival_grid(const SymmetricLevyModel& m, const TimeGrid& grid,
                                           const QuadratureConfig& quad,
                                           const LaplaceInversionConfig& inv) {
    std::vector<double> out(grid.times.size(), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel())
#endif
    for (std::size_t i = 0; i < grid.times.size(); ++i)
        out[i] = lifetime_survival(m, grid.times[i], quad, inv);
    return out;
}

std::vector<double> lifetime_density_grid(const SymmetricLevyModel& m, const TimeGrid& grid,
                                          const QuadratureConfig& quad,
                                          const LaplaceInversionConfig& inv) {
    std::vector<double> out(grid.times.size(), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel())
#endif
    for (std::size_t i = 0; i < grid.times.size(); ++i)
        out[i] = lifetime_density(m, grid.times[i], quad, inv);
    return out;
}

}  // namespace levykit::timedomain
