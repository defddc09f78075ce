#include "levykit/spectral_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace levykit::spectral {

namespace {

using std::complex;

// geometric breakpoints 0, lo*2^k, ..., >= hi
std::vector<double> geometric_breaks(double lo, double hi) {
    std::vector<double> b{0.0};
    double v = lo;
    while (v < hi) {
        b.push_back(v);
        v *= 4.0;
    }
    b.push_back(hi);
    return b;
}

// smallest lambda beyond lambda0 with t*theta(lambda) > 45 (heat-kernel cutoff)
double heat_cutoff(const SymmetricLevyModel& m, double t, double lambda0) {
    double lam = std::max(1.0, lambda0);
    while (t * m.theta(lam) < 45.0 && lam < 1e30) lam *= 2.0;
    return lam;
}

// bracket + bisect theta(lambda) = target; used to seed panels at the
// near-pole of 1/(q + theta) when Re q < 0 on an inversion contour
double solve_theta_level(const SymmetricLevyModel& m, double target) {
    double lo = 1e-9, hi = 1e-9;
    while (m.theta(hi) < target && hi < 1e30) hi *= 2.0;
    if (hi >= 1e30) return 0.0;
    lo = hi * 0.5;
    for (int i = 0; i < 200 && m.theta(lo) > target && lo > 1e-300; ++i) lo *= 0.5;
    for (int i = 0; i < 120; ++i) {
        const double mid = 0.5 * (lo + hi);
        (m.theta(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct Part {
    double value = 0.0;
    double error = 0.0;
};

// ---- generic evaluators -------------------------------------------------
//
// All kernels are (1/pi) int_0^inf g(lambda x) w(theta(lambda)) dlambda with
// g in {1, cos, 1-cos}. The direct region ends at a zero of cos(lambda x)
// past the monotonicity threshold; beyond it the cosine part is summed by
// accelerated half-period panels and the flat part by the 1/lambda
// substitution. decay_cut (finite for heat kernels) caps everything.

template <class T, class W>
void flat_eval(const SymmetricLevyModel& m, const W& w, const QuadratureConfig& cfg,
               double decay_cut, const std::vector<double>& extra_seeds, T& value, double& error) {
    double L = cfg.fixed_tail_cutoff > 0.0 ? cfg.fixed_tail_cutoff
                                           : 8.0 * std::max(1.0, cfg.lambda0);
    bool with_tail = true;
    if (decay_cut > 0.0 && std::isfinite(decay_cut)) {
        L = std::max(L, decay_cut);
        with_tail = false;
    }
    auto breaks = geometric_breaks(1.0 / 64.0, L);
    for (double s : extra_seeds)
        if (s > 0.0 && s < L) breaks.push_back(s);
    std::sort(breaks.begin(), breaks.end());
    auto f = [&](double lam) { return w(m.theta(lam)); };
    T direct{};
    double direct_err = 0.0;
    if constexpr (std::is_same_v<T, double>) {
        auto r = quad::integrate_seeded(f, breaks, 0.25 * cfg.abs_tol, 0.5 * cfg.rel_tol,
                                        cfg.max_panels);
        direct = r.value;
        direct_err = r.error_estimate;
    } else {
        auto r = quad::integrate_seeded_c(f, breaks, 0.25 * cfg.abs_tol, 0.5 * cfg.rel_tol,
                                          cfg.max_panels);
        direct = r.value;
        direct_err = r.error_estimate;
    }
    T tail{};
    double tail_err = 0.0;
    if (with_tail) {
        if constexpr (std::is_same_v<T, double>) {
            auto r = quad::integrate_tail(f, L, 0.25 * cfg.abs_tol, 0.5 * cfg.rel_tol,
                                          cfg.max_panels);
            tail = r.value;
            tail_err = r.error_estimate;
        } else {
            auto r = quad::integrate_tail_c(f, L, 0.25 * cfg.abs_tol, 0.5 * cfg.rel_tol,
                                            cfg.max_panels);
            tail = r.value;
            tail_err = r.error_estimate;
        }
    }
    value = direct + tail;
    error = direct_err + tail_err;
}

template <class T, class W>
void cos_eval(const SymmetricLevyModel& m, const W& w, double x, const QuadratureConfig& cfg,
              double decay_cut, const std::vector<double>& extra_seeds, T& value, double& error) {
    const double ax = std::fabs(x);
    if (ax == 0.0) {
        flat_eval<T>(m, w, cfg, decay_cut, extra_seeds, value, error);
        return;
    }
    const double half = pi / ax;
    // start the accelerated tail beyond the monotone threshold and after a
    // couple of explicit oscillations
    double k0 = std::max(2.0, std::ceil(std::max(1.0, cfg.lambda0) * ax / pi + 0.5) + 1.0);
    double z_start = (k0 - 0.5) * half;
    bool with_tail = true;
    if (decay_cut > 0.0 && std::isfinite(decay_cut) && z_start > decay_cut) {
        // the weight is already negligible before the first tail panel
        z_start = std::min(z_start, 1.25 * decay_cut);
        with_tail = false;
    }
    auto breaks = geometric_breaks(std::min(half / 8.0, 1.0 / 64.0), z_start);
    for (double z = 0.5 * half; z < z_start; z += half) breaks.push_back(z);
    for (double s : extra_seeds)
        if (s > 0.0 && s < z_start) breaks.push_back(s);
    breaks.push_back(z_start);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double b) { return b > z_start; }),
                 breaks.end());
    auto f = [&](double lam) { return w(m.theta(lam)) * std::cos(lam * x); };
    T direct{};
    double direct_err = 0.0;
    if constexpr (std::is_same_v<T, double>) {
        auto r = quad::integrate_seeded(f, breaks, 0.25 * cfg.abs_tol, 0.5 * cfg.rel_tol,
                                        cfg.max_panels);
        direct = r.value;
        direct_err = r.error_estimate;
    } else {
        auto r = quad::integrate_seeded_c(f, breaks, 0.25 * cfg.abs_tol, 0.5 * cfg.rel_tol,
                                          cfg.max_panels);
        direct = r.value;
        direct_err = r.error_estimate;
    }
    T tail{};
    double tail_err = 0.0;
    if (with_tail) {
        auto wf = [&](double lam) { return w(m.theta(lam)); };
        if constexpr (std::is_same_v<T, double>) {
            auto r = quad::oscillatory_tail(wf, x, z_start, 0.5 * cfg.abs_tol, cfg.rel_tol,
                                            cfg.max_panels);
            tail = r.value;
            tail_err = r.error_estimate;
        } else {
            auto r = quad::oscillatory_tail_c(wf, x, z_start, 0.5 * cfg.abs_tol, cfg.rel_tol,
                                              cfg.max_panels);
            tail = r.value;
            tail_err = r.error_estimate;
        }
    }
    value = direct + tail;
    error = direct_err + tail_err;
}

// (1/pi) int (1 - cos(lambda x)) w dlambda: direct region evaluates the
// difference in one pass (no cancellation thanks to the 2 sin^2 form), the
// tail splits into flat minus oscillatory.
template <class W>
Part one_minus_cos_eval(const SymmetricLevyModel& m, const W& w, double x,
                        const QuadratureConfig& cfg, double decay_cut) {
    const double ax = std::fabs(x);
    if (ax == 0.0) return {};
    const double half = pi / ax;
    double k0 = std::max(2.0, std::ceil(std::max(1.0, cfg.lambda0) * ax / pi + 0.5) + 1.0);
    double z_start = (k0 - 0.5) * half;
    bool with_tail = true;
    if (decay_cut > 0.0 && std::isfinite(decay_cut) && z_start > decay_cut) {
        z_start = std::min(z_start, 1.25 * decay_cut);
        with_tail = false;
    }
    auto breaks = geometric_breaks(std::min(half / 8.0, 1.0 / 64.0), z_start);
    for (double z = 0.5 * half; z < z_start; z += half) breaks.push_back(z);
    breaks.push_back(z_start);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double b) { return b > z_start; }),
                 breaks.end());
    auto f = [&](double lam) {
        return one_minus_cos(lam * x, cfg.zero_series_radius) * w(m.theta(lam));
    };
    auto direct = quad::integrate_seeded(f, breaks, 0.25 * cfg.abs_tol, 0.5 * cfg.rel_tol,
                                         cfg.max_panels);
    Part out{direct.value, direct.error_estimate};
    if (with_tail) {
        auto wf = [&](double lam) { return w(m.theta(lam)); };
        auto flat = quad::integrate_tail(wf, z_start, 0.25 * cfg.abs_tol, 0.5 * cfg.rel_tol,
                                         cfg.max_panels);
        auto osc = quad::oscillatory_tail(wf, x, z_start, 0.5 * cfg.abs_tol, cfg.rel_tol,
                                          cfg.max_panels);
        out.value += flat.value - osc.value;
        out.error += flat.error_estimate + osc.error_estimate;
    }
    return out;
}

void require_converged(const char* what, double value, double error, const QuadratureConfig& cfg) {
    const double budget = 100.0 * std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(value));
    if (!std::isfinite(value) || !(error < std::max(budget, 1e-9)))
        throw EvaluationError(std::string(what) + ": quadrature did not converge", value, error);
}

// thread-safe memo for u_q(0), h(x) at q=0 is deliberately not cached
// (identity integrands sweep x continuously; the hit rate would be zero)
struct ZeroCache {
    std::mutex mu;
    std::map<std::pair<std::uint64_t, double>, KernelValue> map;
};
ZeroCache& zero_cache() {
    static ZeroCache c;
    return c;
}

}  // namespace

KernelValue resolvent_at_zero(const SymmetricLevyModel& m, double q, const QuadratureConfig& cfg) {
    const auto key = std::make_pair(fnv1a_hash(m.describe()), q);
    {
        std::lock_guard lock(zero_cache().mu);
        auto it = zero_cache().map.find(key);
        if (it != zero_cache().map.end()) return it->second;
    }
    double v, e;
    flat_eval<double>(m, [q](double th) { return 1.0 / (q + th); }, cfg, 0.0, {}, v, e);
    KernelValue out{v / pi, e / pi};
    require_converged("resolvent_u(0)", out.value, out.error_estimate, cfg);
    std::lock_guard lock(zero_cache().mu);
    zero_cache().map.emplace(key, out);
    return out;
}

KernelValue resolvent_u(const SymmetricLevyModel& m, double q, double x,
                        const QuadratureConfig& cfg) {
    if (!(q > 0.0)) throw std::invalid_argument("resolvent_u: q must be positive");
    if (x == 0.0) return resolvent_at_zero(m, q, cfg);
    double v, e;
    cos_eval<double>(m, [q](double th) { return 1.0 / (q + th); }, x, cfg, 0.0, {}, v, e);
    KernelValue out{v / pi, e / pi};
    require_converged("resolvent_u", out.value, out.error_estimate, cfg);
    return out;
}

ComplexKernelValue resolvent_u_complex(const SymmetricLevyModel& m, complex<double> q, double x,
                                       const QuadratureConfig& cfg) {
    if (q.real() <= 0.0 && q.imag() == 0.0)
        throw std::invalid_argument("resolvent_u_complex: q on the closed negative reals");
    std::vector<double> seeds;
    if (q.real() < 0.0) {
        const double peak = solve_theta_level(m, -q.real());
        if (peak > 0.0) {
            seeds = {0.5 * peak, peak, 2.0 * peak};
        }
    }
    complex<double> v;
    double e;
    cos_eval<complex<double>>(m, [q](double th) { return 1.0 / (q + th); }, x, cfg, 0.0, seeds, v,
                              e);
    ComplexKernelValue out{v / pi, e / pi};
    if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
        throw EvaluationError("resolvent_u_complex: non-finite", 0.0, e);
    return out;
}

KernelValue transition_p(const SymmetricLevyModel& m, double t, double x,
                         const QuadratureConfig& cfg) {
    if (!(t > 0.0)) throw std::invalid_argument("transition_p: t must be positive");
    const double cut = heat_cutoff(m, t, cfg.lambda0);
    double v, e;
    cos_eval<double>(m, [t](double th) { return std::exp(-t * th); }, x, cfg, cut, {}, v, e);
    KernelValue out{v / pi, e / pi};
    require_converged("transition_p", out.value, out.error_estimate, cfg);
    return out;
}

KernelValue transition_p_time_derivative(const SymmetricLevyModel& m, double t, double x,
                                         const QuadratureConfig& cfg) {
    if (!(t > 0.0)) throw std::invalid_argument("transition_p_time_derivative: t must be positive");
    const double cut = heat_cutoff(m, t, cfg.lambda0);
    double v, e;
    cos_eval<double>(m, [t](double th) { return th * std::exp(-t * th); }, x, cfg, cut, {}, v, e);
    KernelValue out{-v / pi, e / pi};
    require_converged("transition_p_time_derivative", out.value, out.error_estimate, cfg);
    return out;
}

KernelValue h_approx(const SymmetricLevyModel& m, double q, double x,
                     const QuadratureConfig& cfg) {
    if (q < 0.0) throw std::invalid_argument("h_approx: q must be nonnegative");
    if (x == 0.0) return {0.0, 0.0};
    Part p = q == 0.0
                 ? one_minus_cos_eval(m, [](double th) { return 1.0 / th; }, x, cfg, 0.0)
                 : one_minus_cos_eval(m, [q](double th) { return 1.0 / (q + th); }, x, cfg, 0.0);
    KernelValue out{p.value / pi, p.error / pi};
    require_converged("h_approx", out.value, out.error_estimate, cfg);
    return out;
}

double kappa(const SymmetricLevyModel& m, const QuadratureConfig& cfg) {
    auto inv_theta = [&](double lam) { return 1.0 / m.theta(lam); };
    auto near = quad::integrate_to_zero(inv_theta, 1.0, cfg.abs_tol, cfg.rel_tol, cfg.max_panels);
    if (near.inconclusive)
        throw EvaluationError("kappa: divergence test at the origin is inconclusive; "
                              "tighten the quadrature config",
                              near.value, near.error);
    if (near.diverged) return 0.0;
    auto tail = quad::integrate_tail(inv_theta, 1.0, cfg.abs_tol, cfg.rel_tol, cfg.max_panels);
    const double total = (near.value + tail.value) / pi;
    return 1.0 / total;
}

double c_alpha(double alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw std::invalid_argument("c_alpha: alpha not in (1,2]");
    if (alpha == 2.0) return 0.5;
    // sin(alpha pi / 2) written via the reflection sin((2-alpha) pi / 2) so
    // the value stays accurate as alpha -> 2
    return std::tgamma(2.0 - alpha) / (pi * (alpha - 1.0)) * std::sin((2.0 - alpha) * pi / 2.0);
}

KernelValue killed_resolvent(const SymmetricLevyModel& m, double q, double x, double y,
                             const QuadratureConfig& cfg) {
    if (x == 0.0 || y == 0.0) throw std::invalid_argument("killed_resolvent: x, y must be nonzero");
    if (q < 0.0) throw std::invalid_argument("killed_resolvent: q must be nonnegative");
    if (q == 0.0) {
        const double k = kappa(m, cfg);
        const auto hx = h_approx(m, 0.0, x, cfg);
        const auto hy = h_approx(m, 0.0, y, cfg);
        const auto hyx = h_approx(m, 0.0, y - x, cfg);
        const double v = hx.value + hy.value - hyx.value - k * hx.value * hy.value;
        const double e = hx.error_estimate * (1.0 + k * hy.value) +
                         hy.error_estimate * (1.0 + k * hx.value) + hyx.error_estimate;
        return {v, e};
    }
    const auto u0 = resolvent_at_zero(m, q, cfg);
    const auto uyx = resolvent_u(m, q, y - x, cfg);
    const auto ux = resolvent_u(m, q, x, cfg);
    const auto uy = resolvent_u(m, q, y, cfg);
    const double v = uyx.value - ux.value * uy.value / u0.value;
    const double e = uyx.error_estimate +
                     ux.error_estimate * std::fabs(uy.value / u0.value) +
                     uy.error_estimate * std::fabs(ux.value / u0.value) +
                     u0.error_estimate * std::fabs(ux.value * uy.value / (u0.value * u0.value));
    return {v, e};
}

KernelValue hpath_resolvent(const SymmetricLevyModel& m, double q, double x, double y,
                            const QuadratureConfig& cfg) {
    if (q < 0.0) throw std::invalid_argument("hpath_resolvent: q must be nonnegative");
    if (x == 0.0 && y == 0.0)
        throw EvaluationError("hpath_resolvent: the (0,0) entry is infinite", 0.0, 0.0);
    if (x == 0.0 || y == 0.0) {
        const double z = (x == 0.0) ? y : x;
        const auto hz = h_approx(m, 0.0, z, cfg);
        if (q == 0.0) {
            const double k = kappa(m, cfg);
            const double v = 1.0 / hz.value - k;
            return {v, hz.error_estimate / (hz.value * hz.value)};
        }
        const auto uz = resolvent_u(m, q, z, cfg);
        const auto u0 = resolvent_at_zero(m, q, cfg);
        const double v = uz.value / (hz.value * u0.value);
        const double e = v * (uz.error_estimate / std::fabs(uz.value) +
                              hz.error_estimate / hz.value + u0.error_estimate / u0.value);
        return {v, std::fabs(e)};
    }
    const auto hx = h_approx(m, 0.0, x, cfg);
    const auto hy = h_approx(m, 0.0, y, cfg);
    const auto k0 = killed_resolvent(m, q, x, y, cfg);
    const double v = k0.value / (hx.value * hy.value);
    const double e = k0.error_estimate / (hx.value * hy.value) +
                     std::fabs(v) * (hx.error_estimate / hx.value + hy.error_estimate / hy.value);
    return {v, e};
}

double hitting_laplace(const SymmetricLevyModel& m, double q, double x,
                       const QuadratureConfig& cfg) {
    if (!(q > 0.0)) throw std::invalid_argument("hitting_laplace: q must be positive");
    if (x == 0.0) return 1.0;
    const auto ux = resolvent_u(m, q, x, cfg);
    const auto u0 = resolvent_at_zero(m, q, cfg);
    return std::clamp(ux.value / u0.value, 0.0, 1.0);
}

double never_hit_probability(const SymmetricLevyModel& m, double x, const QuadratureConfig& cfg) {
    if (x == 0.0) return 0.0;
    const double k = kappa(m, cfg);
    if (k == 0.0) return 0.0;
    return std::clamp(k * h_approx(m, 0.0, x, cfg).value, 0.0, 1.0);
}

double barlow_hB(const SymmetricLevyModel& m, double x, const QuadratureConfig& cfg) {
    if (x == 0.0) return 0.0;
    const double h = h_approx(m, 0.0, x, cfg).value;
    return 2.0 * h - kappa(m, cfg) * h * h;
}

double two_point_hitting(const SymmetricLevyModel& m, double x, double a,
                         const QuadratureConfig& cfg, double* clamp_residual) {
    if (a == 0.0) throw std::invalid_argument("two_point_hitting: a must be nonzero");
    const double k = kappa(m, cfg);
    const double ha = h_approx(m, 0.0, a, cfg).value;
    const double hax = h_approx(m, 0.0, a - x, cfg).value;
    const double hx = h_approx(m, 0.0, x, cfg).value;
    const double hb = 2.0 * ha - k * ha * ha;
    const double raw = (ha - hax + hx - k * hx * ha) / hb;
    const double clamped = std::clamp(raw, 0.0, 1.0);
    if (clamp_residual) *clamp_residual = raw - clamped;
    return clamped;
}

double excursion_hits_point(const SymmetricLevyModel& m, double a, const QuadratureConfig& cfg,
                            std::string* warning) {
    if (a == 0.0) throw std::invalid_argument("excursion_hits_point: a must be nonzero");
    if (warning) {
        // cheap hypothesis probes; the full audit lives in check_conditions
        const double r1 = 0.0625 / h_approx(m, 0.0, 0.0625, cfg).value;
        const double r2 = 0.25 / h_approx(m, 0.0, 0.25, cfg).value;
        if (!(r1 < 0.995 * r2)) *warning += "condition (B) looks violated; ";
        const double l0 = std::max(1.0, cfg.lambda0);
        for (double lam = l0; lam < 64.0 * l0; lam *= 2.0)
            if (m.theta(2.0 * lam) < m.theta(lam) * (1.0 - 1e-12)) {
                *warning += "condition (T) looks violated; ";
                break;
            }
    }
    const double k = kappa(m, cfg);
    const double ha = h_approx(m, 0.0, a, cfg).value;
    const double hb = 2.0 * ha - k * ha * ha;
    return (1.0 - k * ha) / hb;
}

}  // namespace levykit::spectral
