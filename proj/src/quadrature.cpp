#include "levykit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

namespace levykit::quad {

namespace {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 constants)
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082,
                           0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975,
                           0.417959183673469387755102040816327};

template <class T>
double mag(const T& v) {
    if constexpr (std::is_same_v<T, double>)
        return std::fabs(v);
    else
        return std::abs(v);
}

template <class T, class F>
void gk15(const F& f, double a, double b, T& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T resg = kWg[3] * fc;
    T resk = kWgk[7] * fc;
    for (int j = 0; j < 3; ++j) {
        const double x = h * kXgk[2 * j + 1];
        const T f1 = f(c - x), f2 = f(c + x);
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[2 * j + 1] * (f1 + f2);
    }
    for (int j = 0; j < 4; ++j) {
        const double x = h * kXgk[2 * j];
        const T f1 = f(c - x), f2 = f(c + x);
        resk += kWgk[2 * j] * (f1 + f2);
    }
    result = resk * h;
    err = mag((resk - resg) * h);
}

struct Panel {
    double a, b, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

// globally adaptive GK15: repeatedly bisect the worst panel
template <class T, class F>
void adaptive_seeded(const F& f, const std::vector<double>& breaks, double abs_tol, double rel_tol,
                     int max_panels, T& value, double& error) {
    struct Entry {
        double a, b, err;
        T val;
        bool operator<(const Entry& o) const { return err < o.err; }
    };
    std::priority_queue<Entry> heap;
    T total{};
    double total_err = 0.0;
    int used = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        T v0;
        double e0;
        gk15<T>(f, breaks[i], breaks[i + 1], v0, e0);
        heap.push({breaks[i], breaks[i + 1], e0, v0});
        total += v0;
        total_err += e0;
        ++used;
    }
    while (used < max_panels) {
        const double goal = std::max(abs_tol, rel_tol * mag(total));
        if (total_err <= goal) break;
        Entry worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b)) {  // width at rounding limit
            total_err -= worst.err;           // accept as-is
            continue;
        }
        T v1, v2;
        double er1, er2;
        gk15<T>(f, worst.a, m, v1, er1);
        gk15<T>(f, m, worst.b, v2, er2);
        total += (v1 + v2) - worst.val;
        total_err += (er1 + er2) - worst.err;
        heap.push({worst.a, m, er1, v1});
        heap.push({m, worst.b, er2, v2});
        ++used;
    }
    value = total;
    error = total_err;
}

template <class T, class F>
void adaptive(const F& f, double a, double b, double abs_tol, double rel_tol, int max_panels,
              T& value, double& error) {
    adaptive_seeded<T>(f, std::vector<double>{a, b}, abs_tol, rel_tol, max_panels, value, error);
}

// Euler transformation of an alternating-type series: repeated averaging of
// the partial sums. terms() yields successive panel integrals; stop when the
// diagonal stabilizes below tol.
template <class T, class F>
void euler_sum(F&& next_term, double abs_tol, int max_terms, T& value, double& error) {
    std::vector<T> diag;  // averaged partial-sum diagonal (van Wijngaarden)
    T partial{};
    T prev_est{};
    double prev_diff = std::numeric_limits<double>::infinity();
    error = std::numeric_limits<double>::infinity();
    for (int n = 0; n < max_terms; ++n) {
        partial += next_term(n);
        diag.push_back(partial);
        for (std::size_t j = diag.size() - 1; j >= 1; --j)
            diag[j - 1] = 0.5 * (diag[j - 1] + diag[j]);
        const T est = diag.front();
        if (n >= 3) {
            const double diff = mag(est - prev_est);
            error = diff + 0.25 * prev_diff;
            value = est;
            if (error <= abs_tol && n >= 6) return;
            prev_diff = diff;
        }
        prev_est = est;
    }
    value = prev_est;
}

template <class T, class F>
void oscillatory_tail_impl(const F& w, double x, double L, double abs_tol, double rel_tol,
                           int max_panels, T& value, double& error) {
    (void)rel_tol;
    const double ax = std::fabs(x);
    const double half = pi / ax;
    // first cosine zero at or after L
    const double k0 = std::ceil(L * ax / pi - 0.5);
    const double z0 = (std::max(k0, 0.0) + 0.5) * pi / ax;
    T head{};
    double head_err = 0.0;
    if (z0 > L) {
        adaptive<T>([&](double lam) { return w(lam) * std::cos(lam * x); }, L, z0,
                    0.1 * abs_tol, 0.0, 200, head, head_err);
    }
    const int panel_budget = std::max(16, max_panels / 8);
    auto term = [&](int n) {
        const double a = z0 + n * half;
        const double b = a + half;
        T v;
        double e;
        adaptive<T>([&](double lam) { return w(lam) * std::cos(lam * x); }, a, b,
                    0.02 * abs_tol, 1e-13, 24, v, e);
        head_err += e;
        (void)panel_budget;
        return v;
    };
    T tail{};
    double tail_err = 0.0;
    euler_sum<T>(term, 0.5 * abs_tol, std::min(max_panels, 512), tail, tail_err);
    value = head + tail;
    error = head_err + tail_err;
}

template <class T, class F>
void tail_impl(const F& f, double L, double abs_tol, double rel_tol, int max_panels, T& value,
               double& error) {
    // t = 1/lambda; integrand has an integrable endpoint behavior at t=0
    auto g = [&](double t) { return f(1.0 / t) / (t * t); };
    adaptive<T>(g, 0.0, 1.0 / L, abs_tol, rel_tol, max_panels, value, error);
}

}  // namespace

KernelValue integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                      double rel_tol, int max_panels) {
    KernelValue out;
    adaptive<double>(f, a, b, abs_tol, rel_tol, max_panels, out.value, out.error_estimate);
    return out;
}

ComplexKernelValue integrate_c(const std::function<std::complex<double>(double)>& f, double a,
                               double b, double abs_tol, double rel_tol, int max_panels) {
    ComplexKernelValue out;
    adaptive<std::complex<double>>(f, a, b, abs_tol, rel_tol, max_panels, out.value,
                                   out.error_estimate);
    return out;
}

namespace {
void clean_breaks(std::vector<double>& b) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
}
}  // namespace

KernelValue integrate_seeded(const std::function<double(double)>& f, std::vector<double> breaks,
                             double abs_tol, double rel_tol, int max_panels) {
    clean_breaks(breaks);
    KernelValue out;
    adaptive_seeded<double>(f, breaks, abs_tol, rel_tol, max_panels, out.value,
                            out.error_estimate);
    return out;
}

ComplexKernelValue integrate_seeded_c(const std::function<std::complex<double>(double)>& f,
                                      std::vector<double> breaks, double abs_tol, double rel_tol,
                                      int max_panels) {
    clean_breaks(breaks);
    ComplexKernelValue out;
    adaptive_seeded<std::complex<double>>(f, breaks, abs_tol, rel_tol, max_panels, out.value,
                                          out.error_estimate);
    return out;
}

KernelValue integrate_tail(const std::function<double(double)>& f, double L, double abs_tol,
                           double rel_tol, int max_panels) {
    KernelValue out;
    tail_impl<double>(f, L, abs_tol, rel_tol, max_panels, out.value, out.error_estimate);
    return out;
}

ComplexKernelValue integrate_tail_c(const std::function<std::complex<double>(double)>& f, double L,
                                    double abs_tol, double rel_tol, int max_panels) {
    ComplexKernelValue out;
    tail_impl<std::complex<double>>(f, L, abs_tol, rel_tol, max_panels, out.value,
                                    out.error_estimate);
    return out;
}

KernelValue oscillatory_tail(const std::function<double(double)>& w, double x, double L,
                             double abs_tol, double rel_tol, int max_panels) {
    KernelValue out;
    oscillatory_tail_impl<double>(w, x, L, abs_tol, rel_tol, max_panels, out.value,
                                  out.error_estimate);
    return out;
}

ComplexKernelValue oscillatory_tail_c(const std::function<std::complex<double>(double)>& w,
                                      double x, double L, double abs_tol, double rel_tol,
                                      int max_panels) {
    ComplexKernelValue out;
    oscillatory_tail_impl<std::complex<double>>(w, x, L, abs_tol, rel_tol, max_panels, out.value,
                                                out.error_estimate);
    return out;
}

EndpointResult integrate_to_zero(const std::function<double(double)>& f, double b, double abs_tol,
                                 double rel_tol, int max_panels) {
    EndpointResult out;
    double hi = b;
    double sum = 0.0, err = 0.0;
    double prev = -1.0, ratio = 0.0, prev_ratio = 0.0;
    int divergent_count = 0;
    for (int k = 0; k < 220; ++k) {
        const double lo = 0.5 * hi;
        KernelValue panel = integrate(f, lo, hi, 0.05 * abs_tol, 0.1 * rel_tol,
                                      std::max(16, max_panels / 64));
        sum += panel.value;
        err += panel.error_estimate;
        if (prev > 0.0 && panel.value > 0.0) {
            ratio = panel.value / prev;
            // dyadic panels of a power-type endpoint are geometric:
            // ratio < 1 integrable, ratio >= 1 divergent
            if (ratio >= 0.999) {
                if (++divergent_count >= 8) {
                    out.diverged = true;
                    out.value = sum;
                    out.error = err;
                    out.last_ratio = ratio;
                    return out;
                }
            } else {
                divergent_count = 0;
                if (k >= 4 && ratio < 0.99) {
                    const double remainder = panel.value * ratio / (1.0 - ratio);
                    const double drift = (prev_ratio > 0.0) ? std::fabs(ratio - prev_ratio) : ratio;
                    const double rem_err =
                        remainder * std::min(1.0, drift / (1.0 - ratio)) + 0.01 * remainder;
                    if (rem_err <= std::max(abs_tol, rel_tol * (sum + remainder))) {
                        out.value = sum + remainder;
                        out.error = err + rem_err;
                        out.last_ratio = ratio;
                        return out;
                    }
                }
            }
            prev_ratio = ratio;
        }
        prev = panel.value;
        hi = lo;
    }
    // neither clean convergence nor clean divergence after 220 halvings
    out.inconclusive = true;
    out.value = sum;
    out.error = err;
    out.last_ratio = ratio;
    return out;
}

KernelValue integrate_line(const std::function<double(double)>& f, double core_halfwidth,
                           double abs_tol, double rel_tol, int max_panels, double max_halfwidth,
                           bool even_symmetry) {
    KernelValue core;
    if (even_symmetry) {
        core = integrate(f, 0.0, core_halfwidth, 0.125 * abs_tol, rel_tol, max_panels);
        core.value *= 2.0;
        core.error_estimate *= 2.0;
    } else {
        core = integrate(f, -core_halfwidth, core_halfwidth, 0.25 * abs_tol, rel_tol, max_panels);
    }
    double sum = core.value;
    double err = core.error_estimate;
    double lo = core_halfwidth;
    double prev_annulus = 0.0, prev_ratio = 0.0;
    while (lo < max_halfwidth) {
        const double hi = 2.0 * lo;
        KernelValue right = integrate(f, lo, hi, 0.02 * abs_tol, 0.1 * rel_tol,
                                      std::max(64, max_panels / 32));
        KernelValue left{0.0, 0.0};
        if (!even_symmetry)
            left = integrate(f, -hi, -lo, 0.02 * abs_tol, 0.1 * rel_tol,
                             std::max(64, max_panels / 32));
        const double annulus =
            even_symmetry ? 2.0 * right.value : right.value + left.value;
        sum += annulus;
        err += (even_symmetry ? 2.0 * right.error_estimate
                              : right.error_estimate + left.error_estimate);
        const double a_abs = std::fabs(annulus);
        if (prev_annulus != 0.0 && a_abs > 0.0) {
            const double ratio = a_abs / std::fabs(prev_annulus);
            if (ratio < 0.95) {
                // the geometric remainder is added as a correction; only its
                // uncertainty (ratio drift) has to meet the tolerance
                const double rem = annulus * ratio / (1.0 - ratio);
                const double drift = (prev_ratio > 0.0) ? std::fabs(ratio - prev_ratio) : ratio;
                const double rem_err =
                    std::fabs(rem) * std::min(1.0, drift / std::max(1e-12, 1.0 - ratio)) +
                    0.02 * std::fabs(rem);
                if (rem_err <= std::max(abs_tol, rel_tol * std::fabs(sum)) ||
                    2.0 * lo >= max_halfwidth) {
                    sum += rem;
                    err += rem_err;
                    return {sum, err};
                }
            }
            prev_ratio = ratio;
        }
        prev_annulus = annulus;
        lo = hi;
    }
    return {sum, err + std::fabs(prev_annulus)};
}

}  // namespace levykit::quad
