#ifndef LEVYKIT_NUMERICS_HPP
#define LEVYKIT_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace levykit {

inline constexpr double pi = 3.141592653589793238462643383279503;

/// 1 - cos(u), evaluated as 2 sin^2(u/2) away from zero and by the
/// Taylor series of that form inside |u| < series_radius.
inline double one_minus_cos(double u, double series_radius = 1e-4) {
    const double au = std::fabs(u);
    if (au < series_radius) {
        const double u2 = u * u;
        return 0.5 * u2 * (1.0 - u2 / 12.0);
    }
    const double s = std::sin(0.5 * u);
    return 2.0 * s * s;
}

/// Pairwise summation over a fixed array. Order-independent of any thread
/// scheduling as long as the array contents are fixed, so reductions built
/// on it are bit-reproducible for every worker count.
double pairwise_sum(std::span<const double> v);

/// FNV-1a, used to fingerprint model/config snapshots in reports.
std::uint64_t fnv1a_hash(const std::string& s);
std::string hex64(std::uint64_t v);

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
/// Evaluation outside [x_front, x_back] clamps to the boundary cubic.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives
};

struct EvaluationError : std::runtime_error {
    double partial_value = 0.0;
    double error_estimate = 0.0;
    EvaluationError(const std::string& what, double partial, double err)
        : std::runtime_error(what), partial_value(partial), error_estimate(err) {}
};

}  // namespace levykit

#endif
