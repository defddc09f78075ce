#ifndef LEVYKIT_QUADRATURE_HPP
#define LEVYKIT_QUADRATURE_HPP

#include <complex>
#include <functional>

#include "levykit/numerics.hpp"

namespace levykit {

/// Controls for the lambda-side (Fourier) integrals.
struct QuadratureConfig {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    int max_panels = 6000;
    /// tail cutoff policy: 0 means "auto from exponent growth", a positive
    /// value pins the split point between direct and tail integration.
    double fixed_tail_cutoff = 0.0;
    /// switch radius for the series form of 1-cos(lambda x)
    double zero_series_radius = 1e-4;
    /// lower bound of the region where the exponent is assumed monotone
    /// (condition (T) threshold); only affects where tail acceleration starts.
    double lambda0 = 1.0;
};

struct KernelValue {
    double value = 0.0;
    double error_estimate = 0.0;
};

struct ComplexKernelValue {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
};

namespace quad {

/// Adaptive Gauss-Kronrod 15 on [a,b].
KernelValue integrate(const std::function<double(double)>& f, double a, double b,
                      double abs_tol, double rel_tol, int max_panels);
ComplexKernelValue integrate_c(const std::function<std::complex<double>(double)>& f, double a,
                               double b, double abs_tol, double rel_tol, int max_panels);

/// Same, seeded with initial panel boundaries (sorted, deduplicated inside).
/// Use when the integrand has known structure (decay scales, peaks) that a
/// single starting panel would alias over.
KernelValue integrate_seeded(const std::function<double(double)>& f, std::vector<double> breaks,
                             double abs_tol, double rel_tol, int max_panels);
ComplexKernelValue integrate_seeded_c(const std::function<std::complex<double>(double)>& f,
                                      std::vector<double> breaks, double abs_tol, double rel_tol,
                                      int max_panels);

/// integral of f over [L, infinity) via the substitution t = 1/lambda.
/// Requires f to decay faster than 1/lambda eventually (true for every
/// weight 1/(q+theta), 1/theta, exp(-t theta) under condition (A)).
KernelValue integrate_tail(const std::function<double(double)>& f, double L, double abs_tol,
                           double rel_tol, int max_panels);
ComplexKernelValue integrate_tail_c(const std::function<std::complex<double>(double)>& f, double L,
                                    double abs_tol, double rel_tol, int max_panels);

/// integral of w(lambda) cos(lambda x) over [L, infinity), x != 0, by
/// half-period panels between consecutive zeros of the cosine with Euler
/// acceleration of the alternating panel sums.
KernelValue oscillatory_tail(const std::function<double(double)>& w, double x, double L,
                             double abs_tol, double rel_tol, int max_panels);
ComplexKernelValue oscillatory_tail_c(const std::function<std::complex<double>(double)>& w,
                                      double x, double L, double abs_tol, double rel_tol,
                                      int max_panels);

/// Dyadic refinement toward an endpoint singularity at zero:
/// integral of f over (0, b] with a power-type (integrable) singularity.
/// Detects divergence by the ratio of consecutive dyadic panel sums.
struct EndpointResult {
    double value = 0.0;
    double error = 0.0;
    bool diverged = false;
    bool inconclusive = false;
    double last_ratio = 0.0;
};
EndpointResult integrate_to_zero(const std::function<double(double)>& f, double b, double abs_tol,
                                 double rel_tol, int max_panels);

/// integral of f over the whole line where f decays like a power at
/// +-infinity. Expanding dyadic annuli with a geometric fit of the remainder;
/// the fitted remainder is added and its uncertainty folded into the error
/// estimate. even_symmetry evaluates the right half only and doubles it.
KernelValue integrate_line(const std::function<double(double)>& f, double core_halfwidth,
                           double abs_tol, double rel_tol, int max_panels,
                           double max_halfwidth = 1.0e7, bool even_symmetry = false);

}  // namespace quad
}  // namespace levykit

#endif
