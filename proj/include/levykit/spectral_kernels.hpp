#ifndef LEVYKIT_SPECTRAL_KERNELS_HPP
#define LEVYKIT_SPECTRAL_KERNELS_HPP

#include <complex>
#include <string>

#include "levykit/levy_model.hpp"
#include "levykit/quadrature.hpp"

namespace levykit::spectral {

/// resolvent density u_q(x) = (1/pi) int_0^inf cos(lambda x) / (q + theta) dlambda, q > 0
KernelValue resolvent_u(const SymmetricLevyModel& m, double q, double x,
                        const QuadratureConfig& cfg = {});

/// same integral continued to complex q off the negative reals; used by the
/// Laplace-inversion contours
ComplexKernelValue resolvent_u_complex(const SymmetricLevyModel& m, std::complex<double> q,
                                       double x, const QuadratureConfig& cfg = {});

/// transition density p_t(x) = (1/pi) int_0^inf cos(lambda x) e^{-t theta} dlambda, t > 0
KernelValue transition_p(const SymmetricLevyModel& m, double t, double x,
                         const QuadratureConfig& cfg = {});

/// d/dt p_t(x) = -(1/pi) int_0^inf theta cos(lambda x) e^{-t theta} dlambda
KernelValue transition_p_time_derivative(const SymmetricLevyModel& m, double t, double x,
                                         const QuadratureConfig& cfg = {});

/// h_q(x) = (1/pi) int_0^inf (1 - cos lambda x) / (q + theta) dlambda, q >= 0;
/// q = 0 gives the harmonic function h itself
KernelValue h_approx(const SymmetricLevyModel& m, double q, double x,
                     const QuadratureConfig& cfg = {});

/// kappa = [ (1/pi) int_0^inf dlambda/theta ]^{-1}, 0 when the integral
/// diverges at the origin (the recurrent case)
double kappa(const SymmetricLevyModel& m, const QuadratureConfig& cfg = {});

/// h(x)/|x|^{alpha-1} for the stable family: Gamma(2-alpha)/(pi (alpha-1)) sin(alpha pi/2)
/// for alpha in (1,2), and the limit value 1/2 at alpha = 2
double c_alpha(double alpha);

/// killed resolvent density u^0_q(x,y); q = 0 gives the Green function via
/// the h-representation (never as a numeric q -> 0 limit)
KernelValue killed_resolvent(const SymmetricLevyModel& m, double q, double x, double y,
                             const QuadratureConfig& cfg = {});

/// h-path resolvent density with respect to h(y)^2 dy; boundary rows included
KernelValue hpath_resolvent(const SymmetricLevyModel& m, double q, double x, double y,
                            const QuadratureConfig& cfg = {});

/// E_x[e^{-q T_0}] = u_q(x)/u_q(0), in (0,1]
double hitting_laplace(const SymmetricLevyModel& m, double q, double x,
                       const QuadratureConfig& cfg = {});

/// P_x(T_0 = infinity) = kappa h(x)
double never_hit_probability(const SymmetricLevyModel& m, double x,
                             const QuadratureConfig& cfg = {});

/// h_B(x) = 2 h(x) - kappa h(x)^2
double barlow_hB(const SymmetricLevyModel& m, double x, const QuadratureConfig& cfg = {});

/// P_x(T_a < T_0) = [h(a) - h(a-x) + h(x) - kappa h(x) h(a)] / h_B(a),
/// clamped to [0,1]; pass clamp_residual to see how far outside it landed
double two_point_hitting(const SymmetricLevyModel& m, double x, double a,
                         const QuadratureConfig& cfg = {}, double* clamp_residual = nullptr);

/// excursion-measure mass of paths hitting a: (1 - kappa h(a)) / h_B(a).
/// The underlying result assumes (B) and (T); a cheap probe appends a note
/// to *warning when those look violated.
double excursion_hits_point(const SymmetricLevyModel& m, double a,
                            const QuadratureConfig& cfg = {}, std::string* warning = nullptr);

/// cached u_q(0) (real q > 0); the cache is shared and thread-safe
KernelValue resolvent_at_zero(const SymmetricLevyModel& m, double q,
                              const QuadratureConfig& cfg = {});

}  // namespace levykit::spectral

#endif
