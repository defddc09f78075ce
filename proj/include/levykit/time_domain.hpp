#ifndef LEVYKIT_TIME_DOMAIN_HPP
#define LEVYKIT_TIME_DOMAIN_HPP

#include <vector>

#include "levykit/levy_model.hpp"
#include "levykit/quadrature.hpp"

namespace levykit::timedomain {

struct LaplaceInversionConfig {
    enum class Method { fixed_talbot, gaver_stehfest };
    Method method = Method::fixed_talbot;
    int node_count = 32;  // even and >= 8 for gaver_stehfest
    /// inner tolerance for the contour evaluations of u_q
    double working_tolerance = 1e-12;
};

struct TimeGrid {
    std::vector<double> times;  // strictly increasing, all positive
    explicit TimeGrid(std::vector<double> t);
};

/// R(t): excursion-measure mass of lifetimes exceeding t, the Laplace
/// inverse of q -> 1/(q u_q(0)). Decreasing, R(t) -> kappa.
double lifetime_survival(const SymmetricLevyModel& m, double t, const QuadratureConfig& quad = {},
                         const LaplaceInversionConfig& inv = {});

/// rho(t) = -R'(t); with the Talbot method the contour is differentiated
/// analytically, with Gaver-Stehfest a step-controlled central difference
/// of R is used.
double lifetime_density(const SymmetricLevyModel& m, double t, const QuadratureConfig& quad = {},
                        const LaplaceInversionConfig& inv = {});

/// rho(t,x): Laplace inverse in q of u_q(x)/u_q(0); simultaneously the
/// space density of the entrance law at t and the density of the hitting
/// time of the origin from x.
double entrance_density(const SymmetricLevyModel& m, double t, double x,
                        const QuadratureConfig& quad = {},
                        const LaplaceInversionConfig& inv = {});

/// the same density through the R * p_s convolution representation; kept as
/// an independent cross-check route of entrance_density
double entrance_density_alt(const SymmetricLevyModel& m, double t, double x,
                            const QuadratureConfig& quad = {},
                            const LaplaceInversionConfig& inv = {});

/// killed transition density p^0_t(x,y) = p_t(y-x) - int_0^t p_{t-s}(y) rho(s,x) ds,
/// clamped at zero (pass clamp_residual to inspect the raw negative part)
double killed_transition(const SymmetricLevyModel& m, double t, double x, double y,
                         const QuadratureConfig& quad = {}, const LaplaceInversionConfig& inv = {},
                         double* clamp_residual = nullptr);

/// h-path transition density with respect to h(y)^2 dy: interior
/// p^0/(h h), boundary rows rho(t,x)/h(x), corner rho(t)
double hpath_transition(const SymmetricLevyModel& m, double t, double x, double y,
                        const QuadratureConfig& quad = {},
                        const LaplaceInversionConfig& inv = {});

/// batch over a TimeGrid, parallelized across grid points with output in
/// grid order
std::vector<double> lifetime_survival_grid(const SymmetricLevyModel& m, const TimeGrid& grid,
                                           const QuadratureConfig& quad = {},
                                           const LaplaceInversionConfig& inv = {});
std::vector<double> lifetime_density_grid(const SymmetricLevyModel& m, const TimeGrid& grid,
                                          const QuadratureConfig& quad = {},
                                          const LaplaceInversionConfig& inv = {});

}  // namespace levykit::timedomain

#endif
