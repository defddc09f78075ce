#ifndef LEVYKIT_LEVY_MODEL_HPP
#define LEVYKIT_LEVY_MODEL_HPP

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "levykit/numerics.hpp"
#include "levykit/quadrature.hpp"

namespace levykit {

enum class LevyFamily { stable, stable_mixture, tempered_stable, point_masses, user_density };

struct StableComponent {
    double alpha;  // in (0, 2]
    double scale;  // coefficient of |lambda|^alpha in the exponent
};

/// Escape hatch: a symmetric Lévy density on (0,inf) given as a callable,
/// with declared endpoint behavior. singularity_exponent s means
/// density ~ x^{-s} near 0 (s < 3 so that x^2 is integrable there);
/// tail_exponent a means density ~ x^{-1-a} at infinity (a > 0).
struct UserDensity {
    std::function<double(double)> density;
    double singularity_exponent;
    double tail_exponent;
};

/// A symmetric Lévy process model: Gaussian coefficient v plus the (0,inf)
/// half of a symmetric Lévy measure. The characteristic exponent is
///   theta(lambda) = v lambda^2 + 2 int_0^inf (1 - cos(lambda x)) nu(dx),
/// evaluated in closed form where the family admits one and by adaptive
/// quadrature otherwise. Instances are immutable and safe to share across
/// threads.
class SymmetricLevyModel {
public:
    static SymmetricLevyModel stable(double alpha, double scale = 1.0);
    static SymmetricLevyModel brownian();  // theta = lambda^2
    static SymmetricLevyModel stable_mixture(std::vector<StableComponent> components);
    static SymmetricLevyModel tempered_stable(double alpha, double scale, double tempering);
    static SymmetricLevyModel point_masses(std::vector<std::pair<double, double>> location_mass,
                                           double gaussian_coeff = 0.0);
    static SymmetricLevyModel from_user_density(UserDensity spec, double gaussian_coeff = 0.0);

    double theta(double lambda) const;
    bool has_closed_form_exponent() const;

    LevyFamily family() const { return family_; }
    double gaussian_coeff() const { return gaussian_coeff_; }

    /// theta ~ c lambda^{p} as lambda -> 0 resp. infinity; used only to seed
    /// truncation points and extrapolations, never as a substitute for
    /// evaluation.
    double low_freq_exponent() const { return low_exp_; }
    double high_freq_exponent() const { return high_exp_; }

    /// Exact-increment sampling is available when the model is a (mixture
    /// of) stable components, possibly plus a Gaussian part.
    bool exact_increments() const;
    const std::vector<StableComponent>& stable_components() const { return components_; }
    const std::vector<std::pair<double, double>>& point_mass_jumps() const { return point_jumps_; }

    /// Lévy density on (0,inf) for the jump-sampler surrogate; throws for
    /// families without a density (point masses) or with none needed.
    double levy_density(double x) const;
    double density_singularity_exponent() const;
    double density_tail_exponent() const;

    /// canonical one-line description, also the hashing key for reports
    const std::string& describe() const { return description_; }

private:
    SymmetricLevyModel() = default;

    LevyFamily family_ = LevyFamily::stable;
    double gaussian_coeff_ = 0.0;
    std::vector<StableComponent> components_;              // stable / mixture
    double tempered_alpha_ = 0.0, tempered_scale_ = 0.0, tempered_rate_ = 0.0;
    std::vector<std::pair<double, double>> point_jumps_;   // (location, mass)
    std::shared_ptr<const UserDensity> user_;              // user_density
    std::shared_ptr<const CubicSpline> log_theta_spline_;  // cache for user models
    double spline_lo_ = 0.0, spline_hi_ = 0.0;
    double spline_c_lo_ = 0.0, spline_c_hi_ = 0.0;  // power extrapolation coefficients
    double low_exp_ = 2.0, high_exp_ = 2.0;
    std::string description_;

    double theta_quadrature(double lambda) const;
    void finalize(std::string description);
};

}  // namespace levykit

#endif
