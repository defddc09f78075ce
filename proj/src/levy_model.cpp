#include "levykit/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace levykit {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

SymmetricLevyModel SymmetricLevyModel::stable(double alpha, double scale) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("stable: alpha must be in (0,2]");
    if (!(scale > 0.0)) throw std::invalid_argument("stable: scale must be positive");
    SymmetricLevyModel m;
    m.family_ = LevyFamily::stable;
    m.components_ = {{alpha, scale}};
    if (alpha == 2.0) m.gaussian_coeff_ = scale;
    m.low_exp_ = m.high_exp_ = alpha;
    m.finalize("stable(alpha=" + fmt(alpha) + ",scale=" + fmt(scale) + ")");
    return m;
}

SymmetricLevyModel SymmetricLevyModel::brownian() { return stable(2.0, 1.0); }

SymmetricLevyModel SymmetricLevyModel::stable_mixture(std::vector<StableComponent> components) {
    if (components.empty()) throw std::invalid_argument("stable_mixture: no components");
    SymmetricLevyModel m;
    m.family_ = LevyFamily::stable_mixture;
    double lo = 2.0, hi = 0.0;
    std::string desc = "stable_mixture(";
    for (const auto& c : components) {
        if (!(c.alpha > 0.0 && c.alpha <= 2.0) || !(c.scale > 0.0))
            throw std::invalid_argument("stable_mixture: bad component");
        if (c.alpha == 2.0) m.gaussian_coeff_ += c.scale;
        lo = std::min(lo, c.alpha);
        hi = std::max(hi, c.alpha);
        desc += "(" + fmt(c.alpha) + "," + fmt(c.scale) + ")";
    }
    m.components_ = std::move(components);
    m.low_exp_ = lo;
    m.high_exp_ = hi;
    m.finalize(desc + ")");
    return m;
}

SymmetricLevyModel SymmetricLevyModel::tempered_stable(double alpha, double scale,
                                                       double tempering) {
    if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0)
        throw std::invalid_argument("tempered_stable: alpha must be in (0,1)u(1,2)");
    if (!(scale > 0.0) || !(tempering > 0.0))
        throw std::invalid_argument("tempered_stable: scale and tempering must be positive");
    SymmetricLevyModel m;
    m.family_ = LevyFamily::tempered_stable;
    m.tempered_alpha_ = alpha;
    m.tempered_scale_ = scale;
    m.tempered_rate_ = tempering;
    m.low_exp_ = 2.0;  // finite variance: theta ~ c lambda^2 at the origin
    m.high_exp_ = alpha;
    m.finalize("tempered_stable(alpha=" + fmt(alpha) + ",scale=" + fmt(scale) +
               ",tempering=" + fmt(tempering) + ")");
    return m;
}

SymmetricLevyModel SymmetricLevyModel::point_masses(
    std::vector<std::pair<double, double>> location_mass, double gaussian_coeff) {
    if (location_mass.empty() && gaussian_coeff == 0.0)
        throw std::invalid_argument("point_masses: empty model");
    if (gaussian_coeff < 0.0) throw std::invalid_argument("point_masses: gaussian_coeff < 0");
    SymmetricLevyModel m;
    m.family_ = LevyFamily::point_masses;
    m.gaussian_coeff_ = gaussian_coeff;
    std::string desc = "point_masses(v=" + fmt(gaussian_coeff);
    for (const auto& [loc, mass] : location_mass) {
        if (!(loc > 0.0) || !(mass > 0.0))
            throw std::invalid_argument("point_masses: locations and masses must be positive");
        desc += ",(" + fmt(loc) + "," + fmt(mass) + ")";
    }
    m.point_jumps_ = std::move(location_mass);
    m.low_exp_ = 2.0;
    m.high_exp_ = gaussian_coeff > 0.0 ? 2.0 : 0.0;
    m.finalize(desc + ")");
    return m;
}

SymmetricLevyModel SymmetricLevyModel::from_user_density(UserDensity spec, double gaussian_coeff) {
    if (!spec.density) throw std::invalid_argument("user_density: missing callable");
    if (!(spec.singularity_exponent < 3.0))
        throw std::invalid_argument("user_density: singularity exponent must be < 3");
    if (!(spec.tail_exponent > 0.0))
        throw std::invalid_argument("user_density: tail exponent must be > 0");
    if (gaussian_coeff < 0.0) throw std::invalid_argument("user_density: gaussian_coeff < 0");
    SymmetricLevyModel m;
    m.family_ = LevyFamily::user_density;
    m.gaussian_coeff_ = gaussian_coeff;
    m.user_ = std::make_shared<const UserDensity>(std::move(spec));
    m.low_exp_ = std::min(2.0, m.user_->tail_exponent);
    if (gaussian_coeff > 0.0)
        m.high_exp_ = 2.0;
    else
        m.high_exp_ = std::clamp(m.user_->singularity_exponent - 1.0, 1e-3, 2.0);

    // cache log theta on a log-lambda grid; the jump integral is smooth so a
    // moderately dense spline reproduces it to ~1e-10 relative
    const int n = 700;
    const double lo = std::log(1e-7), hi = std::log(1e7);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = lo + (hi - lo) * i / (n - 1);
        ys[i] = std::log(m.theta_quadrature(std::exp(xs[i])));
    }
    m.log_theta_spline_ = std::make_shared<const CubicSpline>(xs, ys);
    m.spline_lo_ = std::exp(lo);
    m.spline_hi_ = std::exp(hi);
    m.spline_c_lo_ = std::exp(ys.front());
    m.spline_c_hi_ = std::exp(ys.back());
    m.finalize("user_density(v=" + fmt(gaussian_coeff) +
               ",s=" + fmt(m.user_->singularity_exponent) + ",a=" + fmt(m.user_->tail_exponent) +
               ")");
    return m;
}

void SymmetricLevyModel::finalize(std::string description) { description_ = std::move(description); }

bool SymmetricLevyModel::has_closed_form_exponent() const {
    return family_ != LevyFamily::user_density;
}

bool SymmetricLevyModel::exact_increments() const {
    switch (family_) {
        case LevyFamily::stable:
        case LevyFamily::stable_mixture:
        case LevyFamily::point_masses:
            return true;
        default:
            return false;
    }
}

double SymmetricLevyModel::theta(double lambda) const {
    const double al = std::fabs(lambda);
    if (al == 0.0) return 0.0;
    switch (family_) {
        case LevyFamily::stable:
        case LevyFamily::stable_mixture: {
            double s = 0.0;
            for (const auto& c : components_) s += c.scale * std::pow(al, c.alpha);
            return s;
        }
        case LevyFamily::tempered_stable: {
            const double a = tempered_alpha_, mrate = tempered_rate_;
            const double r = std::hypot(mrate, al);
            const double phi = std::atan2(al, mrate);
            const double bracket = std::pow(r, a) * std::cos(a * phi) - std::pow(mrate, a);
            return gaussian_coeff_ * al * al -
                   2.0 * tempered_scale_ * std::tgamma(-a) * bracket;
        }
        case LevyFamily::point_masses: {
            double s = gaussian_coeff_ * al * al;
            for (const auto& [loc, mass] : point_jumps_) s += 2.0 * mass * one_minus_cos(al * loc);
            return s;
        }
        case LevyFamily::user_density: {
            if (al >= spline_lo_ && al <= spline_hi_)
                return std::exp((*log_theta_spline_)(std::log(al)));
            if (al < spline_lo_) return spline_c_lo_ * std::pow(al / spline_lo_, low_exp_);
            return spline_c_hi_ * std::pow(al / spline_hi_, high_exp_);
        }
    }
    return 0.0;
}

double SymmetricLevyModel::theta_quadrature(double lambda) const {
    // substitute u = lambda x: the oscillation grid becomes lambda-free and
    // no cancellation appears at either end of the frequency range
    const double al = std::max(std::fabs(lambda), 1e-300);
    const auto& nu = user_->density;
    auto g = [&](double u) { return nu(u / al) / al; };
    const double rel_tol = 1e-9;
    auto near = quad::integrate_to_zero([&](double u) { return one_minus_cos(u) * g(u); },
                                        pi / 2.0, 1e-300, rel_tol, 4000);
    if (near.diverged || near.inconclusive)
        throw EvaluationError("theta quadrature did not settle near 0", near.value, near.error);
    auto flat = quad::integrate_tail(g, pi / 2.0, 1e-300, rel_tol, 4000);
    auto osc = quad::oscillatory_tail(g, 1.0, pi / 2.0,
                                      std::max(1e-300, 1e-9 * flat.value), rel_tol, 4000);
    const double jump_part = 2.0 * (near.value + flat.value - osc.value);
    const double err = 2.0 * (near.error + flat.error_estimate + osc.error_estimate);
    const double value = gaussian_coeff_ * al * al + jump_part;
    if (!(err < 1e-5 * std::max(std::fabs(value), 1e-280)))
        throw EvaluationError("theta quadrature did not converge", value, err);
    return value;
}

double SymmetricLevyModel::levy_density(double x) const {
    switch (family_) {
        case LevyFamily::tempered_stable:
            return tempered_scale_ * std::exp(-tempered_rate_ * x) /
                   std::pow(x, 1.0 + tempered_alpha_);
        case LevyFamily::user_density:
            return user_->density(x);
        default:
            throw std::logic_error("levy_density: family has no density surrogate");
    }
}

double SymmetricLevyModel::density_singularity_exponent() const {
    switch (family_) {
        case LevyFamily::stable:
        case LevyFamily::stable_mixture: {
            double s = 0.0;
            for (const auto& c : components_)
                if (c.alpha < 2.0) s = std::max(s, 1.0 + c.alpha);
            return s;
        }
        case LevyFamily::tempered_stable:
            return 1.0 + tempered_alpha_;
        case LevyFamily::user_density:
            return user_->singularity_exponent;
        default:
            return 0.0;
    }
}

double SymmetricLevyModel::density_tail_exponent() const {
    switch (family_) {
        case LevyFamily::stable:
        case LevyFamily::stable_mixture: {
            double a = 2.0;
            for (const auto& c : components_)
                if (c.alpha < 2.0) a = std::min(a, c.alpha);
            return a;
        }
        case LevyFamily::tempered_stable:
            return std::numeric_limits<double>::infinity();  // exponential tail
        case LevyFamily::user_density:
            return user_->tail_exponent;
        default:
            return std::numeric_limits<double>::infinity();
    }
}

}  // namespace levykit
