#include "levykit/conditions.hpp"

#include <cmath>

#include "levykit/spectral_kernels.hpp"

namespace levykit {

namespace {

// decade-wise partial integrals of 1/(1+theta); the fitted decay exponent of
// the increments decides convergence (increment over [10^k, 10^{k+1}] of a
// lambda^{-p} tail scales like 10^{k(1-p)})
bool condition_A_integral(const SymmetricLevyModel& m,
                          std::vector<std::pair<std::string, double>>& diag) {
    auto f = [&](double lam) { return 1.0 / (1.0 + m.theta(lam)); };
    double lo = 1.0;
    double prev = 0.0;
    double p_hat = 0.0;
    int decades = 0;
    for (int k = 0; k < 12; ++k) {
        const double hi = 10.0 * lo;
        auto inc = quad::integrate(f, lo, hi, 1e-12, 1e-10, 600);
        if (prev > 0.0 && inc.value > 0.0) {
            const double ratio = inc.value / prev;
            p_hat = 1.0 - std::log10(ratio);
            ++decades;
        }
        prev = inc.value;
        lo = hi;
    }
    diag.emplace_back("A_integral_decay_exponent", p_hat);
    diag.emplace_back("A_integral_last_decade_increment", prev);
    return decades > 0 && p_hat > 1.01;
}

bool condition_A_growth(const SymmetricLevyModel& m,
                        std::vector<std::pair<std::string, double>>& diag) {
    // monotone lower envelope of theta over a dyadic grid must keep growing
    std::vector<double> samples;
    for (int j = 0; j <= 40; ++j) samples.push_back(m.theta(std::ldexp(1.0, j)));
    double tail_min = samples.back();
    std::vector<double> envelope(samples.size());
    for (int j = static_cast<int>(samples.size()) - 1; j >= 0; --j) {
        tail_min = std::min(tail_min, samples[j]);
        envelope[j] = tail_min;
    }
    diag.emplace_back("A_envelope_first", envelope.front());
    diag.emplace_back("A_envelope_last", envelope.back());
    return envelope.back() > 1e3 && envelope.back() > 16.0 * envelope.front();
}

bool kesten_bretagnolle_small_jump(const SymmetricLevyModel& m,
                                   std::vector<std::pair<std::string, double>>& diag) {
    // either v > 0 or int_{(-1,1)} |x| nu(dx) = infinity
    if (m.gaussian_coeff() > 0.0) {
        diag.emplace_back("KB2_gaussian_coeff", m.gaussian_coeff());
        return true;
    }
    const double s = m.density_singularity_exponent();
    if (s > 0.0) {
        diag.emplace_back("KB2_singularity_exponent", s);
        return s >= 2.0;
    }
    diag.emplace_back("KB2_singularity_exponent", 0.0);
    return false;  // pure point masses without Gaussian part: compound Poisson
}

}  // namespace

ConditionReport check_conditions(const SymmetricLevyModel& m, const QuadratureConfig& cfg) {
    ConditionReport rep;

    const bool a_int = condition_A_integral(m, rep.diagnostics);
    const bool a_grow = condition_A_growth(m, rep.diagnostics);
    const bool a_kb2 = kesten_bretagnolle_small_jump(m, rep.diagnostics);
    rep.passes_A = a_int && a_grow && a_kb2;

    // (T): scan theta on a geometric grid above lambda0
    {
        bool monotone = true;
        double lam = std::max(1e-8, cfg.lambda0);
        double prev = m.theta(lam);
        double worst = 0.0;
        while (lam < 1e8) {
            lam *= 1.25;
            const double cur = m.theta(lam);
            if (cur < prev * (1.0 - 1e-12)) {
                monotone = false;
                worst = std::max(worst, (prev - cur) / std::max(prev, 1e-300));
            }
            prev = cur;
        }
        rep.passes_T = monotone;
        rep.diagnostics.emplace_back("T_worst_relative_drop", worst);
        rep.diagnostics.emplace_back("T_lambda0", cfg.lambda0);
    }

    // kappa and recurrence need condition (A) to make sense at all
    if (rep.passes_A) {
        try {
            rep.kappa = spectral::kappa(m, cfg);
        } catch (const EvaluationError& e) {
            rep.kappa_conclusive = false;
            rep.kappa = 0.0;
            rep.diagnostics.emplace_back("kappa_inconclusive_partial", e.partial_value);
        }
        rep.is_recurrent = rep.kappa_conclusive && rep.kappa == 0.0;
        rep.diagnostics.emplace_back("kappa", rep.kappa);

        // (B): x/h(x) on the dyadic grid x = 2^{-k}; genuine geometric decay
        // of the ratio sequence is the pass signal. A positive Gaussian
        // coefficient rules (B) out before any sampling.
        if (m.gaussian_coeff() > 0.0) {
            rep.passes_B = false;
            rep.diagnostics.emplace_back("B_gaussian_coeff", m.gaussian_coeff());
        } else {
            const int K = 12;
            std::vector<double> seq;
            for (int k = 1; k <= K; ++k) {
                const double x = std::ldexp(1.0, -k);
                seq.push_back(x / spectral::h_approx(m, 0.0, x, cfg).value);
            }
            double worst_step = 0.0;
            for (int k = K / 2; k + 1 <= K - 1; ++k)
                worst_step = std::max(worst_step, seq[k + 1] / seq[k]);
            rep.passes_B = worst_step < 0.995 && seq.back() < seq.front();
            rep.diagnostics.emplace_back("B_x_over_h_first", seq.front());
            rep.diagnostics.emplace_back("B_x_over_h_last", seq.back());
            rep.diagnostics.emplace_back("B_worst_consecutive_ratio", worst_step);
        }
    }
    return rep;
}

}  // namespace levykit
