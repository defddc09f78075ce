#ifndef LEVYKIT_MONTECARLO_HPP
#define LEVYKIT_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "levykit/levy_model.hpp"
#include "levykit/quadrature.hpp"
#include "levykit/rng.hpp"

namespace levykit::mc {

/// Parallel runs reduce per-path results through order-independent pairwise
/// sums, so both modes produce bit-identical output; serial is kept as the
/// reference implementation for tests and benchmarks.
enum class Execution { serial, parallel };

struct PathConfig {
    double step_dt = 1e-3;
    double horizon_T = 10.0;
    std::int64_t n_paths = 10000;
    std::uint64_t seed = 1;
    double jump_threshold = 1e-3;          // for models without exact increments
    std::vector<double> epsilon_ladder = {0.2, 0.1, 0.05};  // strictly decreasing
    bool record_paths = false;
    /// hitting-time extrapolation is linear in epsilon^e; 0 selects the
    /// stable-model convention e = alpha - 1 (and 1 otherwise)
    double extrap_exponent = 0.0;
    void validate() const;
};

struct PathRecord {
    std::uint64_t path_id = 0;
    std::vector<double> kill_time;    // first entry into (-eps,eps), per ladder level; inf if censored
    double x_final = 0.0;             // position when the simulation of this path stopped
    double t_final = 0.0;
    std::uint32_t sign_changes = 0;   // grid-time sign flips before the smallest-ladder kill
    double weight = 1.0;              // 1 unless h-weighted downstream
    std::vector<double> skeleton_t, skeleton_x;  // filled when record_paths
};

struct PathEnsemble {
    PathConfig config;
    std::string model;
    double x0 = 0.0;
    std::vector<PathRecord> paths;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double n_effective = 0.0;
    double bias_bound = 0.0;  // epsilon-stopping bias where a bound is known
    std::string flag;         // empty when the estimate is considered reliable
};

/// one increment of the process over dt (exact for stable mixtures and
/// point-mass models; compound-Poisson-plus-Gaussian surrogate otherwise)
double sample_increment(const SymmetricLevyModel& m, double dt, CounterRng& rng);

PathEnsemble simulate_killed(const SymmetricLevyModel& m, double x0, const PathConfig& pc,
                             Execution exec = Execution::parallel);

McEstimate estimate_hitting_laplace(const SymmetricLevyModel& m, double x0, double q,
                                    const PathConfig& pc, Execution exec = Execution::parallel);

McEstimate estimate_never_hit(const SymmetricLevyModel& m, double x0, const PathConfig& pc,
                              Execution exec = Execution::parallel);

McEstimate estimate_harmonicity(const SymmetricLevyModel& m, double x0, double t,
                                const PathConfig& pc, const QuadratureConfig& quad = {},
                                Execution exec = Execution::parallel);

McEstimate estimate_two_point(const SymmetricLevyModel& m, double x0, double a,
                              const PathConfig& pc, Execution exec = Execution::parallel);

McEstimate hpath_estimate(const SymmetricLevyModel& m, double x0, double t,
                          const std::function<double(double)>& payoff, const PathConfig& pc,
                          const QuadratureConfig& quad = {},
                          Execution exec = Execution::parallel);

struct SignChangeCensus {
    double mean = 0.0;            // h-weighted mean count
    double median = 0.0;          // h-weighted median
    double q90 = 0.0;             // h-weighted 0.9 quantile
    double fraction_positive = 0.0;
    std::int64_t n_paths = 0;
};

/// grid-time sign changes before the smallest-ladder kill, h-weighted;
/// counts are lower bounds (intra-step crossings are not reconstructed)
SignChangeCensus sign_change_census(const SymmetricLevyModel& m, double x0, const PathConfig& pc,
                                    const QuadratureConfig& quad = {},
                                    Execution exec = Execution::parallel);

/// Kolmogorov-Smirnov distance of n one-step samples of X_t against the
/// quadrature transition density, with the 1% asymptotic critical value.
struct KsResult {
    double distance = 0.0;
    double critical_1pct = 0.0;
};
KsResult distribution_ks(const SymmetricLevyModel& m, double t, std::int64_t n, std::uint64_t seed,
                         const QuadratureConfig& quad = {}, Execution exec = Execution::parallel);

/// columnar text serialization, one path per record; see README for the grammar
void write_ensemble(std::ostream& os, const PathEnsemble& e);
PathEnsemble read_ensemble(std::istream& is);

}  // namespace levykit::mc

#endif
