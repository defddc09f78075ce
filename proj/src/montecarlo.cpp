#include "levykit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>

#include "levykit/numerics.hpp"
#include "levykit/spectral_kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levykit::mc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- increment sampling --------------------------------------------------

struct SurrogateTables {
    double sigma = 0.0;        // Gaussian surrogate std-dev per step
    double intensity = 0.0;    // two-sided jump rate above the threshold
    CubicSpline inv_cdf;       // |jump| as a function of uniform quantile
    double cdf_top = 1.0;      // quantile covered by the table
    double x_top = 0.0;        // largest tabulated jump
    double tail_exp = 1.0;     // power tail for draws beyond the table
};

struct StepSampler {
    bool exact = false;
    // exact path: stable components (alpha, amplitude) and point-mass jumps
    std::vector<std::pair<double, double>> cms;          // (alpha, (c dt)^{1/alpha})
    std::vector<std::pair<double, double>> point_jumps;  // (location, mass*dt per side)
    double gauss_sigma = 0.0;                            // from the Gaussian coefficient
    std::shared_ptr<const SurrogateTables> surrogate;

    double draw(CounterRng& rng) const {
        double dx = 0.0;
        for (const auto& [alpha, amp] : cms) dx += amp * rng.stable_standard(alpha);
        for (const auto& [loc, mean] : point_jumps) {
            const long up = rng.poisson(mean);
            const long dn = rng.poisson(mean);
            dx += loc * static_cast<double>(up - dn);
        }
        if (gauss_sigma > 0.0) dx += gauss_sigma * rng.gaussian();
        if (surrogate) {
            const auto& s = *surrogate;
            if (s.sigma > 0.0) dx += s.sigma * rng.gaussian();
            const unsigned n = rng.poisson(s.intensity);
            for (unsigned j = 0; j < n; ++j) {
                const double u = rng.uniform();
                double mag;
                if (u <= s.cdf_top)
                    mag = s.inv_cdf(u);
                else
                    mag = s.x_top *
                          std::pow((1.0 - s.cdf_top) / std::max(1.0 - u, 1e-300), 1.0 / s.tail_exp);
                dx += (rng.uniform() < 0.5 ? mag : -mag);
            }
        }
        return dx;
    }
};

StepSampler build_sampler(const SymmetricLevyModel& m, double dt, double threshold) {
    StepSampler s;
    switch (m.family()) {
        case LevyFamily::stable:
        case LevyFamily::stable_mixture: {
            s.exact = true;
            for (const auto& c : m.stable_components())
                s.cms.emplace_back(c.alpha, std::pow(c.scale * dt, 1.0 / c.alpha));
            return s;
        }
        case LevyFamily::point_masses: {
            s.exact = true;
            for (const auto& [loc, mass] : m.point_mass_jumps())
                s.point_jumps.emplace_back(loc, mass * dt);
            if (m.gaussian_coeff() > 0.0) s.gauss_sigma = std::sqrt(2.0 * m.gaussian_coeff() * dt);
            return s;
        }
        default:
            break;
    }
    // small jumps become a variance-matched Gaussian, larger ones an exact
    // compound Poisson draw from the tabulated tail
    if (!(threshold > 0.0)) throw std::invalid_argument("sample_increment: jump_threshold <= 0");
    auto tables = std::make_shared<SurrogateTables>();
    auto nu = [&](double x) { return m.levy_density(x); };
    auto second_moment = quad::integrate_to_zero([&](double x) { return x * x * nu(x); },
                                                 threshold, 1e-14, 1e-10, 4000);
    if (second_moment.diverged || second_moment.inconclusive)
        throw EvaluationError("sample_increment: small-jump variance did not converge",
                              second_moment.value, second_moment.error);
    tables->sigma = std::sqrt(2.0 * dt * (m.gaussian_coeff() + second_moment.value));
    auto tail_mass = quad::integrate_tail(nu, threshold, 1e-14, 1e-10, 4000);
    tables->intensity = 2.0 * dt * tail_mass.value;
    // inverse CDF of the normalized tail on a log grid
    double x_top = threshold;
    while (quad::integrate_tail(nu, x_top, 1e-14, 1e-8, 2000).value > 1e-7 * tail_mass.value &&
           x_top < 1e12)
        x_top *= 2.0;
    const int n = 400;
    std::vector<double> cdf(n, 0.0), xs(n, 0.0);
    double acc = 0.0;
    double prev = threshold;
    xs[0] = threshold;
    for (int i = 1; i < n; ++i) {
        const double xi = threshold * std::pow(x_top / threshold, double(i) / (n - 1));
        acc += quad::integrate(nu, prev, xi, 1e-14, 1e-9, 400).value;
        xs[i] = xi;
        cdf[i] = acc / tail_mass.value;
        prev = xi;
    }
    // strictly increasing quantile grid for the spline
    std::vector<double> qx, qy;
    for (int i = 0; i < n; ++i) {
        if (qx.empty() || cdf[i] > qx.back() + 1e-12) {
            qx.push_back(cdf[i]);
            qy.push_back(xs[i]);
        }
    }
    tables->inv_cdf = CubicSpline(qx, qy);
    tables->cdf_top = qx.back();
    tables->x_top = qy.back();
    tables->tail_exp = std::isfinite(m.density_tail_exponent()) ? m.density_tail_exponent() : 20.0;
    s.surrogate = std::move(tables);
    return s;
}

const StepSampler& cached_sampler(const SymmetricLevyModel& m, double dt, double threshold) {
    static std::mutex mu;
    static std::map<std::tuple<std::uint64_t, double, double>, std::unique_ptr<StepSampler>> cache;
    const auto key = std::make_tuple(fnv1a_hash(m.describe()), dt, threshold);
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<StepSampler>(build_sampler(m, dt, threshold)))
                 .first;
    return *it->second;
}

// ---- h lookup table (spline over log|x|) ----------------------------------

struct HTable {
    CubicSpline spline;  // h vs log|x| on [x_lo, x_hi]
    double x_lo, x_hi, h_lo, h_hi, slope_lo, slope_hi;
    double at(double x) const {
        const double ax = std::fabs(x);
        if (ax == 0.0) return 0.0;
        if (ax < x_lo) return h_lo * std::pow(ax / x_lo, slope_lo);
        if (ax > x_hi) return h_hi * std::pow(ax / x_hi, slope_hi);
        return spline(std::log(ax));
    }
};

const HTable& h_table(const SymmetricLevyModel& m, const QuadratureConfig& quad) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<HTable>> cache;
    {
        std::lock_guard lock(mu);
        auto it = cache.find(fnv1a_hash(m.describe()));
        if (it != cache.end()) return *it->second;
    }
    const double x_lo = 1e-6, x_hi = 1e5;
    const int n = 320;
    std::vector<double> lx(n), hv(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel())
#endif
    for (int i = 0; i < n; ++i) {
        lx[i] = std::log(x_lo) + (std::log(x_hi) - std::log(x_lo)) * i / (n - 1);
        hv[i] = spectral::h_approx(m, 0.0, std::exp(lx[i]), quad).value;
    }
    auto table = std::make_unique<HTable>();
    table->spline = CubicSpline(lx, hv);
    table->x_lo = x_lo;
    table->x_hi = x_hi;
    table->h_lo = hv.front();
    table->h_hi = hv.back();
    table->slope_lo = std::log(hv[1] / hv[0]) / (lx[1] - lx[0]);
    table->slope_hi = std::log(hv[n - 1] / hv[n - 2]) / (lx[n - 1] - lx[n - 2]);
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.emplace(fnv1a_hash(m.describe()), std::move(table));
    (void)inserted;
    return *it->second;
}

// ---- path engine -----------------------------------------------------------

struct EngineOptions {
    double observe_time = -1.0;  // record x at t ^ T_eps per ladder level
    double two_point_a = 0.0;    // track entry into (a-eps, a+eps) when nonzero
    bool record_skeleton = false;
    bool stop_after_observe = false;  // kill times past the observation are unused
};

struct PathObservation {
    std::vector<double> kill_time;      // per ladder level
    std::vector<double> a_hit_time;     // per ladder level (two-point mode)
    std::vector<double> x_at_stop;      // per level: x at min(observe_time, kill)
    std::vector<char> alive_at_t;       // per level
    double x_final = 0.0, t_final = 0.0;
    std::uint32_t sign_changes = 0;
    std::vector<double> skeleton_t, skeleton_x;
};

void run_one_path(const StepSampler& sampler, double x0,
                  const PathConfig& pc, const EngineOptions& opt, std::uint64_t path_id,
                  PathObservation& obs) {
    CounterRng rng(pc.seed, path_id);
    const std::size_t L = pc.epsilon_ladder.size();
    obs.kill_time.assign(L, kInf);
    obs.a_hit_time.assign(L, opt.two_point_a != 0.0 ? kInf : 0.0);
    const bool observing = opt.observe_time >= 0.0;
    obs.x_at_stop.assign(observing ? L : 0, 0.0);
    obs.alive_at_t.assign(observing ? L : 0, 0);
    std::size_t next_kill = 0;    // ladder levels are hit in order
    std::size_t next_a_hit = 0;
    bool observed = false;
    double x = x0;
    double t = 0.0;
    const auto steps = static_cast<std::int64_t>(std::ceil(pc.horizon_T / pc.step_dt));
    if (opt.record_skeleton) {
        obs.skeleton_t.push_back(0.0);
        obs.skeleton_x.push_back(x0);
    }
    int prev_sign = (x0 > 0.0) ? 1 : -1;
    for (std::int64_t k = 1; k <= steps; ++k) {
        x += sampler.draw(rng);
        t = static_cast<double>(k) * pc.step_dt;
        if (opt.record_skeleton) {
            obs.skeleton_t.push_back(t);
            obs.skeleton_x.push_back(x);
        }
        // killing first: a level reached at grid time t stops X_{t ^ T_eps}
        const double ax = std::fabs(x);
        while (next_kill < L && ax < pc.epsilon_ladder[next_kill]) {
            obs.kill_time[next_kill] = t;
            if (observing && !observed) {
                obs.x_at_stop[next_kill] = x;
                obs.alive_at_t[next_kill] = 0;
            }
            ++next_kill;
        }
        if (observing && !observed && t >= opt.observe_time) {
            for (std::size_t j = next_kill; j < L; ++j) {
                obs.x_at_stop[j] = x;
                obs.alive_at_t[j] = 1;
            }
            observed = true;
        }
        // census counts grid-time flips strictly before the smallest-ladder kill
        const int sign = (x > 0.0) ? 1 : (x < 0.0 ? -1 : 0);
        if (sign != 0) {
            if (next_kill < L && sign != prev_sign) ++obs.sign_changes;
            prev_sign = sign;
        }
        if (opt.two_point_a != 0.0 && next_a_hit < L) {
            const double da = std::fabs(x - opt.two_point_a);
            while (next_a_hit < L && da < pc.epsilon_ladder[next_a_hit]) {
                obs.a_hit_time[next_a_hit] = t;
                ++next_a_hit;
            }
        }
        if (!opt.record_skeleton) {
            if (opt.stop_after_observe && observed) break;
            const bool kills_done = next_kill >= L;
            // in the two-point race a level is decided by whichever interval
            // is entered first, so it resolves once either index runs out
            const bool race_resolved = opt.two_point_a == 0.0
                                           ? kills_done
                                           : (kills_done || next_a_hit >= L);
            const bool obs_done = !observing || observed || kills_done;
            if (race_resolved && obs_done) break;
        }
    }
    obs.x_final = x;
    obs.t_final = t;
}

template <class PerPath>
void run_ensemble(const SymmetricLevyModel& m, double x0, const PathConfig& pc,
                  const EngineOptions& opt, Execution exec, const PerPath& store) {
    pc.validate();
    const StepSampler& sampler = cached_sampler(m, pc.step_dt, pc.jump_threshold);
    const std::int64_t n = pc.n_paths;
    if (exec == Execution::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
        for (std::int64_t i = 0; i < n; ++i) {
            PathObservation obs;
            run_one_path(sampler, x0, pc, opt, static_cast<std::uint64_t>(i), obs);
            store(static_cast<std::size_t>(i), obs);
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i) {
            PathObservation obs;
            run_one_path(sampler, x0, pc, opt, static_cast<std::uint64_t>(i), obs);
            store(static_cast<std::size_t>(i), obs);
        }
    }
}

struct MeanSE {
    double mean = 0.0, se = 0.0;
};

MeanSE mean_se(std::span<const double> v) {
    const auto n = static_cast<double>(v.size());
    if (v.empty()) return {};
    const double mean = pairwise_sum(v) / n;
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
    const double var = v.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

double auto_exponent(const SymmetricLevyModel& m, const PathConfig& pc) {
    if (pc.extrap_exponent > 0.0) return pc.extrap_exponent;
    if (m.family() == LevyFamily::stable || m.family() == LevyFamily::stable_mixture) {
        const double a = m.high_freq_exponent();
        if (a > 1.0) return a - 1.0;  // matches the modulus of h near zero
    }
    return 1.0;
}

// Richardson step over the epsilon ladder: value(eps) = L + c eps^beta,
// eliminated with the last two levels; the drift between successive
// extrapolants is folded into the reported error.
McEstimate ladder_extrapolate(const std::vector<std::vector<double>>& per_level,
                              const std::vector<double>& ladder, double beta) {
    McEstimate out;
    const std::size_t J = per_level.size();
    const std::size_t n = per_level.empty() ? 0 : per_level[0].size();
    out.n_effective = static_cast<double>(n);
    if (J == 1) {
        auto ms = mean_se(per_level[0]);
        out.value = ms.mean;
        out.std_error = ms.se;
        out.flag = "single-level ladder: no extrapolation";
        return out;
    }
    auto combine = [&](std::size_t lo, std::size_t hi, std::vector<double>& z) {
        const double x_hi = std::pow(ladder[hi], beta);
        const double x_lo = std::pow(ladder[lo], beta);
        const double a_hi = -x_lo / (x_hi - x_lo);
        const double a_lo = x_hi / (x_hi - x_lo);
        z.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            z[i] = a_hi * per_level[hi][i] + a_lo * per_level[lo][i];
    };
    std::vector<double> z;
    combine(J - 2, J - 1, z);
    auto ms = mean_se(z);
    out.value = ms.mean;
    out.std_error = ms.se;
    if (J >= 3) {
        std::vector<double> z2;
        combine(J - 3, J - 2, z2);
        const double drift = std::fabs(mean_se(z2).mean - ms.mean);
        out.std_error += 0.5 * drift;
        if (drift > 10.0 * std::max(ms.se, 1e-12))
            out.flag = "ladder too coarse: extrapolation drift dominates";
    } else {
        auto raw = mean_se(per_level[J - 1]);
        out.std_error += 0.5 * std::fabs(raw.mean - ms.mean);
    }
    return out;
}

}  // namespace

void PathConfig::validate() const {
    if (!(step_dt > 0.0) || !(horizon_T > 0.0) || !(step_dt < horizon_T))
        throw std::invalid_argument("PathConfig: need 0 < step_dt < horizon_T");
    if (n_paths < 1) throw std::invalid_argument("PathConfig: n_paths >= 1");
    if (epsilon_ladder.empty()) throw std::invalid_argument("PathConfig: empty epsilon ladder");
    for (std::size_t j = 0; j < epsilon_ladder.size(); ++j) {
        if (!(epsilon_ladder[j] > 0.0))
            throw std::invalid_argument("PathConfig: ladder entries must be positive");
        if (j > 0 && !(epsilon_ladder[j] < epsilon_ladder[j - 1]))
            throw std::invalid_argument("PathConfig: ladder must be strictly decreasing");
    }
}

double sample_increment(const SymmetricLevyModel& m, double dt, CounterRng& rng) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increment: dt must be positive");
    return cached_sampler(m, dt, 1e-3).draw(rng);
}

PathEnsemble simulate_killed(const SymmetricLevyModel& m, double x0, const PathConfig& pc,
                             Execution exec) {
    if (!(std::fabs(x0) > pc.epsilon_ladder.front()))
        throw std::invalid_argument("simulate_killed: |x0| must exceed the widest ladder level");
    PathEnsemble e;
    e.config = pc;
    e.model = m.describe();
    e.x0 = x0;
    e.paths.resize(static_cast<std::size_t>(pc.n_paths));
    EngineOptions opt;
    opt.record_skeleton = pc.record_paths;
    run_ensemble(m, x0, pc, opt, exec, [&](std::size_t i, PathObservation& obs) {
        PathRecord& r = e.paths[i];
        r.path_id = i;
        r.kill_time = std::move(obs.kill_time);
        r.x_final = obs.x_final;
        r.t_final = obs.t_final;
        r.sign_changes = obs.sign_changes;
        r.skeleton_t = std::move(obs.skeleton_t);
        r.skeleton_x = std::move(obs.skeleton_x);
    });
    return e;
}

McEstimate estimate_hitting_laplace(const SymmetricLevyModel& m, double x0, double q,
                                    const PathConfig& pc, Execution exec) {
    if (!(q > 0.0)) throw std::invalid_argument("estimate_hitting_laplace: q must be positive");
    const std::size_t L = pc.epsilon_ladder.size();
    const auto n = static_cast<std::size_t>(pc.n_paths);
    std::vector<std::vector<double>> v(L, std::vector<double>(n, 0.0));
    run_ensemble(m, x0, pc, {}, exec, [&](std::size_t i, PathObservation& obs) {
        for (std::size_t j = 0; j < L; ++j)
            v[j][i] = std::isfinite(obs.kill_time[j]) ? std::exp(-q * obs.kill_time[j]) : 0.0;
    });
    return ladder_extrapolate(v, pc.epsilon_ladder, auto_exponent(m, pc));
}

McEstimate estimate_never_hit(const SymmetricLevyModel& m, double x0, const PathConfig& pc,
                              Execution exec) {
    const std::size_t L = pc.epsilon_ladder.size();
    const auto n = static_cast<std::size_t>(pc.n_paths);
    std::vector<std::vector<double>> v(L, std::vector<double>(n, 0.0));
    run_ensemble(m, x0, pc, {}, exec, [&](std::size_t i, PathObservation& obs) {
        for (std::size_t j = 0; j < L; ++j) v[j][i] = std::isfinite(obs.kill_time[j]) ? 0.0 : 1.0;
    });
    auto out = ladder_extrapolate(v, pc.epsilon_ladder, auto_exponent(m, pc));
    if (out.flag.empty()) out.flag = "horizon-censored: counts paths alive at horizon_T";
    return out;
}

McEstimate estimate_harmonicity(const SymmetricLevyModel& m, double x0, double t,
                                const PathConfig& pc, const QuadratureConfig& quad,
                                Execution exec) {
    if (!(t > 0.0 && t < pc.horizon_T))
        throw std::invalid_argument("estimate_harmonicity: need 0 < t < horizon_T");
    const HTable& h = h_table(m, quad);
    const std::size_t L = pc.epsilon_ladder.size();
    const auto n = static_cast<std::size_t>(pc.n_paths);
    std::vector<std::vector<double>> v(L, std::vector<double>(n, 0.0));
    EngineOptions opt;
    opt.observe_time = t;
    opt.stop_after_observe = true;
    run_ensemble(m, x0, pc, opt, exec, [&](std::size_t i, PathObservation& obs) {
        for (std::size_t j = 0; j < L; ++j) v[j][i] = h.at(obs.x_at_stop[j]);
    });
    // stopped paths sit inside (-eps,eps); the residual bias is bounded by sup h there
    auto out = ladder_extrapolate(v, pc.epsilon_ladder, auto_exponent(m, pc));
    out.bias_bound = h.at(pc.epsilon_ladder.back());
    return out;
}

McEstimate estimate_two_point(const SymmetricLevyModel& m, double x0, double a,
                              const PathConfig& pc, Execution exec) {
    if (a == 0.0) throw std::invalid_argument("estimate_two_point: a must be nonzero");
    const std::size_t L = pc.epsilon_ladder.size();
    const auto n = static_cast<std::size_t>(pc.n_paths);
    std::vector<std::vector<double>> v(L, std::vector<double>(n, 0.0));
    EngineOptions opt;
    opt.two_point_a = a;
    run_ensemble(m, x0, pc, opt, exec, [&](std::size_t i, PathObservation& obs) {
        for (std::size_t j = 0; j < L; ++j)
            v[j][i] = (obs.a_hit_time[j] < obs.kill_time[j]) ? 1.0 : 0.0;
    });
    return ladder_extrapolate(v, pc.epsilon_ladder, auto_exponent(m, pc));
}

McEstimate hpath_estimate(const SymmetricLevyModel& m, double x0, double t,
                          const std::function<double(double)>& payoff, const PathConfig& pc,
                          const QuadratureConfig& quad, Execution exec) {
    if (x0 == 0.0) throw std::invalid_argument("hpath_estimate: x0 must be nonzero");
    if (!(t > 0.0 && t < pc.horizon_T))
        throw std::invalid_argument("hpath_estimate: need 0 < t < horizon_T");
    const HTable& h = h_table(m, quad);
    const double h_x0 = h.at(x0);
    const std::size_t L = pc.epsilon_ladder.size();
    const auto n = static_cast<std::size_t>(pc.n_paths);
    std::vector<std::vector<double>> v(L, std::vector<double>(n, 0.0));
    std::vector<double> weights(n, 0.0);
    EngineOptions opt;
    opt.observe_time = t;
    opt.stop_after_observe = true;
    run_ensemble(m, x0, pc, opt, exec, [&](std::size_t i, PathObservation& obs) {
        for (std::size_t j = 0; j < L; ++j) {
            if (obs.alive_at_t[j]) {
                const double w = h.at(obs.x_at_stop[j]) / h_x0;
                v[j][i] = payoff(obs.x_at_stop[j]) * w;
                if (j + 1 == L) weights[i] = w;
            }
        }
    });
    auto out = ladder_extrapolate(v, pc.epsilon_ladder, auto_exponent(m, pc));
    const double wsum = pairwise_sum(weights);
    std::vector<double> w2(n);
    for (std::size_t i = 0; i < n; ++i) w2[i] = weights[i] * weights[i];
    const double w2sum = pairwise_sum(w2);
    out.n_effective = w2sum > 0.0 ? wsum * wsum / w2sum : 0.0;
    if (out.n_effective < 100.0) out.flag = "effective sample size below threshold";
    return out;
}

SignChangeCensus sign_change_census(const SymmetricLevyModel& m, double x0, const PathConfig& pc,
                                    const QuadratureConfig& quad, Execution exec) {
    const HTable& h = h_table(m, quad);
    const double h_x0 = h.at(x0);
    const auto n = static_cast<std::size_t>(pc.n_paths);
    std::vector<double> counts(n, 0.0), weights(n, 0.0);
    run_ensemble(m, x0, pc, {}, exec, [&](std::size_t i, PathObservation& obs) {
        counts[i] = static_cast<double>(obs.sign_changes);
        weights[i] = h.at(obs.x_final) / h_x0;  // h-weighting of the killed law
    });
    SignChangeCensus c;
    c.n_paths = pc.n_paths;
    const double wsum = pairwise_sum(weights);
    std::vector<double> wc(n), wpos(n);
    for (std::size_t i = 0; i < n; ++i) {
        wc[i] = weights[i] * counts[i];
        wpos[i] = counts[i] > 0.0 ? weights[i] : 0.0;
    }
    c.mean = pairwise_sum(wc) / wsum;
    c.fraction_positive = pairwise_sum(wpos) / wsum;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });
    double acc = 0.0;
    bool got_median = false;
    for (std::size_t k : order) {
        acc += weights[k];
        if (!got_median && acc >= 0.5 * wsum) {
            c.median = counts[k];
            got_median = true;
        }
        if (acc >= 0.9 * wsum) {
            c.q90 = counts[k];
            break;
        }
    }
    return c;
}

KsResult distribution_ks(const SymmetricLevyModel& m, double t, std::int64_t n, std::uint64_t seed,
                         const QuadratureConfig& quad, Execution exec) {
    // one exact increment per path
    std::vector<double> samples(static_cast<std::size_t>(n), 0.0);
    const StepSampler& sampler = cached_sampler(m, t, 1e-3);
    if (exec == Execution::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static, 256)
#endif
        for (std::int64_t i = 0; i < n; ++i) {
            CounterRng rng(seed, static_cast<std::uint64_t>(i));
            samples[static_cast<std::size_t>(i)] = sampler.draw(rng);
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i) {
            CounterRng rng(seed, static_cast<std::uint64_t>(i));
            samples[static_cast<std::size_t>(i)] = sampler.draw(rng);
        }
    }
    std::sort(samples.begin(), samples.end());

    // CDF of the quadrature density on a graded grid; F(x) = 1/2 + int_0^x p,
    // composite Simpson over nodes and midpoints
    std::vector<double> nodes{0.0};
    double x = 0.0;
    const double p0 = spectral::transition_p(m, t, 0.0, quad).value;
    const double scale = 1.0 / p0;
    const double reach = std::max(50.0 * scale,
                                  std::max(std::fabs(samples.front()), std::fabs(samples.back())));
    while (nodes.size() < 20000) {
        x += std::max(0.02 * scale, x / 40.0);
        nodes.push_back(x);
        if (x > reach) break;
    }
    const std::size_t nn = nodes.size();
    std::vector<double> pn(nn, 0.0), pm(nn, 0.0);  // density at nodes and left midpoints
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
#endif
    for (std::size_t i = 0; i < nn; ++i) {
        pn[i] = spectral::transition_p(m, t, nodes[i], quad).value;
        if (i > 0)
            pm[i] = spectral::transition_p(m, t, 0.5 * (nodes[i - 1] + nodes[i]), quad).value;
    }
    std::vector<double> cum(nn, 0.0), seg(nn, 0.0);
    for (std::size_t i = 1; i < nn; ++i) {
        seg[i] = (nodes[i] - nodes[i - 1]) * (pn[i - 1] + 4.0 * pm[i] + pn[i]) / 6.0;
        cum[i] = cum[i - 1] + seg[i];
    }
    const double half_mass = cum.back();
    auto cdf = [&](double v) {
        const double av = std::fabs(v);
        double f;
        if (av >= nodes.back()) {
            f = 0.5;  // beyond the grid: all remaining mass (grid covers ~all)
        } else {
            const auto it = std::upper_bound(nodes.begin(), nodes.end(), av);
            const std::size_t j = static_cast<std::size_t>(it - nodes.begin()) - 1;
            const double frac = (av - nodes[j]) / (nodes[j + 1] - nodes[j]);
            f = cum[j] + frac * seg[j + 1];
        }
        f = std::min(f, half_mass);
        return v >= 0.0 ? 0.5 + f : 0.5 - f;
    };
    double d = 0.0;
    const auto N = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max(d, std::fabs(F - static_cast<double>(i) / N));
        d = std::max(d, std::fabs(F - static_cast<double>(i + 1) / N));
    }
    return {d, 1.6276 / std::sqrt(N)};
}

void write_ensemble(std::ostream& os, const PathEnsemble& e) {
    os << "# levykit ensemble v1\n";
    os << "# model " << e.model << "\n";
    os << "# x0 " << e.x0 << " step_dt " << e.config.step_dt << " horizon_T " << e.config.horizon_T
       << " seed " << e.config.seed << "\n";
    os << "# ladder";
    for (double eps : e.config.epsilon_ladder) os << ' ' << eps;
    os << "\n";
    os << "# columns: path_id kill_time[ladder...] x_final t_final sign_changes n_points"
          " (t x)...\n";
    os.precision(17);
    for (const auto& p : e.paths) {
        os << p.path_id;
        for (double kt : p.kill_time) os << ' ' << kt;
        os << ' ' << p.x_final << ' ' << p.t_final << ' ' << p.sign_changes << ' '
           << p.skeleton_t.size();
        for (std::size_t i = 0; i < p.skeleton_t.size(); ++i)
            os << ' ' << p.skeleton_t[i] << ' ' << p.skeleton_x[i];
        os << '\n';
    }
}

PathEnsemble read_ensemble(std::istream& is) {
    PathEnsemble e;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tag;
            hs >> tag;
            if (tag == "ladder") {
                double eps;
                e.config.epsilon_ladder.clear();
                while (hs >> eps) e.config.epsilon_ladder.push_back(eps);
            } else if (tag == "model") {
                std::string rest;
                std::getline(hs, rest);
                e.model = rest.empty() ? rest : rest.substr(1);
            } else if (tag == "x0") {
                std::string key;
                hs >> e.x0;
                while (hs >> key) {
                    if (key == "step_dt") hs >> e.config.step_dt;
                    else if (key == "horizon_T") hs >> e.config.horizon_T;
                    else if (key == "seed") hs >> e.config.seed;
                }
            }
            continue;
        }
        std::istringstream ls(line);
        PathRecord p;
        ls >> p.path_id;
        p.kill_time.resize(e.config.epsilon_ladder.size());
        for (double& kt : p.kill_time) ls >> kt;
        std::size_t npts = 0;
        ls >> p.x_final >> p.t_final >> p.sign_changes >> npts;
        p.skeleton_t.resize(npts);
        p.skeleton_x.resize(npts);
        for (std::size_t i = 0; i < npts; ++i) ls >> p.skeleton_t[i] >> p.skeleton_x[i];
        e.paths.push_back(std::move(p));
    }
    e.config.n_paths = static_cast<std::int64_t>(e.paths.size());
    return e;
}

}  // namespace levykit::mc
