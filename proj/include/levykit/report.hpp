#ifndef LEVYKIT_REPORT_HPP
#define LEVYKIT_REPORT_HPP

#include <string>
#include <vector>

#include "levykit/conditions.hpp"
#include "levykit/model_config.hpp"
#include "levykit/montecarlo.hpp"
#include "levykit/quadrature.hpp"
#include "levykit/time_domain.hpp"

namespace levykit::report {

enum class Verdict { pass, fail, skip, inconclusive };
const char* verdict_name(Verdict v);

struct CheckRecord {
    std::string name;
    std::string anchor;  // identity provenance tag; fixed strings from anchors()
    std::string inputs;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::pass;
    std::string note;
};

struct IdentityReport {
    std::string suite;  // "check" or "mc"
    std::string model_description;
    std::string model_spec_hash;
    std::string config_snapshot;
    std::vector<CheckRecord> records;  // sorted by name
    double wall_time_sec = 0.0;
    Verdict worst() const;
    int exit_status() const;  // 0 iff no record failed
};

struct SuiteConfig {
    std::string suite_name = "default";  // "default" or "quick"
    double tol_scale = 1.0;              // multiplies every check tolerance
    QuadratureConfig quad;
    timedomain::LaplaceInversionConfig inversion;
};

struct McSuiteConfig {
    std::string suite_name = "default";
    double tol_scale = 1.0;
    mc::PathConfig paths;  // seed is mandatory for reproducible reports
    QuadratureConfig quad;
    mc::Execution exec = mc::Execution::parallel;
};

/// deterministic identity suite: every lambda-side and time-side identity at
/// its pinned tolerance; checks whose hypotheses fail are skipped with reason
IdentityReport run_identity_suite(const LoadedModel& lm, const SuiteConfig& sc);

/// stochastic oracle suite with CI-based verdicts
IdentityReport run_mc_suite(const LoadedModel& lm, const McSuiteConfig& sc);

/// JSON body (deterministic, excludes wall time) and full file with wall time
std::string report_body_json(const IdentityReport& r);
void write_report(const IdentityReport& r, const std::string& path);

/// the fixed set of identity provenance strings used in records
const std::vector<std::string>& known_anchors();

}  // namespace levykit::report

#endif
