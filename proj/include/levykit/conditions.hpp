#ifndef LEVYKIT_CONDITIONS_HPP
#define LEVYKIT_CONDITIONS_HPP

#include <string>
#include <utility>
#include <vector>

#include "levykit/levy_model.hpp"
#include "levykit/quadrature.hpp"

namespace levykit {

/// Verdicts for the standing assumptions, with the numeric evidence each one
/// was decided on. These are finite numerical procedures for asymptotic
/// statements, so every verdict is a (documented) heuristic and ships its
/// evidence for auditing.
struct ConditionReport {
    bool passes_A = false;      // resolvent integrability + exponent growth
    bool passes_B = false;      // x/h(x) -> 0
    bool passes_T = false;      // exponent nondecreasing beyond lambda0
    bool is_recurrent = false;  // kappa == 0
    double kappa = 0.0;
    bool kappa_conclusive = true;
    std::vector<std::pair<std::string, double>> diagnostics;
};

ConditionReport check_conditions(const SymmetricLevyModel& m, const QuadratureConfig& cfg = {});

}  // namespace levykit

#endif
