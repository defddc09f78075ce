#ifndef LEVYKIT_TABLES_HPP
#define LEVYKIT_TABLES_HPP

#include <string>
#include <vector>

#include "levykit/model_config.hpp"
#include "levykit/quadrature.hpp"
#include "levykit/time_domain.hpp"

namespace levykit::tables {

/// grid quantities the `table` subcommand can emit
const std::vector<std::string>& known_quantities();

struct TableRequest {
    std::string quantity;       // one of known_quantities()
    double grid_start = 0.0;
    double grid_stop = 1.0;
    double grid_step = 0.1;
    double q = 1.0;             // resolvent-type parameters where applicable
    double t = 1.0;
    double y = 1.0;             // second coordinate for two-point kernels
    std::string out_dir = ".";
    std::string basename;       // defaults to the quantity name
};

struct TableResult {
    std::string csv_path;
    std::string json_path;
    int rows = 0;
};

/// writes <basename>.csv (grid, value, error estimate) and a JSON sidecar
/// with the full configuration snapshot; deterministic content for identical
/// inputs
TableResult emit_table(const LoadedModel& lm, const TableRequest& req,
                       const QuadratureConfig& quad = {},
                       const timedomain::LaplaceInversionConfig& inv = {});

}  // namespace levykit::tables

#endif
