#include "levykit/tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "levykit/spectral_kernels.hpp"

namespace levykit::tables {

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Row {
    double value = 0.0;
    double error = 0.0;
};

// inversion quantities get their error estimated from a node-count bump
double inversion_spread(double a, double b) { return std::fabs(a - b); }

}  // namespace

const std::vector<std::string>& known_quantities() {
    static const std::vector<std::string> q{"theta",       "u_q",        "h",      "h_q",
                                            "p_t",         "rho_t",      "rho_tx", "killed_green",
                                            "hpath_green", "hitting"};
    return q;
}

TableResult emit_table(const LoadedModel& lm, const TableRequest& req,
                       const QuadratureConfig& quad_in,
                       const timedomain::LaplaceInversionConfig& inv) {
    if (std::find(known_quantities().begin(), known_quantities().end(), req.quantity) ==
        known_quantities().end())
        throw std::invalid_argument("emit_table: unknown quantity '" + req.quantity + "'");
    if (!(req.grid_step > 0.0) || !(req.grid_stop >= req.grid_start))
        throw std::invalid_argument("emit_table: bad grid");
    std::vector<double> grid;
    for (double g = req.grid_start; g <= req.grid_stop + 1e-12 * req.grid_step;
         g += req.grid_step)
        grid.push_back(g);
    if (grid.empty()) throw std::invalid_argument("emit_table: empty grid");

    QuadratureConfig quad = quad_in;
    quad.lambda0 = lm.lambda0;
    const auto& m = lm.model;
    const std::string& qty = req.quantity;

    std::string axis = "x";
    std::string column = qty;
    auto eval = [&](double g) -> Row {
        if (qty == "theta") return {m.theta(g), 0.0};
        if (qty == "u_q") {
            auto kv = spectral::resolvent_u(m, req.q, g, quad);
            return {kv.value, kv.error_estimate};
        }
        if (qty == "h") {
            auto kv = spectral::h_approx(m, 0.0, g, quad);
            return {kv.value, kv.error_estimate};
        }
        if (qty == "h_q") {
            auto kv = spectral::h_approx(m, req.q, g, quad);
            return {kv.value, kv.error_estimate};
        }
        if (qty == "p_t") {
            auto kv = spectral::transition_p(m, req.t, g, quad);
            return {kv.value, kv.error_estimate};
        }
        if (qty == "rho_t") {
            const double v = timedomain::lifetime_density(m, g, quad, inv);
            auto bumped = inv;
            bumped.node_count = std::max(8, inv.node_count - 8);
            const double v2 = timedomain::lifetime_density(m, g, quad, bumped);
            return {v, inversion_spread(v, v2)};
        }
        if (qty == "rho_tx") {
            const double v = timedomain::entrance_density(m, req.t, g, quad, inv);
            auto bumped = inv;
            bumped.node_count = std::max(8, inv.node_count - 8);
            const double v2 = timedomain::entrance_density(m, req.t, g, quad, bumped);
            return {v, inversion_spread(v, v2)};
        }
        if (qty == "killed_green") {
            auto kv = spectral::killed_resolvent(m, 0.0, g, req.y, quad);
            return {kv.value, kv.error_estimate};
        }
        if (qty == "hpath_green") {
            auto kv = spectral::hpath_resolvent(m, 0.0, g, req.y, quad);
            return {kv.value, kv.error_estimate};
        }
        // hitting
        return {spectral::hitting_laplace(m, req.q, g, quad), 0.0};
    };
    if (qty == "theta") axis = "lambda";
    if (qty == "rho_t") axis = "t";

    std::vector<Row> rows(grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t i = 0; i < grid.size(); ++i) rows[i] = eval(grid[i]);

    namespace fs = std::filesystem;
    fs::create_directories(req.out_dir);
    const std::string base = req.basename.empty() ? qty : req.basename;
    TableResult out;
    out.csv_path = (fs::path(req.out_dir) / (base + ".csv")).string();
    out.json_path = (fs::path(req.out_dir) / (base + ".json")).string();
    out.rows = static_cast<int>(grid.size());

    std::ofstream csv(out.csv_path);
    if (!csv) throw std::runtime_error("cannot write " + out.csv_path);
    csv << "# quantity=" << qty << " model=" << m.describe()
        << " (values in the model's natural units)\n";
    csv << axis << "," << column << ",error_estimate\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv << fmt_num(grid[i]) << ',' << fmt_num(rows[i].value) << ',' << fmt_num(rows[i].error)
            << "\n";
    csv.close();

    nlohmann::ordered_json sidecar;
    sidecar["quantity"] = qty;
    sidecar["model"] = m.describe();
    sidecar["model_config"] = lm.source_text;
    sidecar["grid"] = {{"start", req.grid_start}, {"stop", req.grid_stop}, {"step", req.grid_step}};
    sidecar["params"] = {{"q", req.q}, {"t", req.t}, {"y", req.y}};
    sidecar["quadrature"] = {{"abs_tol", quad.abs_tol},
                             {"rel_tol", quad.rel_tol},
                             {"max_panels", quad.max_panels},
                             {"lambda0", quad.lambda0}};
    sidecar["inversion"] = {{"method", inv.method == timedomain::LaplaceInversionConfig::Method::
                                                          fixed_talbot
                                           ? "fixed_talbot"
                                           : "gaver_stehfest"},
                            {"node_count", inv.node_count}};
    std::ofstream js(out.json_path);
    if (!js) throw std::runtime_error("cannot write " + out.json_path);
    js << sidecar.dump(2) << "\n";
    return out;
}

}  // namespace levykit::tables
