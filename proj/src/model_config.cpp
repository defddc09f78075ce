#include "levykit/model_config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace levykit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("model config: bad number '" + item + "' in " + key);
        }
        if (pos != item.size())
            throw std::invalid_argument("model config: trailing junk in " + key + ": " + item);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("model config: empty list for " + key);
    return out;
}

double parse_number(const std::string& s, const std::string& key) {
    auto v = parse_list(s, key);
    if (v.size() != 1) throw std::invalid_argument("model config: expected one value for " + key);
    return v[0];
}

}  // namespace

LoadedModel parse_model_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::vector<std::string> order;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("model config: expected 'key = value', got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("model config: empty key or value in: " + line);
        if (kv.count(key)) throw std::invalid_argument("model config: duplicate key " + key);
        kv[key] = val;
        order.push_back(key + " = " + val);
    }
    auto take = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("model config: missing key " + key);
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_opt = [&](const std::string& key, double fallback) -> double {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        double v = parse_number(it->second, key);
        kv.erase(it);
        return v;
    };

    const std::string kind = take("model");
    LoadedModel out{SymmetricLevyModel::brownian(), 1.0, {}};
    out.lambda0 = take_opt("lambda0", 1.0);
    if (kind == "brownian") {
        out.model = SymmetricLevyModel::brownian();
    } else if (kind == "stable") {
        const double alpha = parse_number(take("alpha"), "alpha");
        const double scale = take_opt("scale", 1.0);
        out.model = SymmetricLevyModel::stable(alpha, scale);
    } else if (kind == "stable_mixture") {
        const auto alphas = parse_list(take("alphas"), "alphas");
        const auto scales = parse_list(take("scales"), "scales");
        if (alphas.size() != scales.size())
            throw std::invalid_argument("model config: alphas and scales differ in length");
        std::vector<StableComponent> comps;
        for (std::size_t i = 0; i < alphas.size(); ++i)
            comps.push_back({alphas[i], scales[i]});
        out.model = SymmetricLevyModel::stable_mixture(std::move(comps));
    } else if (kind == "tempered_stable") {
        const double alpha = parse_number(take("alpha"), "alpha");
        const double scale = take_opt("scale", 1.0);
        const double tempering = parse_number(take("tempering"), "tempering");
        out.model = SymmetricLevyModel::tempered_stable(alpha, scale, tempering);
    } else if (kind == "point_masses") {
        const auto locs = parse_list(take("locations"), "locations");
        const auto masses = parse_list(take("masses"), "masses");
        if (locs.size() != masses.size())
            throw std::invalid_argument("model config: locations and masses differ in length");
        std::vector<std::pair<double, double>> jumps;
        for (std::size_t i = 0; i < locs.size(); ++i) jumps.emplace_back(locs[i], masses[i]);
        out.model = SymmetricLevyModel::point_masses(std::move(jumps),
                                                     take_opt("gaussian_coeff", 0.0));
    } else {
        throw std::invalid_argument("model config: unknown model kind '" + kind + "'");
    }
    if (!kv.empty())
        throw std::invalid_argument("model config: unknown key " + kv.begin()->first);
    std::string canon;
    for (const auto& l : order) canon += l + "\n";
    out.source_text = canon;
    return out;
}

LoadedModel load_model_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open model config: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_model_config(ss.str());
}

}  // namespace levykit
