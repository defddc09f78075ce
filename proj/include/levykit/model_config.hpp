#ifndef LEVYKIT_MODEL_CONFIG_HPP
#define LEVYKIT_MODEL_CONFIG_HPP

#include <string>

#include "levykit/levy_model.hpp"

namespace levykit {

/// A model parsed from the plain-text key/value format (see README for the
/// grammar). lambda0 seeds the condition-(T) scan threshold.
struct LoadedModel {
    SymmetricLevyModel model;
    double lambda0 = 1.0;
    std::string source_text;  // canonicalized: parsed keys in file order
};

LoadedModel parse_model_config(const std::string& text);
LoadedModel load_model_config(const std::string& path);

}  // namespace levykit

#endif
