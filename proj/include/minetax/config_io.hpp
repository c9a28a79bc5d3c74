#ifndef MINETAX_CONFIG_IO_HPP
#define MINETAX_CONFIG_IO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "minetax/model.hpp"

namespace minetax {

/// A malformed or invalid configuration file. The message starts with the
/// dotted path of the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    AnalyticalParams analytical;
    ExtendedModel extended;
    bool operator==(const ModelConfig&) const = default;
};

/// Both models with the published parameters.
ModelConfig default_config();

/// Parses {"analytical": {...}, "extended": {...}}. A missing section falls
/// back to its default; a present section must be complete except for the
/// optional discount_rate, tau_bounds and q_bounds.
ModelConfig config_from_json(const nlohmann::json& j);
ModelConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const AnalyticalParams& p);
nlohmann::json to_json(const ExtendedModel& m);
nlohmann::json to_json(const ModelConfig& c);

}  // namespace minetax

#endif
