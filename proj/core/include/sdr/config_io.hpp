#pragma once

#include <string>

#include "sdr/experiments.hpp"

namespace sdr {

/// Reads and validates a JSON experiment config; absent keys take the
/// documented defaults, unknown keys are rejected by name.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& json_text);

/// Serializes the full effective config (every field, defaults included) so
/// a run can be reproduced exactly from its summary.
std::string config_to_json(const ExperimentConfig& config);

void validate_config(const ExperimentConfig& config);

}  // namespace sdr
