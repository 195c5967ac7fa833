// config.hpp - plain-text `key = value` model configuration.
//
// Recognised keys:
//   omega0_rad_s g_rad_s temperature_K nbar renormalize_thermal
//   geometry_ratio | (w_m and d_m)
//   gamma1 ... gamma8                downward rates, default to the reference set
//   gamma_a gamma_b gamma_c gamma_e  explicit upward rates
//   epsilon                          gamma_a = eps*gamma1, gamma_b = eps*gamma2
// Upward rates that are not given fall back to epsilon (gamma_a, gamma_b) and
// then to detailed balance. Blank lines and `#` comments are ignored; unknown
// keys are errors.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vacrabi/core_model.hpp"

namespace vacrabi {

struct ModelConfig {
  PhysicalParams params;
  RateTable rates;
  double nbar = 0.05;
  bool renormalize_thermal = false;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ModelConfig parse_config(std::string_view text, std::string_view source = "<string>");
ModelConfig load_config(const std::filesystem::path& path);

// Defaults used when no config file is given.
ModelConfig default_config();

}  // namespace vacrabi
