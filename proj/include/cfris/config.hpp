// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfris {

enum class ArrayGeometry { linear, planar };
enum class CorrelationModel { local_scattering, uncorrelated };
enum class CombinerKind { pmmse, mmse };

/// Resolved simulation parameters. Defaults reproduce the smaller network
/// (50 APs, 10 UEs, 1 km square). Key names in config files match the
/// field names below.
struct SimConfig {
  int num_aps = 50;
  int num_ues = 10;
  int antennas_per_ap = 4;
  int ris_rows = 6;
  int ris_cols = 6;
  double area_side_m = 1000.0;
  double carrier_frequency_hz = 2e9;
  double bandwidth_hz = 20e6;
  double noise_power_dbm = -94.0;
  double pilot_power_mw = 100.0;
  double data_power_mw = 100.0;
  int coherence_block_samples = 200;
  int pilot_samples = 10;
  double element_spacing_wavelengths = 0.5;
  ArrayGeometry array_geometry = ArrayGeometry::linear;
  double box_depth_wavelengths = 4.0;
  double rician_los_fraction = 0.9;
  double ap_height_m = 10.0;
  double shadowing_std_db = 4.0;
  double shadowing_decorrelation_m = 9.0;
  double min_distance_m = 1.0;
  CorrelationModel correlation_model = CorrelationModel::local_scattering;
  double angular_std_deg = 15.0;
  int power_iterations = 100;
  double power_iteration_tolerance = 1e-8;
  CombinerKind combiner = CombinerKind::pmmse;
  int mc_setups = 50;
  int mc_channel_realizations = 100;
  std::uint64_t seed = 1;

  int ris_elements() const { return ris_rows * ris_cols; }
  double wavelength_m() const;
  double noise_power_w() const;
  double pilot_power_w() const { return pilot_power_mw * 1e-3; }
  double data_power_w() const { return data_power_mw * 1e-3; }
  double element_spacing_m() const { return element_spacing_wavelengths * wavelength_m(); }
  double box_depth_m() const { return box_depth_wavelengths * wavelength_m(); }
  /// (tau_c - tau_p) / tau_c
  double prelog_factor() const;
};

/// Throws ConfigError naming the first violated field.
void validate(const SimConfig& cfg);

/// Named presets: "fig1" (L=50, K=10, 1 km), "fig2" (L=100, K=20, 1 km),
/// "fig3" (L=100, K=20, 2 km).
SimConfig preset(std::string_view name);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines; `#` starts a comment. Duplicate keys keep
/// the last value.
KeyValues parse_key_values(std::string_view text);

/// Applies overrides in order. Unknown keys and malformed values throw
/// ConfigError.
void apply_overrides(SimConfig& cfg, const KeyValues& values);

/// Every field in canonical order, formatted so that `apply_overrides` restores the
/// exact same configuration.
KeyValues to_key_values(const SimConfig& cfg);

SimConfig load_config_file(const std::string& path, SimConfig base = {});

}  // namespace cfris
