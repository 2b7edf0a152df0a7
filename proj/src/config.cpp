// SPDX-License-Identifier: Apache-2.0
#include "cfris/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "cfris/errors.hpp"

namespace cfris {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected an unsigned integer, got '" + v + "'");
  }
  return out;
}

struct Field {
  const char* name;
  std::function<void(SimConfig&, const std::string&)> set;
  std::function<std::string(const SimConfig&)> get;
};

#define CFRIS_INT_FIELD(f)                                                              \
  Field {                                                                               \
    #f, [](SimConfig& c, const std::string& v) { c.f = static_cast<int>(parse_int(#f, v)); }, \
        [](const SimConfig& c) { return std::to_string(c.f); }                          \
  }
#define CFRIS_DOUBLE_FIELD(f)                                                       \
  Field {                                                                           \
    #f, [](SimConfig& c, const std::string& v) { c.f = parse_double(#f, v); },      \
        [](const SimConfig& c) { return format_double(c.f); }                      \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      CFRIS_INT_FIELD(num_aps),
      CFRIS_INT_FIELD(num_ues),
      CFRIS_INT_FIELD(antennas_per_ap),
      CFRIS_INT_FIELD(ris_rows),
      CFRIS_INT_FIELD(ris_cols),
      CFRIS_DOUBLE_FIELD(area_side_m),
      CFRIS_DOUBLE_FIELD(carrier_frequency_hz),
      CFRIS_DOUBLE_FIELD(bandwidth_hz),
      CFRIS_DOUBLE_FIELD(noise_power_dbm),
      CFRIS_DOUBLE_FIELD(pilot_power_mw),
      CFRIS_DOUBLE_FIELD(data_power_mw),
      CFRIS_INT_FIELD(coherence_block_samples),
      CFRIS_INT_FIELD(pilot_samples),
      CFRIS_DOUBLE_FIELD(element_spacing_wavelengths),
      Field{"array_geometry",
            [](SimConfig& c, const std::string& v) {
              if (v == "linear") c.array_geometry = ArrayGeometry::linear;
              else if (v == "planar") c.array_geometry = ArrayGeometry::planar;
              else throw ConfigError("array_geometry", "expected linear|planar, got '" + v + "'");
            },
            [](const SimConfig& c) {
              return std::string(c.array_geometry == ArrayGeometry::linear ? "linear" : "planar");
            }},
      CFRIS_DOUBLE_FIELD(box_depth_wavelengths),
      CFRIS_DOUBLE_FIELD(rician_los_fraction),
      CFRIS_DOUBLE_FIELD(ap_height_m),
      CFRIS_DOUBLE_FIELD(shadowing_std_db),
      CFRIS_DOUBLE_FIELD(shadowing_decorrelation_m),
      CFRIS_DOUBLE_FIELD(min_distance_m),
      Field{"correlation_model",
            [](SimConfig& c, const std::string& v) {
              if (v == "local_scattering") c.correlation_model = CorrelationModel::local_scattering;
              else if (v == "uncorrelated") c.correlation_model = CorrelationModel::uncorrelated;
              else
                throw ConfigError("correlation_model",
                                  "expected local_scattering|uncorrelated, got '" + v + "'");
            },
            [](const SimConfig& c) {
              return std::string(c.correlation_model == CorrelationModel::local_scattering
                                     ? "local_scattering"
                                     : "uncorrelated");
            }},
      CFRIS_DOUBLE_FIELD(angular_std_deg),
      CFRIS_INT_FIELD(power_iterations),
      CFRIS_DOUBLE_FIELD(power_iteration_tolerance),
      Field{"combiner",
            [](SimConfig& c, const std::string& v) {
              if (v == "pmmse") c.combiner = CombinerKind::pmmse;
              else if (v == "mmse") c.combiner = CombinerKind::mmse;
              else throw ConfigError("combiner", "expected pmmse|mmse, got '" + v + "'");
            },
            [](const SimConfig& c) {
              return std::string(c.combiner == CombinerKind::pmmse ? "pmmse" : "mmse");
            }},
      CFRIS_INT_FIELD(mc_setups),
      CFRIS_INT_FIELD(mc_channel_realizations),
      Field{"seed", [](SimConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); },
            [](const SimConfig& c) { return std::to_string(c.seed); }},
  };
  return table;
}

#undef CFRIS_INT_FIELD
#undef CFRIS_DOUBLE_FIELD

}  // namespace

double SimConfig::wavelength_m() const { return kSpeedOfLight / carrier_frequency_hz; }

double SimConfig::noise_power_w() const { return std::pow(10.0, (noise_power_dbm - 30.0) / 10.0); }

double SimConfig::prelog_factor() const {
  return static_cast<double>(coherence_block_samples - pilot_samples) /
         static_cast<double>(coherence_block_samples);
}

void validate(const SimConfig& c) {
  auto positive_int = [](const char* name, int v) {
    if (v < 1) throw ConfigError(name, "must be >= 1, got " + std::to_string(v));
  };
  auto positive = [](const char* name, double v) {
    if (!(v > 0.0)) throw ConfigError(name, "must be > 0");
  };
  auto non_negative = [](const char* name, double v) {
    if (!(v >= 0.0)) throw ConfigError(name, "must be >= 0");
  };
  positive_int("num_aps", c.num_aps);
  positive_int("num_ues", c.num_ues);
  positive_int("antennas_per_ap", c.antennas_per_ap);
  positive_int("ris_rows", c.ris_rows);
  positive_int("ris_cols", c.ris_cols);
  if (c.ris_elements() < c.antennas_per_ap) {
    throw ConfigError("ris_rows", "RIS must have at least as many elements as AP antennas");
  }
  non_negative("area_side_m", c.area_side_m);
  positive("carrier_frequency_hz", c.carrier_frequency_hz);
  positive("bandwidth_hz", c.bandwidth_hz);
  positive("pilot_power_mw", c.pilot_power_mw);
  positive("data_power_mw", c.data_power_mw);
  positive_int("pilot_samples", c.pilot_samples);
  if (c.coherence_block_samples <= c.pilot_samples) {
    throw ConfigError("coherence_block_samples", "must exceed pilot_samples");
  }
  positive("element_spacing_wavelengths", c.element_spacing_wavelengths);
  if (c.array_geometry == ArrayGeometry::planar) {
    const int side = static_cast<int>(std::lround(std::sqrt(c.antennas_per_ap)));
    if (side * side != c.antennas_per_ap) {
      throw ConfigError("array_geometry", "planar arrays need a square antennas_per_ap");
    }
  }
  positive("box_depth_wavelengths", c.box_depth_wavelengths);
  if (!(c.rician_los_fraction >= 0.0 && c.rician_los_fraction <= 1.0)) {
    throw ConfigError("rician_los_fraction", "must lie in [0, 1]");
  }
  non_negative("ap_height_m", c.ap_height_m);
  non_negative("shadowing_std_db", c.shadowing_std_db);
  positive("shadowing_decorrelation_m", c.shadowing_decorrelation_m);
  positive("min_distance_m", c.min_distance_m);
  non_negative("angular_std_deg", c.angular_std_deg);
  positive_int("power_iterations", c.power_iterations);
  non_negative("power_iteration_tolerance", c.power_iteration_tolerance);
  positive_int("mc_setups", c.mc_setups);
  positive_int("mc_channel_realizations", c.mc_channel_realizations);
}

SimConfig preset(std::string_view name) {
  SimConfig c;
  if (name == "fig1") return c;
  if (name == "fig2") {
    c.num_aps = 100;
    c.num_ues = 20;
    return c;
  }
  if (name == "fig3") {
    c.num_aps = 100;
    c.num_ues = 20;
    c.area_side_m = 2000.0;
    return c;
  }
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

void apply_overrides(SimConfig& cfg, const KeyValues& values) {
  for (const auto& [key, value] : values) {
    bool found = false;
    for (const auto& f : fields()) {
      if (key == f.name) {
        f.set(cfg, value);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError(key, "unknown configuration key");
  }
}

KeyValues to_key_values(const SimConfig& cfg) {
  KeyValues out;
  for (const auto& f : fields()) out.emplace_back(f.name, f.get(cfg));
  return out;
}

SimConfig load_config_file(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_overrides(base, parse_key_values(ss.str()));
  return base;
}

}  // namespace cfris
