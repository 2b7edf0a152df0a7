// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cfris/errors.hpp"
#include "cfris/experiment.hpp"

namespace cfris {

namespace {

namespace fs = std::filesystem;

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

}  // namespace

void emit_report(const SeReport& report, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  const fs::path manifest = dir / "manifest.txt";
  auto m = open_output(manifest);
  m << "# resolved configuration\n";
  for (const auto& [key, value] : to_key_values(report.config)) m << key << " = " << value << '\n';
  m << "# run\n";
  std::string names;
  for (const auto& r : report.results) {
    if (!names.empty()) names += ',';
    names += scenario_name(r.scenario);
  }
  m << "scenarios = " << names << '\n';
  m << "samples_per_scenario = "
    << (report.results.empty() ? 0 : report.results.front().se.size()) << '\n';
  for (const auto& r : report.results) {
    m << "median_se." << scenario_name(r.scenario) << " = " << format_value(r.median) << '\n';
    m << "p10_se." << scenario_name(r.scenario) << " = " << format_value(r.p10) << '\n';
  }
  finish(m, manifest);

  if (report.results.empty()) return;

  const int k_count = report.config.num_ues;
  const fs::path samples = dir / "se_samples.csv";
  auto s = open_output(samples);
  s << "scenario,realization,ue,se\n";
  for (const auto& r : report.results) {
    for (std::size_t i = 0; i < r.se.size(); ++i) {
      s << scenario_name(r.scenario) << ',' << i / k_count << ',' << i % k_count << ','
        << format_value(r.se[i]) << '\n';
    }
  }
  finish(s, samples);

  for (const auto& r : report.results) {
    const fs::path cdf_path = dir / ("cdf_" + std::string(scenario_name(r.scenario)) + ".csv");
    auto c = open_output(cdf_path);
    c << "se,cdf\n";
    for (const auto& p : r.cdf) c << format_value(p.value) << ',' << format_value(p.probability) << '\n';
    finish(c, cdf_path);
  }
}

SeReport read_report(const fs::path& dir) {
  const fs::path manifest = dir / "manifest.txt";
  std::ifstream m(manifest);
  if (!m) throw IoError("cannot open '" + manifest.string() + "'");
  std::stringstream text;
  text << m.rdbuf();

  SeReport report;
  KeyValues config_values;
  std::vector<Scenario> scenarios;
  for (const auto& [key, value] : parse_key_values(text.str())) {
    if (key == "scenarios") {
      for (const auto& name : split(value, ',')) {
        if (!name.empty()) scenarios.push_back(parse_scenario(name));
      }
    } else if (key == "samples_per_scenario" || key.rfind("median_se.", 0) == 0 ||
               key.rfind("p10_se.", 0) == 0) {
      continue;
    } else {
      config_values.emplace_back(key, value);
    }
  }
  apply_overrides(report.config, config_values);
  for (Scenario sc : scenarios) report.results.push_back(ScenarioResult{sc, {}, {}, 0.0, 0.0});
  if (scenarios.empty()) return report;

  const fs::path samples = dir / "se_samples.csv";
  std::ifstream s(samples);
  if (!s) throw IoError("cannot open '" + samples.string() + "'");
  std::string line;
  std::getline(s, line);
  if (line != "scenario,realization,ue,se") throw IoError("unexpected header in " + samples.string());
  while (std::getline(s, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 4) throw IoError("malformed row in " + samples.string() + ": " + line);
    const Scenario sc = parse_scenario(cols[0]);
    for (auto& r : report.results) {
      if (r.scenario == sc) r.se.push_back(std::stod(cols[3]));
    }
  }
  for (auto& r : report.results) summarize(r);
  return report;
}

}  // namespace cfris
