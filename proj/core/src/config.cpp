#include "snnq/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace snnq {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_line(int line_no, const std::string& what) {
  throw std::runtime_error("config line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) bad_line(line_no, "expected key=value, got \"" + line + "\"");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) bad_line(line_no, "empty key");
    if (value.empty()) bad_line(line_no, "empty value for key \"" + key + "\"");
    if (out.count(key)) bad_line(line_no, "duplicate key \"" + key + "\"");
    out[key] = value;
  }
  return out;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  ConfigMap cfg = parse_config_text(buf.str());
  check_known_keys(cfg);
  return cfg;
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "preset",        "bits",          "epochs",
      "lr",            "t_max",         "batch_size",
      "seed",          "t0",            "t_rate",
      "tau",           "v_threshold",   "v_reset",
      "surrogate_half_width",           "surrogate_leak",
      "timesteps",     "classes",       "samples_per_class",
      "sensor_width",  "sensor_height", "events_per_sample",
      "noise_rate",    "test_fraction", "threads",
      "slice_policy",  "data_dir",      "out_dir",
  };
  return keys;
}

void check_known_keys(const ConfigMap& cfg) {
  const auto& keys = known_config_keys();
  for (const auto& [k, v] : cfg) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw std::runtime_error("unknown config key \"" + k + "\"");
  }
}

long config_long(const ConfigMap& cfg, const std::string& key, long fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  const std::string& s = it->second;
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error("config key \"" + key + "\": not an integer: \"" + s + "\"");
  return v;
}

double config_double(const ConfigMap& cfg, const std::string& key, double fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  const std::string& s = it->second;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error("config key \"" + key + "\": not a number: \"" + s + "\"");
  return v;
}

std::string config_string(const ConfigMap& cfg, const std::string& key,
                          const std::string& fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

}  // namespace snnq
