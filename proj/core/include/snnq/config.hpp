#pragma once

#include <map>
#include <string>
#include <vector>

namespace snnq {

using ConfigMap = std::map<std::string, std::string>;

// key=value per line; '#' starts a comment; blank lines are skipped.
// Malformed lines and duplicate keys are rejected with the line number.
ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

// Keys the command line understands; anything else in a config file is an error.
const std::vector<std::string>& known_config_keys();
void check_known_keys(const ConfigMap& cfg);

// Typed accessors with range validation.
long config_long(const ConfigMap& cfg, const std::string& key, long fallback);
double config_double(const ConfigMap& cfg, const std::string& key, double fallback);
std::string config_string(const ConfigMap& cfg, const std::string& key,
                          const std::string& fallback);

}  // namespace snnq
