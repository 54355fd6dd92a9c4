#pragma once

#include <map>
#include <string>
#include <vector>

namespace hawkes {

// Plain key=value configuration with optional [section] headers; keys in a
// section are exposed as "section.key". '#' starts a comment. Duplicate
// keys keep the last value.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in);
ConfigMap parse_config_file(const std::string& path);

// Lookup helpers; they throw std::runtime_error naming the key on a value
// that fails to parse.
double config_double(const ConfigMap& cfg, const std::string& key, double fallback);
long long config_int(const ConfigMap& cfg, const std::string& key, long long fallback);
bool config_bool(const ConfigMap& cfg, const std::string& key, bool fallback);
std::string config_string(const ConfigMap& cfg, const std::string& key,
                          const std::string& fallback);
std::vector<double> config_list(const ConfigMap& cfg, const std::string& key,
                                const std::vector<double>& fallback);

}  // namespace hawkes
