#include "hawkes/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hawkes {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigMap parse_config(std::istream& in) {
    ConfigMap cfg;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
        }
        cfg[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    try {
        return parse_config(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

double config_double(const ConfigMap& cfg, const std::string& key, double fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key " + key + ": bad number \"" + it->second + "\"");
    }
}

long long config_int(const ConfigMap& cfg, const std::string& key, long long fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key " + key + ": bad integer \"" + it->second + "\"");
    }
}

bool config_bool(const ConfigMap& cfg, const std::string& key, bool fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw std::runtime_error("config key " + key + ": bad boolean \"" + it->second + "\"");
}

std::string config_string(const ConfigMap& cfg, const std::string& key,
                          const std::string& fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
}

std::vector<double> config_list(const ConfigMap& cfg, const std::string& key,
                                const std::vector<double>& fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    std::vector<double> values;
    std::stringstream ss(it->second);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw std::runtime_error("config key " + key + ": bad list entry \"" + token + "\"");
        }
    }
    if (values.empty()) {
        throw std::runtime_error("config key " + key + ": empty list");
    }
    return values;
}

}  // namespace hawkes
