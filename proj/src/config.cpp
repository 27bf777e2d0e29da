#include "swingid/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "swingid/errors.hpp"

namespace swingid {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return from_string(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    cfg.values_[key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::require(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string v = require(key);
  std::size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as number");
  }
  if (pos != v.size())
    throw ConfigError("config key '" + key + "': trailing characters in '" + v + "'");
  return d;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
  const std::string v = require(key);
  std::size_t pos = 0;
  long long i = 0;
  try {
    i = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as integer");
  }
  if (pos != v.size())
    throw ConfigError("config key '" + key + "': trailing characters in '" + v + "'");
  return i;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key) const {
  const std::string v = require(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as bool");
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

std::string Config::get_string(const std::string& key) const { return require(key); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? require(key) : fallback;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

void Config::set_double(const std::string& key, double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  values_[key] = buf;
}

void Config::set_int(const std::string& key, long long value) {
  values_[key] = std::to_string(value);
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (auto it = values_.lower_bound(prefix); it != values_.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    out.push_back(it->first);
  }
  return out;
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

std::string Config::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

}  // namespace swingid
