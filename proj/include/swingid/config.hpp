#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace swingid {

// Flat key-value configuration. One `key = value` pair per line, sections are
// expressed with dotted key prefixes (model.thigh.mass = 6.5). '#' starts a
// comment, blank lines are ignored, keys are case-sensitive.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const;

  // Typed getters. The one-argument forms throw ConfigError when the key is
  // missing or the value does not parse; the two-argument forms fall back.
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);

  // Keys that start with `prefix` (sorted).
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  // Canonical text form: sorted keys, one per line. Parsing the result yields
  // an equal Config, and the fingerprint below is computed from it.
  std::string serialize() const;

  // FNV-1a 64-bit fingerprint of serialize(), as fixed-width hex.
  std::string fingerprint() const;

  std::size_t size() const { return values_.size(); }

  // Merge `other` on top of this config (other wins on conflicts).
  void merge(const Config& other);

 private:
  std::string require(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

}  // namespace swingid
