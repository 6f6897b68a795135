#pragma once

#include "model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace perco {

// Flat "key = value" experiment description with dotted keys, '#' comments
// and one entry per line. Only keys from a fixed schema are accepted; values
// are normalized on parse so parse -> serialize -> parse is the identity.
class Config {
public:
  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  // Normalized form: the set keys in schema order.
  std::string serialize() const;

  bool has(const std::string& key) const;
  // Line the key was read from; 0 when set programmatically.
  int line_of(const std::string& key) const;

  // Typed getters; the default applies when the key is absent. Throw
  // ConfigError when the key is missing and no default is given.
  double real(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<double> reals(const std::string& key, std::vector<double> fallback) const;

  // Validates and normalizes `value` against the schema.
  void set(const std::string& key, const std::string& value, int line = 0);

  bool operator==(const Config& o) const { return values_ == o.values_; }

private:
  struct Entry {
    std::string value;
    int line = 0;

    // Line numbers are provenance, not content.
    bool operator==(const Entry& o) const { return value == o.value; }
  };
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;
  const std::string* find(const std::string& key) const;

  std::map<std::string, Entry> values_;
};

// Builds the model described by the model.* keys. Keys that do not apply to
// the chosen variant are rejected.
ModelSpec model_from_config(const Config& cfg);

} // namespace perco
