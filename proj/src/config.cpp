#include "config.hpp"

#include "errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace perco {

namespace {

enum class Type { real, integer, unsigned_integer, choice, real_list, table };

struct KeySpec {
  const char* key;
  Type type;
  std::vector<std::string> choices = {};
};

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"model.variant", Type::choice, {"boolean", "classical", "generalized"}},
      {"model.dim", Type::integer},
      {"model.radius.law", Type::choice, {"deterministic", "uniform", "pareto"}},
      {"model.radius.value", Type::real},
      {"model.radius.min", Type::real},
      {"model.radius.max", Type::real},
      {"model.radius.shape", Type::real},
      {"model.radius.scale", Type::real},
      {"model.kernel", Type::choice, {"plain", "product", "sum", "min"}},
      {"model.tau", Type::real},
      {"model.beta", Type::real},
      {"model.profile.kind", Type::choice, {"indicator", "polynomial", "tabulated"}},
      {"model.profile.theta", Type::real},
      {"model.profile.delta", Type::real},
      {"model.profile.table", Type::table},
      {"model.damping.radius", Type::real},
      {"model.damping.factor", Type::real},
      {"lambda", Type::real_list},
      {"lambda_prime", Type::real},
      {"event.kind", Type::choice, {"L", "C", "G", "F"}},
      {"event.c", Type::real},
      {"event.c_prime", Type::real},
      {"event.center", Type::real_list},
      {"r", Type::real_list},
      {"grid.r_min", Type::real},
      {"grid.r_max", Type::real},
      {"grid.ratio", Type::real},
      {"grid.count", Type::integer},
      {"trials", Type::integer},
      {"level", Type::real},
      {"seed", Type::unsigned_integer},
      {"window.margin", Type::real},
      {"window.radius", Type::real},
      {"window.lower", Type::real_list},
      {"window.upper", Type::real_list},
      {"probe.p_min", Type::real},
      {"probe.decrease_factor", Type::real},
      {"renorm.constant", Type::real},
      {"renorm.c_mix", Type::real},
      {"renorm.zeta", Type::real},
      {"mixing.x", Type::real_list},
      {"bracket.threshold", Type::real},
      {"bracket.lambda_min", Type::real},
      {"bracket.lambda_max", Type::real},
      {"bracket.r_probe", Type::real},
      {"bracket.max_iterations", Type::integer},
      {"validate.trials", Type::integer},
      {"validate.rel_tol", Type::real},
  };
  return keys;
}

const KeySpec* spec_of(const std::string& key) {
  for (const auto& s : schema())
    if (key == s.key) return &s;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_real(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// Normalized value or an error message (empty string on success via `ok`).
std::string normalize(const KeySpec& spec, const std::string& raw, std::string& error) {
  switch (spec.type) {
  case Type::real: {
    double v;
    if (!parse_real(raw, v)) return error = "expected a finite number, got '" + raw + "'", "";
    return shortest(v);
  }
  case Type::integer: {
    std::int64_t v;
    const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (res.ec != std::errc() || res.ptr != raw.data() + raw.size()) {
      return error = "expected an integer, got '" + raw + "'", "";
    }
    return std::to_string(v);
  }
  case Type::unsigned_integer: {
    std::uint64_t v;
    const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (res.ec != std::errc() || res.ptr != raw.data() + raw.size()) {
      return error = "expected a nonnegative 64-bit integer, got '" + raw + "'", "";
    }
    return std::to_string(v);
  }
  case Type::choice: {
    if (std::find(spec.choices.begin(), spec.choices.end(), raw) == spec.choices.end()) {
      std::string all;
      for (const auto& c : spec.choices) all += (all.empty() ? "" : ", ") + c;
      return error = "expected one of {" + all + "}, got '" + raw + "'", "";
    }
    return raw;
  }
  case Type::real_list: {
    std::string out;
    for (const auto& part : split(raw, ',')) {
      double v;
      if (!parse_real(part, v)) return error = "expected a comma-separated list of numbers, got '" + raw + "'", "";
      out += (out.empty() ? "" : ", ") + shortest(v);
    }
    if (out.empty()) return error = "expected at least one number", "";
    return out;
  }
  case Type::table: {
    std::string out;
    for (const auto& part : split(raw, ',')) {
      const auto colon = part.find(':');
      double t, v;
      if (colon == std::string::npos || !parse_real(trim(part.substr(0, colon)), t) ||
          !parse_real(trim(part.substr(colon + 1)), v)) {
        return error = "expected 't:value' pairs separated by commas, got '" + raw + "'", "";
      }
      out += (out.empty() ? "" : ", ") + shortest(t) + ":" + shortest(v);
    }
    if (out.empty()) return error = "expected at least one 't:value' pair", "";
    return out;
  }
  }
  return raw;
}

} // namespace

void Config::fail(const std::string& key, const std::string& msg) const {
  const int line = line_of(key);
  if (line > 0) throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + msg);
  throw ConfigError(key + ": " + msg);
}

void Config::set(const std::string& key, const std::string& value, int line) {
  const auto* spec = spec_of(key);
  const std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "";
  if (!spec) throw ConfigError(where + "unknown key '" + key + "'");
  std::string error;
  auto norm = normalize(*spec, trim(value), error);
  if (!error.empty()) throw ConfigError(where + key + ": " + error);
  values_[key] = {std::move(norm), line};
}

Config Config::parse(std::string_view text) {
  Config cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" + body + "'");
    }
    const std::string key = trim(body.substr(0, eq));
    if (cfg.has(key)) {
      throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' already set on line " +
                        std::to_string(cfg.line_of(key)));
    }
    cfg.set(key, body.substr(eq + 1), line);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& spec : schema()) {
    const auto it = values_.find(spec.key);
    if (it != values_.end()) out += std::string(spec.key) + " = " + it->second.value + "\n";
  }
  return out;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) > 0;
}

int Config::line_of(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? 0 : it->second.line;
}

const std::string* Config::find(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second.value;
}

double Config::real(const std::string& key) const {
  const auto* v = find(key);
  if (!v) throw ConfigError("missing required key '" + key + "'");
  double out;
  if (!parse_real(*v, out)) fail(key, "not a single number");
  return out;
}

double Config::real(const std::string& key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

std::int64_t Config::integer(const std::string& key) const {
  const auto* v = find(key);
  if (!v) throw ConfigError("missing required key '" + key + "'");
  return std::stoll(*v);
}

std::int64_t Config::integer(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t Config::unsigned_integer(const std::string& key, std::uint64_t fallback) const {
  const auto* v = find(key);
  return v ? std::stoull(*v) : fallback;
}

std::string Config::text(const std::string& key) const {
  const auto* v = find(key);
  if (!v) throw ConfigError("missing required key '" + key + "'");
  return *v;
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

std::vector<double> Config::reals(const std::string& key) const {
  const auto* v = find(key);
  if (!v) throw ConfigError("missing required key '" + key + "'");
  std::vector<double> out;
  for (const auto& part : split(*v, ',')) {
    double x;
    if (!parse_real(part, x)) fail(key, "not a list of numbers");
    out.push_back(x);
  }
  return out;
}

std::vector<double> Config::reals(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? reals(key) : fallback;
}

namespace {

// Re-raises a model construction error anchored at the line of `key`.
template <class F>
auto anchored(const Config& cfg, const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    const int line = cfg.line_of(key);
    const std::string_view msg = e.what();
    if (line > 0 && !msg.starts_with("line ")) {
      throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + std::string(msg));
    }
    throw;
  }
}

void reject(const Config& cfg, const std::vector<std::string>& keys, const std::string& why) {
  for (const auto& k : keys) {
    if (cfg.has(k)) {
      throw ConfigError("line " + std::to_string(cfg.line_of(k)) + ": key '" + k + "' " + why);
    }
  }
}

ClassicalModel classical_from_config(const Config& cfg) {
  ClassicalModel m;
  const std::string kernel = cfg.text("model.kernel", "plain");
  m.kernel = kernel == "product" ? KernelKind::product
             : kernel == "sum"   ? KernelKind::sum
             : kernel == "min"   ? KernelKind::min
                                 : KernelKind::plain;
  m.tau = cfg.real("model.tau", 2.0);
  m.beta = cfg.real("model.beta", 1.0);
  if (m.kernel == KernelKind::plain) reject(cfg, {"model.tau"}, "does not apply to the plain kernel");
  const std::string kind = cfg.text("model.profile.kind", "indicator");
  if (kind == "indicator") {
    reject(cfg, {"model.profile.delta", "model.profile.table"}, "does not apply to an indicator profile");
    m.profile = anchored(cfg, "model.profile.theta", [&] { return Profile::indicator(cfg.real("model.profile.theta", 1.0)); });
  } else if (kind == "polynomial") {
    reject(cfg, {"model.profile.theta", "model.profile.table"}, "does not apply to a polynomial profile");
    m.profile = anchored(cfg, "model.profile.delta", [&] { return Profile::polynomial(cfg.real("model.profile.delta")); });
  } else {
    reject(cfg, {"model.profile.theta", "model.profile.delta"}, "does not apply to a tabulated profile");
    m.profile = anchored(cfg, "model.profile.table", [&] {
      std::vector<std::pair<double, double>> table;
      std::istringstream in(cfg.text("model.profile.table"));
      std::string part;
      while (std::getline(in, part, ',')) {
        const auto colon = part.find(':');
        table.emplace_back(std::stod(part.substr(0, colon)), std::stod(part.substr(colon + 1)));
      }
      return Profile::tabulated(std::move(table));
    });
  }
  return m;
}

} // namespace

ModelSpec model_from_config(const Config& cfg) {
  const std::string variant = cfg.text("model.variant");
  const int dim = static_cast<int>(cfg.integer("model.dim", 2));
  const std::vector<std::string> radius_keys = {"model.radius.law",   "model.radius.value", "model.radius.min",
                                                "model.radius.max",   "model.radius.shape", "model.radius.scale"};
  const std::vector<std::string> classical_keys = {"model.kernel",        "model.tau",           "model.beta",
                                                   "model.profile.kind",  "model.profile.theta", "model.profile.delta",
                                                   "model.profile.table"};
  const std::vector<std::string> damping_keys = {"model.damping.radius", "model.damping.factor"};

  return anchored(cfg, "model.dim", [&] {
    if (variant == "boolean") {
      reject(cfg, classical_keys, "does not apply to a boolean model");
      reject(cfg, damping_keys, "does not apply to a boolean model");
      const std::string law = cfg.text("model.radius.law", "deterministic");
      RadiusLaw radius;
      if (law == "deterministic") {
        reject(cfg, {"model.radius.min", "model.radius.max", "model.radius.shape", "model.radius.scale"},
               "does not apply to a deterministic radius");
        radius = anchored(cfg, "model.radius.value", [&] { return RadiusLaw::deterministic(cfg.real("model.radius.value")); });
      } else if (law == "uniform") {
        reject(cfg, {"model.radius.value", "model.radius.shape", "model.radius.scale"},
               "does not apply to a uniform radius law");
        radius = anchored(cfg, "model.radius.max", [&] {
          return RadiusLaw::uniform(cfg.real("model.radius.min"), cfg.real("model.radius.max"));
        });
      } else {
        reject(cfg, {"model.radius.value", "model.radius.min", "model.radius.max"},
               "does not apply to a pareto radius law");
        radius = anchored(cfg, "model.radius.shape", [&] {
          return RadiusLaw::pareto(cfg.real("model.radius.shape"), cfg.real("model.radius.scale"));
        });
      }
      return ModelSpec::boolean(dim, radius);
    }
    reject(cfg, radius_keys, "does not apply to a " + variant + " model");
    auto base = anchored(cfg, "model.tau", [&] { return classical_from_config(cfg); });
    if (variant == "classical") {
      reject(cfg, damping_keys, "does not apply to a classical model");
      return anchored(cfg, "model.beta",
                      [&] { return ModelSpec::classical(dim, base.kernel, base.profile, base.tau, base.beta); });
    }
    return anchored(cfg, "model.damping.factor", [&] {
      return ModelSpec::generalized(dim, base, cfg.real("model.damping.radius", 1.0),
                                    cfg.real("model.damping.factor", 0.5));
    });
  });
}

} // namespace perco
