#include "perco/perco.h"

#include "config.hpp"
#include "errors.hpp"
#include "ppp.hpp"
#include "runner.hpp"

#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <new>
#include <string>

struct perco_config {
  perco::Config cfg;
};

struct perco_result {
  perco::ResultTable table;
};

namespace {

thread_local std::string last_error;

perco_status fail(perco_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class Fn>
perco_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return PERCO_OK;
  } catch (const perco::ConfigError& e) {
    return fail(PERCO_ERR_CONFIG, e.what());
  } catch (const perco::ResourceError& e) {
    return fail(PERCO_ERR_RESOURCE, e.what());
  } catch (const perco::ContractError& e) {
    return fail(PERCO_ERR_CONTRACT, e.what());
  } catch (const perco::WindowCoverageError& e) {
    return fail(PERCO_ERR_WINDOW, e.what());
  } catch (const perco::ConsistencyError& e) {
    return fail(PERCO_ERR_CONSISTENCY, e.what());
  } catch (const perco::IoError& e) {
    return fail(PERCO_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PERCO_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(PERCO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PERCO_ERR_INTERNAL, "unknown exception");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
  if (!out) throw perco::IoError("cannot write " + p.string());
}

#define REQUIRE_ARG(x)                                                                                                 \
  if (!(x)) return fail(PERCO_ERR_INVALID_ARG, #x " must not be null")

} // namespace

extern "C" {

const char* perco_last_error(void) {
  return last_error.c_str();
}

const char* perco_status_name(perco_status status) {
  switch (status) {
  case PERCO_OK: return "ok";
  case PERCO_ERR_CONFIG: return "config error";
  case PERCO_ERR_RESOURCE: return "resource error";
  case PERCO_ERR_CONTRACT: return "contract error";
  case PERCO_ERR_WINDOW: return "window coverage error";
  case PERCO_ERR_CONSISTENCY: return "consistency error";
  case PERCO_ERR_IO: return "io error";
  case PERCO_ERR_INVALID_ARG: return "invalid argument";
  case PERCO_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* perco_version(void) {
  return "0.1.0";
}

void perco_string_free(char* s) {
  std::free(s);
}

perco_status perco_config_parse(const char* text, perco_config** out) {
  REQUIRE_ARG(text);
  REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new perco_config{perco::Config::parse(text)}; });
}

perco_status perco_config_load(const char* path, perco_config** out) {
  REQUIRE_ARG(path);
  REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new perco_config{perco::Config::load(path)}; });
}

perco_status perco_config_set(perco_config* cfg, const char* key, const char* value) {
  REQUIRE_ARG(cfg);
  REQUIRE_ARG(key);
  REQUIRE_ARG(value);
  return guarded([&] { cfg->cfg.set(key, value); });
}

perco_status perco_config_serialize(const perco_config* cfg, char** out) {
  REQUIRE_ARG(cfg);
  REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = dup(cfg->cfg.serialize()); });
}

void perco_config_free(perco_config* cfg) {
  delete cfg;
}

const char* const* perco_subcommands(void) {
  static const auto names = [] {
    std::vector<const char*> v;
    for (const auto& s : perco::subcommand_names()) v.push_back(s.c_str());
    v.push_back(nullptr);
    return v;
  }();
  return names.data();
}

perco_status perco_run(const char* subcommand, const perco_config* cfg, int threads, perco_result** out) {
  REQUIRE_ARG(subcommand);
  REQUIRE_ARG(cfg);
  REQUIRE_ARG(out);
  *out = nullptr;
  if (threads < 1) return fail(PERCO_ERR_INVALID_ARG, "threads must be >= 1");
  return guarded([&] { *out = new perco_result{perco::run_subcommand(subcommand, cfg->cfg, threads)}; });
}

perco_status perco_result_body(const perco_result* res, char** out) {
  REQUIRE_ARG(res);
  REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = dup(res->table.body()); });
}

perco_status perco_result_text(const perco_result* res, const char* timestamp, char** out) {
  REQUIRE_ARG(res);
  REQUIRE_ARG(timestamp);
  REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = dup(res->table.text(timestamp)); });
}

perco_status perco_result_write(const perco_result* res, const char* dir, char** path) {
  REQUIRE_ARG(res);
  REQUIRE_ARG(dir);
  if (path) *path = nullptr;
  return guarded([&] {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw perco::IoError("cannot create " + std::string(dir) + ": " + ec.message());
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    const fs::path table = fs::path(dir) / (res->table.subcommand + ".csv");
    write_file(table, res->table.text(stamp));
    for (const auto& [name, content] : res->table.attachments) write_file(fs::path(dir) / name, content);
    if (path) *path = dup(table.string());
  });
}

size_t perco_result_row_count(const perco_result* res) {
  return res ? res->table.rows.size() : 0;
}

void perco_result_free(perco_result* res) {
  delete res;
}

perco_status perco_plot_data(const char* result_text, char** out) {
  REQUIRE_ARG(result_text);
  REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = dup(perco::plot_data(result_text)); });
}

double perco_point_budget(void) {
  return perco::point_budget();
}

} // extern "C"
