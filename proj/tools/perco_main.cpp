#include "perco/perco.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <memory>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int report(perco_status s) {
  std::cerr << "perco: " << perco_status_name(s) << ": " << perco_last_error() << "\n";
  if (s == PERCO_ERR_RESOURCE) {
    std::cerr << "perco: the per-replicate point budget is " << perco_point_budget()
              << "; shrink lambda or the largest r, or raise PERCO_BUDGET_POINTS if memory allows\n";
  }
  return static_cast<int>(s) + 1;
}

struct Owned {
  char* s = nullptr;
  ~Owned() { perco_string_free(s); }
};

int run(const std::string& sub, const std::string& config_path, const std::string* seed, int threads,
        const std::string& out_dir) {
  perco_config* cfg = nullptr;
  if (auto s = perco_config_load(config_path.c_str(), &cfg); s != PERCO_OK) return report(s);
  std::unique_ptr<perco_config, void (*)(perco_config*)> cfg_guard(cfg, perco_config_free);
  if (seed) {
    if (auto s = perco_config_set(cfg, "seed", seed->c_str()); s != PERCO_OK) return report(s);
  }
  perco_result* res = nullptr;
  if (auto s = perco_run(sub.c_str(), cfg, threads, &res); s != PERCO_OK) return report(s);
  std::unique_ptr<perco_result, void (*)(perco_result*)> res_guard(res, perco_result_free);
  Owned path;
  if (auto s = perco_result_write(res, out_dir.c_str(), &path.s); s != PERCO_OK) return report(s);
  std::cout << path.s << "\n";
  return 0;
}

int plot(const std::string& result_path, const std::string& out_path) {
  std::ifstream in(result_path, std::ios::binary);
  if (!in) {
    std::cerr << "perco: cannot read " << result_path << "\n";
    return static_cast<int>(PERCO_ERR_IO) + 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  Owned data;
  if (auto s = perco_plot_data(buf.str().c_str(), &data.s); s != PERCO_OK) return report(s);
  if (out_path.empty()) {
    std::cout << data.s;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << data.s;
  if (!out) {
    std::cerr << "perco: cannot write " << out_path << "\n";
    return static_cast<int>(PERCO_ERR_IO) + 1;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments on continuum random connection models"};
  app.require_subcommand(1);

  std::vector<std::string> subs;
  for (auto p = perco_subcommands(); *p; ++p) subs.emplace_back(*p);

  std::string sub, config_path, seed, out_dir = ".";
  int threads = 1;
  auto* run_cmd = app.add_subcommand("run", "run an experiment and write <out>/<subcommand>.csv");
  run_cmd->add_option("subcommand", sub, "operation to run")->required()->check(CLI::IsMember(subs));
  run_cmd->add_option("config", config_path, "experiment config file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the master seed (u64)");
  run_cmd->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
  run_cmd->add_option("--out", out_dir, "output directory");

  std::string result_path, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "turn a result file into series,x,y,y_lo,y_hi rows");
  plot_cmd->add_option("result", result_path, "result file written by run")->required();
  plot_cmd->add_option("--out", plot_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) return run(sub, config_path, seed_opt->count() ? &seed : nullptr, threads, out_dir);
  return plot(result_path, plot_out);
}
