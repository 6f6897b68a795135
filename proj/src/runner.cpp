#include "runner.hpp"

#include "coupling.hpp"
#include "errors.hpp"
#include "renorm.hpp"
#include "rng.hpp"
#include "validate.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace perco {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::string fmt(double v) {
  return format_real(v);
}

std::string fmt(std::int64_t v) {
  return std::to_string(v);
}

std::string flag(bool b) {
  return b ? "true" : "false";
}

std::string fmt(const std::optional<CampbellValue>& v) {
  if (!v) return "";
  return v->verdict == IntegralVerdict::divergent ? "inf" : fmt(v->value);
}

void add_estimate(std::vector<std::string>& row, const Estimate& e) {
  row.push_back(fmt(e.hits));
  row.push_back(fmt(e.p));
  row.push_back(fmt(e.lo));
  row.push_back(fmt(e.hi));
}

void add_estimate_columns(std::vector<std::string>& cols, const std::string& prefix) {
  for (const char* s : {"hits", "p", "lo", "hi"}) cols.push_back(prefix + "_" + s);
}

RunOptions run_options(const Config& cfg, int threads) {
  RunOptions opt;
  opt.threads = threads;
  opt.window_margin = cfg.real("window.margin", default_window_margin);
  opt.level = cfg.real("level", 0.95);
  if (!(opt.window_margin >= 0.0)) throw ConfigError("window.margin must be >= 0");
  if (!(opt.level > 0.0 && opt.level < 1.0)) throw ConfigError("level must lie in (0,1)");
  return opt;
}

std::int64_t trials(const Config& cfg) {
  const auto n = cfg.integer("trials", 1000);
  if (n < 1) throw ConfigError("line " + std::to_string(cfg.line_of("trials")) + ": trials must be >= 1");
  return n;
}

double single_lambda(const Config& cfg) {
  const auto l = cfg.reals("lambda");
  if (l.size() != 1) throw ConfigError("line " + std::to_string(cfg.line_of("lambda")) + ": this subcommand takes one lambda");
  return l[0];
}

void common_meta(ResultTable& t, const Config& cfg, const ModelSpec& model) {
  t.meta.emplace_back("model", model.describe());
  t.meta.emplace_back("seed", std::to_string(cfg.unsigned_integer("seed", 1)));
}

EventSpec event_from_config(const Config& cfg, double r) {
  const std::string kind = cfg.text("event.kind");
  if (kind == "L") return EventSpec::long_edge(r, cfg.real("event.c", 1.0));
  if (kind == "C") return EventSpec::crossing(r);
  if (kind == "F") return EventSpec::far_edge(r);
  return EventSpec::local_crossing(r, cfg.reals("event.center", {}));
}

ResultTable run_estimate(const Config& cfg, int threads) {
  const auto model = model_from_config(cfg);
  const auto opt = run_options(cfg, threads);
  const auto seed = cfg.unsigned_integer("seed", 1);
  const auto n = trials(cfg);
  ResultTable t;
  common_meta(t, cfg, model);
  t.columns = {"lambda", "event", "r", "trials"};
  add_estimate_columns(t.columns, "p");
  t.columns.insert(t.columns.end(), {"window_radius", "truncation_bound"});
  std::uint64_t row = 0;
  for (double lambda : cfg.reals("lambda")) {
    for (double r : cfg.reals("r")) {
      const auto ev = event_from_config(cfg, r);
      const auto est = estimate_event(model, lambda, ev, n, hash_combine(seed, row++), opt);
      std::vector<std::string> cells = {fmt(lambda), ev.label(), fmt(r), fmt(n)};
      add_estimate(cells, est.estimate);
      cells.push_back(fmt(est.window_radius));
      cells.push_back(fmt(est.truncation));
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

std::vector<double> grid_from_config(const Config& cfg) {
  const double r_min = cfg.real("grid.r_min");
  const int k = static_cast<int>(cfg.integer("grid.count", 6));
  if (cfg.has("grid.r_max") && cfg.has("grid.ratio")) throw ConfigError("give grid.r_max or grid.ratio, not both");
  const double r_max = cfg.has("grid.r_max") ? cfg.real("grid.r_max")
                                             : r_min * std::pow(cfg.real("grid.ratio", 2.0), std::max(0, k - 1));
  return geometric_grid(r_min, r_max, k);
}

ResultTable run_probe(const Config& cfg, int threads) {
  const auto model = model_from_config(cfg);
  const auto opt = run_options(cfg, threads);
  const auto grid = grid_from_config(cfg);
  ProbeOptions popt;
  popt.p_min = cfg.real("probe.p_min", popt.p_min);
  popt.decrease_factor = cfg.real("probe.decrease_factor", popt.decrease_factor);
  const double c = cfg.real("event.c", 1.0);
  const auto rep = probe_H(model, single_lambda(cfg), c, grid.front(), grid.back(), static_cast<int>(grid.size()),
                           trials(cfg), cfg.unsigned_integer("seed", 1), opt, popt);
  ResultTable t;
  common_meta(t, cfg, model);
  t.meta.emplace_back("verdict", trend_verdict_name(rep.verdict));
  t.meta.emplace_back("slope", rep.slope_defined ? fmt(rep.slope) : "undefined");
  t.meta.emplace_back("slope_ci", rep.slope_defined ? fmt(rep.slope_lo) + " " + fmt(rep.slope_hi) : "undefined");
  t.meta.emplace_back("all_zero", flag(rep.all_zero));
  t.meta.emplace_back("small_mean_caveat", flag(rep.small_mean_caveat));
  t.meta.emplace_back("p_min", fmt(popt.p_min));
  t.meta.emplace_back("decrease_factor", fmt(popt.decrease_factor));
  t.meta.emplace_back("note", rep.note);
  t.columns = {"lambda", "c", "r", "trials"};
  add_estimate_columns(t.columns, "p");
  t.columns.insert(t.columns.end(), {"campbell_mean", "truncation_bound"});
  for (const auto& pt : rep.points) {
    std::vector<std::string> cells = {fmt(rep.lambda), fmt(c), fmt(pt.r), fmt(pt.estimate.trials)};
    add_estimate(cells, pt.estimate);
    cells.push_back(fmt(pt.campbell));
    cells.push_back(fmt(pt.truncation));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

ResultTable run_lemma1(const Config& cfg, int threads) {
  const auto model = model_from_config(cfg);
  const auto opt = run_options(cfg, threads);
  const auto seed = cfg.unsigned_integer("seed", 1);
  const double lambda = single_lambda(cfg);
  const double c = cfg.real("event.c", 1.0);
  const double cp = cfg.real("event.c_prime");
  ResultTable t;
  common_meta(t, cfg, model);
  t.columns = {"lambda", "r", "c", "c_prime", "covering", "window_radius"};
  add_estimate_columns(t.columns, "lhs");
  add_estimate_columns(t.columns, "rhs");
  t.columns.insert(t.columns.end(), {"exact_violations", "not_violated"});
  std::uint64_t row = 0;
  for (double r : cfg.reals("r")) {
    const auto rep = check_lemma1(model, lambda, r, c, cp, trials(cfg), hash_combine(seed, row++), opt);
    std::vector<std::string> cells = {fmt(lambda), fmt(r), fmt(c), fmt(cp), std::to_string(rep.covering),
                                      fmt(rep.window_radius)};
    add_estimate(cells, rep.lhs);
    add_estimate(cells, rep.rhs);
    cells.push_back(fmt(rep.exact_violations));
    cells.push_back(flag(rep.not_violated));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

ResultTable run_lemma2(const Config& cfg, int threads) {
  const auto model = model_from_config(cfg);
  const auto opt = run_options(cfg, threads);
  const auto seed = cfg.unsigned_integer("seed", 1);
  const double lp = cfg.real("lambda_prime");
  ResultTable t;
  common_meta(t, cfg, model);
  t.columns = {"lambda", "lambda_prime", "r", "trials"};
  add_estimate_columns(t.columns, "low");
  add_estimate_columns(t.columns, "high");
  t.columns.insert(t.columns.end(),
                   {"upper_violations", "subgraph_failures", "lower_ok", "upper_ok", "not_violated"});
  std::uint64_t row = 0;
  for (double lambda : cfg.reals("lambda")) {
    for (double r : cfg.reals("r")) {
      const auto rep = check_lemma2(model, lambda, lp, r, trials(cfg), hash_combine(seed, row++), opt);
      std::vector<std::string> cells = {fmt(lambda), fmt(lp), fmt(r), fmt(rep.low.trials)};
      add_estimate(cells, rep.low);
      add_estimate(cells, rep.high);
      cells.insert(cells.end(), {fmt(rep.upper_violations), fmt(rep.subgraph_failures), flag(rep.lower_ok),
                                 flag(rep.upper_ok), flag(rep.not_violated)});
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

ResultTable run_mixing(const Config& cfg, int threads) {
  const auto model = model_from_config(cfg);
  const auto opt = run_options(cfg, threads);
  const auto seed = cfg.unsigned_integer("seed", 1);
  std::vector<double> unit(static_cast<std::size_t>(model.dim()), 0.0);
  unit[0] = 7.0;
  const auto x = cfg.reals("mixing.x", unit);
  if (x.size() != unit.size()) throw ConfigError("line " + std::to_string(cfg.line_of("mixing.x")) + ": mixing.x needs " + std::to_string(unit.size()) + " coordinates");
  ResultTable t;
  common_meta(t, cfg, model);
  t.meta.emplace_back("x_units", "mixing.x is given in units of r");
  t.columns = {"lambda", "r", "separation", "trials", "p_a", "p_b", "cov", "se", "cov_lo", "cov_hi", "contains_zero"};
  std::uint64_t row = 0;
  for (double lambda : cfg.reals("lambda")) {
    for (double r : cfg.reals("r")) {
      std::vector<double> centre(x);
      for (auto& v : centre) v *= r;
      const auto m = estimate_mixing_cov(model, lambda, r, centre, trials(cfg), hash_combine(seed, row++), opt);
      t.rows.push_back({fmt(lambda), fmt(r), fmt(m.separation), fmt(m.trials), fmt(m.p_a), fmt(m.p_b), fmt(m.cov),
                        fmt(m.se), fmt(m.lo), fmt(m.hi), flag(m.contains_zero())});
    }
  }
  return t;
}

ResultTable run_renorm(const Config& cfg, int threads) {
  const auto model = model_from_config(cfg);
  const auto opt = run_options(cfg, threads);
  RenormOptions ropt;
  ropt.constant = cfg.real("renorm.constant", 1.0);
  if (cfg.has("renorm.c_mix")) ropt.c_mix = cfg.real("renorm.c_mix");
  if (cfg.has("renorm.zeta")) ropt.zeta = cfg.real("renorm.zeta");
  const double lambda = single_lambda(cfg);
  const auto table = renorm_table(model, lambda, cfg.reals("r"), trials(cfg), cfg.unsigned_integer("seed", 1), opt, ropt);
  ResultTable t;
  common_meta(t, cfg, model);
  t.meta.emplace_back("constant", fmt(ropt.constant));
  t.meta.emplace_back("window_factor", fmt(table.window_factor));
  t.meta.emplace_back("fitted_stable", flag(table.fitted_stable));
  t.meta.emplace_back("note", table.note);
  t.columns = {"lambda", "r"};
  add_estimate_columns(t.columns, "lhs");
  add_estimate_columns(t.columns, "g");
  add_estimate_columns(t.columns, "c");
  add_estimate_columns(t.columns, "f");
  t.columns.insert(t.columns.end(), {"fitted_c", "bound", "inclusion_failures"});
  for (const auto& row : table.rows) {
    std::vector<std::string> cells = {fmt(lambda), fmt(row.r)};
    add_estimate(cells, row.lhs);
    add_estimate(cells, row.g_est);
    add_estimate(cells, row.c_est);
    add_estimate(cells, row.f_est);
    cells.push_back(row.fitted_c ? fmt(*row.fitted_c) : "");
    cells.push_back(fmt(row.bound));
    cells.push_back(fmt(row.inclusion_failures));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

ResultTable run_bracket(const Config& cfg, int threads) {
  const auto model = model_from_config(cfg);
  const auto opt = run_options(cfg, threads);
  const double lmin = cfg.real("bracket.lambda_min", 0.0);
  const double lmax = cfg.real("bracket.lambda_max");
  const double r_probe = cfg.has("bracket.r_probe")
                             ? cfg.real("bracket.r_probe")
                             : default_probe_scale(model.dim(), lmax, 1e5, opt.window_margin);
  const auto b = bracket_lambda_hat(model, r_probe, cfg.real("bracket.threshold", 0.5), lmin, lmax, trials(cfg),
                                    cfg.unsigned_integer("seed", 1), opt,
                                    static_cast<int>(cfg.integer("bracket.max_iterations", 12)));
  ResultTable t;
  common_meta(t, cfg, model);
  t.meta.emplace_back("r_probe", fmt(b.r_probe));
  t.meta.emplace_back("threshold", fmt(b.threshold));
  t.meta.emplace_back("lambda_lo", fmt(b.lo));
  t.meta.emplace_back("lambda_hi", fmt(b.hi));
  t.meta.emplace_back("iterations", std::to_string(b.iterations));
  t.meta.emplace_back("never_crosses_threshold", flag(b.never_crosses));
  t.meta.emplace_back("below_lower_bound", flag(b.below_lower_bound));
  t.meta.emplace_back("ambiguous_stop", flag(b.ambiguous_stop));
  t.meta.emplace_back("note", b.note);
  t.columns = {"step", "lambda", "trials"};
  add_estimate_columns(t.columns, "p");
  for (std::size_t k = 0; k < b.evaluations.size(); ++k) {
    const auto& e = b.evaluations[k];
    std::vector<std::string> cells = {std::to_string(k), fmt(e.lambda), fmt(e.estimate.trials)};
    add_estimate(cells, e.estimate);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

ResultTable run_validate(const Config& cfg, int) {
  const auto model = model_from_config(cfg);
  const auto rep = validate_framework(model, cfg.integer("validate.trials", 10000), cfg.unsigned_integer("seed", 1),
                                      cfg.real("validate.rel_tol", 1e-9));
  ResultTable t;
  common_meta(t, cfg, model);
  if (const auto* c = model.as_classical()) t.meta.emplace_back("kernel", kernel_formula(c->kernel));
  t.meta.emplace_back("passed", flag(rep.passed()));
  t.columns = {"check", "passed", "trials", "failures", "value", "detail"};
  auto check_row = [&](const char* name, const CheckResult& c) {
    std::string detail;
    if (!c.passed()) detail = "first failure at s=" + fmt(c.worst_s) + " t=" + fmt(c.worst_t) + " r=" + fmt(c.worst_r);
    t.rows.push_back({name, flag(c.passed()), fmt(c.trials), fmt(c.failures), "", detail});
  };
  check_row("symmetry", rep.symmetry);
  check_row("distance_monotone", rep.monotone);
  check_row("range", rep.range);
  const auto& in = rep.integral;
  std::string detail = in.diagnostics;
  std::replace(detail.begin(), detail.end(), ',', ';');
  t.rows.push_back({std::string("integral_") + verdict_name(in.verdict), flag(in.verdict == IntegralVerdict::finite), "",
                    "", in.verdict == IntegralVerdict::divergent ? "inf" : fmt(in.value), detail});
  return t;
}

ResultTable run_dump(const Config& cfg, int) {
  const auto model = model_from_config(cfg);
  const double lambda = single_lambda(cfg);
  Window window = [&] {
    if (cfg.has("window.radius")) return Window::centered_ball(model.dim(), cfg.real("window.radius"));
    return Window::box(cfg.reals("window.lower"), cfg.reals("window.upper"));
  }();
  const auto graph = sample_graph(model, lambda, window, replicate_key(cfg.unsigned_integer("seed", 1), 0));
  std::ostringstream dump;
  write_graph_dump(dump, graph);
  ResultTable t;
  common_meta(t, cfg, model);
  t.meta.emplace_back("dump", "dump-graph.graph.txt");
  t.columns = {"lambda", "points", "edges", "components"};
  t.rows.push_back({fmt(lambda), std::to_string(graph.size()), std::to_string(graph.edges().size()),
                    std::to_string(graph.component_count())});
  t.attachments.emplace_back("dump-graph.graph.txt", dump.str());
  return t;
}

using Runner = ResultTable (*)(const Config&, int);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> m = {
      {"estimate", run_estimate},         {"probe-h", run_probe},          {"check-lemma1", run_lemma1},
      {"check-lemma2", run_lemma2},       {"mixing-cov", run_mixing},      {"renorm-table", run_renorm},
      {"bracket-lambda", run_bracket},    {"validate-model", run_validate}, {"dump-graph", run_dump},
  };
  return m;
}

} // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"estimate",     "probe-h",      "check-lemma1",
                                                 "check-lemma2", "mixing-cov",   "renorm-table",
                                                 "bracket-lambda", "validate-model", "dump-graph"};
  return names;
}

ResultTable run_subcommand(const std::string& subcommand, const Config& cfg, int threads) {
  const auto it = runners().find(subcommand);
  if (it == runners().end()) throw ConfigError("unknown subcommand '" + subcommand + "'");
  if (threads < 1) throw ConfigError("thread count must be >= 1");
  auto t = it->second(cfg, threads);
  t.subcommand = subcommand;
  return t;
}

std::string ResultTable::body() const {
  std::string out;
  for (const auto& [k, v] : meta) out += "# " + k + " = " + v + "\n";
  for (std::size_t k = 0; k < columns.size(); ++k) out += (k ? "," : "") + columns[k];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + row[k];
    out += "\n";
  }
  return out;
}

std::string ResultTable::text(const std::string& timestamp) const {
  return "# perco " + subcommand + " generated " + timestamp + "\n" + body();
}

namespace {

struct Parsed {
  std::string subcommand;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw IoError("malformed result file: missing column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Parsed parse_result(const std::string& text) {
  Parsed p;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# perco ", 0) != 0) {
    throw IoError("malformed result file: first line must be '# perco <subcommand> ...'");
  }
  std::istringstream head(line.substr(8));
  head >> p.subcommand;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv(line);
    if (!have_header) {
      p.columns = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != p.columns.size()) throw IoError("malformed result file: row width differs from header");
      p.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw IoError("malformed result file: no column header");
  return p;
}

double number(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw IoError("malformed result file: '" + s + "' is not a number");
  return v;
}

struct SeriesSpec {
  std::string name;      // series label, or prefix of it when by_column is set
  std::string by_column; // column whose value is appended to the label
  std::string x;
  std::string y, lo, hi;
};

std::vector<SeriesSpec> series_for(const std::string& sub) {
  if (sub == "estimate") return {{"p lambda=", "lambda", "r", "p_p", "p_lo", "p_hi"}};
  if (sub == "probe-h") return {{"L(r;c) lambda=", "lambda", "r", "p_p", "p_lo", "p_hi"}};
  if (sub == "check-lemma1") {
    return {{"lhs", "", "r", "lhs_p", "lhs_lo", "lhs_hi"}, {"rhs", "", "r", "rhs_p", "rhs_lo", "rhs_hi"}};
  }
  if (sub == "check-lemma2") {
    return {{"low lambda=", "lambda", "r", "low_p", "low_lo", "low_hi"},
            {"high lambda=", "lambda_prime", "r", "high_p", "high_lo", "high_hi"}};
  }
  if (sub == "mixing-cov") return {{"cov lambda=", "lambda", "r", "cov", "cov_lo", "cov_hi"}};
  if (sub == "renorm-table") {
    return {{"C(10r)", "", "r", "lhs_p", "lhs_lo", "lhs_hi"},
            {"G(r)", "", "r", "g_p", "g_lo", "g_hi"},
            {"C(r)", "", "r", "c_p", "c_lo", "c_hi"},
            {"F(r)", "", "r", "f_p", "f_lo", "f_hi"}};
  }
  if (sub == "bracket-lambda") return {{"C(r_probe)", "", "lambda", "p_p", "p_lo", "p_hi"}};
  if (sub == "validate-model" || sub == "dump-graph") return {};
  throw IoError("malformed result file: unknown subcommand '" + sub + "'");
}

} // namespace

std::string plot_data(const std::string& result_text) {
  const auto p = parse_result(result_text);
  struct Point {
    double x, y, lo, hi;
  };
  std::vector<std::pair<std::string, std::vector<Point>>> series;
  for (const auto& s : series_for(p.subcommand)) {
    const auto x = p.col(s.x), y = p.col(s.y), lo = p.col(s.lo), hi = p.col(s.hi);
    for (const auto& row : p.rows) {
      const std::string label = s.by_column.empty() ? s.name : s.name + row[p.col(s.by_column)];
      auto it = std::find_if(series.begin(), series.end(), [&](const auto& e) { return e.first == label; });
      if (it == series.end()) it = series.insert(series.end(), {label, {}});
      it->second.push_back({number(row[x]), number(row[y]), number(row[lo]), number(row[hi])});
    }
  }
  std::string out = "series,x,y,y_lo,y_hi\n";
  for (auto& [label, pts] : series) {
    std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    for (const auto& pt : pts) {
      out += label + "," + fmt(pt.x) + "," + fmt(pt.y) + "," + fmt(pt.lo) + "," + fmt(pt.hi) + "\n";
    }
  }
  return out;
}

} // namespace perco
