#include "errors.hpp"
#include "runner.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace perco;

namespace {

const std::string boolean_model = "model.variant = boolean\nmodel.radius.value = 0.5\n";

std::string column(const ResultTable& t, std::size_t row, const std::string& name) {
  for (std::size_t k = 0; k < t.columns.size(); ++k)
    if (t.columns[k] == name) return t.rows.at(row)[k];
  FAIL("no column " << name);
  return {};
}

std::string meta(const ResultTable& t, const std::string& key) {
  for (const auto& [k, v] : t.meta)
    if (k == key) return v;
  return {};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

} // namespace

TEST_CASE("validate-model reports pi for the unit disc") {
  const auto cfg = Config::parse("model.variant = classical\nmodel.kernel = plain\n");
  const auto t = run_subcommand("validate-model", cfg);
  CHECK(meta(t, "passed") == "true");
  REQUIRE(t.rows.size() == 4);
  CHECK(column(t, 3, "check") == "integral_finite");
  const double v = std::stod(column(t, 3, "value"));
  CHECK(std::abs(v - std::numbers::pi) <= 1e-6 * std::numbers::pi);
}

TEST_CASE("estimate at zero intensity") {
  const auto cfg = Config::parse(boolean_model + "lambda = 0\nr = 1\nevent.kind = C\ntrials = 25\n");
  const auto t = run_subcommand("estimate", cfg);
  REQUIRE(t.rows.size() == 1);
  CHECK(column(t, 0, "p_p") == "0");
  CHECK(column(t, 0, "trials") == "25");
  CHECK(column(t, 0, "event") == "C(1)");
}

TEST_CASE("probe-h on bounded radii above 2 R_max") {
  const auto cfg =
      Config::parse(boolean_model + "lambda = 1\ngrid.r_min = 1.5\ngrid.ratio = 2\ngrid.count = 4\ntrials = 100\n");
  const auto t = run_subcommand("probe-h", cfg);
  CHECK(meta(t, "verdict") == "vanishing");
  CHECK(meta(t, "all_zero") == "true");
  REQUIRE(t.rows.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(column(t, k, "p_hits") == "0");
  CHECK(column(t, 3, "r") == "12");

  const auto plot = lines(plot_data(t.text("now")));
  REQUIRE(plot.size() == 5);
  CHECK(plot[0] == "series,x,y,y_lo,y_hi");
  double prev = 0;
  for (std::size_t k = 1; k < plot.size(); ++k) {
    const double x = std::stod(plot[k].substr(plot[k].find(',') + 1));
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("renorm table plots one series per event kind") {
  const auto cfg = Config::parse(boolean_model + "lambda = 1\nr = 0.5, 1\ntrials = 20\n");
  const auto t = run_subcommand("renorm-table", cfg);
  const auto plot = lines(plot_data(t.text("now")));
  REQUIRE(plot.size() == 1 + 4 * 2);
  std::vector<std::string> series;
  for (std::size_t k = 1; k < plot.size(); ++k) {
    const auto name = plot[k].substr(0, plot[k].find(','));
    if (series.empty() || series.back() != name) series.push_back(name);
  }
  CHECK(series == std::vector<std::string>{"C(10r)", "G(r)", "C(r)", "F(r)"});
}

TEST_CASE("plot data edge cases") {
  const auto t = run_subcommand("validate-model", Config::parse(boolean_model));
  CHECK(plot_data(t.text("now")) == "series,x,y,y_lo,y_hi\n");
  CHECK(plot_data("# perco estimate generated x\nlambda,event,r,trials,p_hits,p_p,p_lo,p_hi\n") ==
        "series,x,y,y_lo,y_hi\n");
  CHECK_THROWS_AS(plot_data(""), IoError);
  CHECK_THROWS_AS(plot_data("lambda,r\n1,2\n"), IoError);
  CHECK_THROWS_AS(plot_data("# perco estimate generated x\nlambda,r\n1,2\n"), IoError);
  CHECK_THROWS_AS(plot_data("# perco estimate generated x\nlambda,event,r,trials,p_hits,p_p,p_lo,p_hi\n1,L,x,1,0,0,0,1\n"),
                  IoError);
  CHECK_THROWS_AS(plot_data("# perco unknown generated x\na\n"), IoError);
}

TEST_CASE("result text layout") {
  const auto cfg = Config::parse(boolean_model + "lambda = 0.5\nr = 1\nevent.kind = C\ntrials = 10\n");
  const auto t = run_subcommand("estimate", cfg);
  const auto text = t.text("2026-01-01T00:00:00Z");
  CHECK(text.rfind("# perco estimate generated 2026-01-01T00:00:00Z\n", 0) == 0);
  CHECK(text.substr(text.find('\n') + 1) == t.body());
  CHECK(t.body().find("\nlambda,event,r,trials,p_hits,p_p,p_lo,p_hi,window_radius,truncation_bound\n") !=
        std::string::npos);
  CHECK(format_real(1.0 / 3.0) == "0.333333333");
}

TEST_CASE("every subcommand is deterministic under 1, 2 and 8 threads") {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"estimate", boolean_model + "lambda = 0.8, 1.2\nr = 0.5, 1\nevent.kind = G\ntrials = 60\nseed = 3\n"},
      {"probe-h", "model.variant = boolean\nmodel.radius.law = pareto\nmodel.radius.shape = 1.5\nmodel.radius.scale = 0.2\n"
                  "lambda = 0.5\ngrid.r_min = 0.5\ngrid.r_max = 4\ngrid.count = 4\ntrials = 60\n"},
      {"check-lemma1", boolean_model + "lambda = 1\nr = 0.5\nevent.kind = L\nevent.c = 1\nevent.c_prime = 2\ntrials = 60\n"},
      {"check-lemma2", "model.variant = classical\nmodel.kernel = product\nmodel.tau = 3\nlambda = 0.5\nlambda_prime = 1\n"
                       "r = 1\ntrials = 60\n"},
      {"mixing-cov", "model.variant = classical\nlambda = 1\nr = 0.5\ntrials = 1000\n"},
      {"renorm-table", boolean_model + "lambda = 1\nr = 0.25, 0.5\ntrials = 40\n"},
      {"bracket-lambda", boolean_model + "bracket.lambda_max = 3\nbracket.r_probe = 1.5\nbracket.max_iterations = 3\n"
                         "trials = 40\n"},
      {"validate-model", "model.variant = classical\nmodel.kernel = sum\nmodel.tau = 2.5\nvalidate.trials = 500\n"},
      {"dump-graph", "model.variant = generalized\nlambda = 1\nwindow.lower = 0, 0\nwindow.upper = 5, 4\n"},
  };
  CHECK(runs.size() == subcommand_names().size());
  for (const auto& [sub, text] : runs) {
    CAPTURE(sub);
    const auto cfg = Config::parse(text);
    const auto one = run_subcommand(sub, cfg, 1);
    const auto two = run_subcommand(sub, cfg, 2);
    const auto eight = run_subcommand(sub, cfg, 8);
    CHECK(one.body() == two.body());
    CHECK(one.body() == eight.body());
    CHECK(one.attachments == eight.attachments);
    CHECK_FALSE(one.rows.empty());
    CHECK_NOTHROW(plot_data(one.text("now")));
  }
}

TEST_CASE("dump-graph attaches the dump") {
  const auto t = run_subcommand("dump-graph", Config::parse(boolean_model + "lambda = 2\nwindow.radius = 3\n"));
  REQUIRE(t.attachments.size() == 1);
  CHECK(t.attachments[0].second.rfind("# perco graph dump: dim 2", 0) == 0);
}

TEST_CASE("configuration problems surface before sampling") {
  CHECK_THROWS_AS(run_subcommand("nope", Config::parse(boolean_model)), ConfigError);
  CHECK_THROWS_AS(run_subcommand("estimate", Config::parse(boolean_model + "r = 1\n")), ConfigError);
  CHECK_THROWS_AS(run_subcommand("probe-h", Config::parse(boolean_model + "lambda = 1, 2\ngrid.r_min = 1\n")), ConfigError);
  CHECK_THROWS_AS(run_subcommand("estimate", Config::parse(boolean_model + "lambda = 1\nr = 1\ntrials = 0\n")), ConfigError);
  CHECK_THROWS_AS(run_subcommand("estimate", Config::parse(boolean_model + "lambda = 1\nr = 1\nlevel = 1.5\n")), ConfigError);
  CHECK_THROWS_AS(run_subcommand("mixing-cov", Config::parse(boolean_model + "lambda = 1\nr = 1\nmixing.x = 7\n")), ConfigError);
  CHECK_THROWS_AS(run_subcommand("estimate", Config::parse(boolean_model + "lambda = 1000\nr = 100\nevent.kind = C\n")), ResourceError);
}
