#include "renorm.hpp"

#include "coupling.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace perco {

RenormTable renorm_table(const ModelSpec& model, double lambda, const std::vector<double>& scales, std::int64_t n,
                         std::uint64_t seed, const RunOptions& opt, const RenormOptions& ropt) {
  if (n < 1) throw ConfigError("number of trials must be >= 1");
  if (scales.empty()) throw ConfigError("renorm-table needs at least one scale");
  if (!(ropt.constant > 0.0)) throw ConfigError("renormalization constant must be positive");
  const bool mixing = ropt.c_mix.has_value() || ropt.zeta.has_value();
  if (!model.is_pairwise() && !(ropt.c_mix && ropt.zeta)) {
    throw ConfigError("renorm-table on a generalized model needs the mixing parameters c_mix and zeta");
  }
  if (mixing && !(ropt.c_mix && ropt.zeta)) throw ConfigError("give both c_mix and zeta, or neither");

  RenormTable table;
  table.lambda = lambda;
  table.options = ropt;
  table.window_factor = 21.0 + opt.window_margin;
  for (std::size_t s = 0; s < scales.size(); ++s) {
    const double r = scales[s];
    const Window window = Window::centered_ball(model.dim(), table.window_factor * r);
    struct Outcome {
      char lhs = 0, g = 0, c = 0, f = 0, bad = 0;
    };
    const auto res = run_replicates<Outcome>(static_cast<std::size_t>(n), opt.threads, [&](std::size_t i) {
      const auto graph = sample_graph(model, lambda, window, replicate_key(hash_combine(seed, 0x2E, s), i), opt.build);
      Outcome o;
      o.lhs = crossing_event(graph, 10.0 * r);
      o.g = local_crossing_event(graph, r);
      o.c = crossing_event(graph, r);
      o.f = f_event(graph, r);
      o.bad = (o.g && !o.c) || (long_edge_event(graph, r, 3.0) && !o.c);
      return o;
    });
    std::int64_t lhs = 0, g = 0, c = 0, f = 0;
    RenormRow row;
    row.r = r;
    for (const auto& o : res) {
      lhs += o.lhs;
      g += o.g;
      c += o.c;
      f += o.f;
      row.inclusion_failures += o.bad;
    }
    row.lhs = wilson_estimate(lhs, n, opt.level);
    row.g_est = wilson_estimate(g, n, opt.level);
    row.c_est = wilson_estimate(c, n, opt.level);
    row.f_est = wilson_estimate(f, n, opt.level);
    // With lhs <= f every C >= 0 satisfies the inequality, even when c = 0.
    const double excess = row.lhs.p - row.f_est.p;
    if (excess <= 0.0) {
      row.fitted_c = 0.0;
    } else if (row.c_est.p > 0.0) {
      row.fitted_c = excess / (row.c_est.p * row.c_est.p);
    }
    row.bound = ropt.constant * row.c_est.p * row.c_est.p + row.f_est.p;
    if (mixing) row.bound += ropt.constant * *ropt.c_mix * lambda * std::pow(r, -*ropt.zeta);
    table.rows.push_back(row);
  }

  std::vector<double> fitted;
  for (const auto& row : table.rows)
    if (row.fitted_c) fitted.push_back(*row.fitted_c);
  if (fitted.size() >= 2) {
    const auto [mn, mx] = std::minmax_element(fitted.begin(), fitted.end());
    table.fitted_stable = *mx == 0.0 || (*mn > 0.0 && *mx <= 2.0 * *mn);
  }
  table.note = model.is_pairwise() ? "classical model: no mixing term" : "mixing term from the supplied c_mix and zeta";
  return table;
}

double default_probe_scale(int dim, double lambda_max, double budget, double eps) {
  if (!(lambda_max > 0.0)) throw ConfigError("lambda_max must be positive");
  return std::pow(budget / (lambda_max * unit_ball_volume(dim)), 1.0 / dim) / (2.0 + eps);
}

LambdaBracket bracket_lambda_hat(const ModelSpec& model, double r_probe, double threshold, double lambda_min,
                                 double lambda_max, std::int64_t n, std::uint64_t seed, const RunOptions& opt,
                                 int max_iterations) {
  if (!model.is_pairwise()) {
    throw ContractError("bracket-lambda needs a Boolean or classical model (monotone in lambda under thinning)");
  }
  if (!(lambda_min >= 0.0) || !(lambda_max > lambda_min) || !std::isfinite(lambda_max)) {
    throw ConfigError("bracket-lambda needs 0 <= lambda_min < lambda_max");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0,1)");
  if (n < 1) throw ConfigError("number of trials must be >= 1");
  if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");

  const auto event = EventSpec::crossing(r_probe);
  const Window window = event_window(model.dim(), event, opt.window_margin);
  // every replicate carries one PPP(lambda_max) and retention variates; the
  // cloud at lambda is the points with V < lambda / lambda_max
  auto outcomes = [&](double lambda) {
    return run_replicates<char>(static_cast<std::size_t>(n), opt.threads, [&](std::size_t i) -> char {
      const auto key = replicate_key(seed, i);
      const auto full = sample_ppp(window, lambda_max, stream_key(key, Stream::cloud));
      const auto cloud = thin_cloud(full, lambda / lambda_max, stream_key(key, Stream::retention), lambda);
      const auto graph = build_graph(cloud, model, stream_key(key, Stream::edges), opt.build);
      return crossing_event(graph, r_probe) ? 1 : 0;
    });
  };

  LambdaBracket out;
  out.r_probe = r_probe;
  out.threshold = threshold;
  std::vector<std::pair<double, std::vector<char>>> seen;
  auto evaluate = [&](double lambda) {
    auto o = outcomes(lambda);
    const auto est = wilson_estimate(std::count(o.begin(), o.end(), 1), n, opt.level);
    out.evaluations.push_back({lambda, est});
    seen.emplace_back(lambda, std::move(o));
    // nested thinning makes each replicate nondecreasing in lambda
    std::sort(seen.begin(), seen.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k + 1 < seen.size(); ++k) {
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        if (seen[k].second[i] > seen[k + 1].second[i]) {
          throw ConsistencyError("crossing indicator decreased in lambda on a coupled replicate; coupling is broken");
        }
      }
    }
    return est;
  };

  const auto top = evaluate(lambda_max);
  if (top.p < threshold) {
    out.never_crosses = true;
    out.lo = out.hi = lambda_max;
  } else {
    const auto bottom = evaluate(lambda_min);
    if (bottom.p >= threshold) {
      out.below_lower_bound = true;
      out.lo = out.hi = lambda_min;
    } else {
      double lo = lambda_min, hi = lambda_max;
      for (int k = 0; k < max_iterations; ++k) {
        const double mid = 0.5 * (lo + hi);
        const auto est = evaluate(mid);
        ++out.iterations;
        if (est.lo <= threshold && threshold <= est.hi) {
          out.ambiguous_stop = true;
          break;
        }
        (est.p < threshold ? lo : hi) = mid;
      }
      out.lo = lo;
      out.hi = hi;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "finite-scale proxy at r = %.9g", r_probe);
  out.note = buf;
  return out;
}

} // namespace perco
