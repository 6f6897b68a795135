#include "estimators.hpp"

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numeric>

namespace perco {

namespace {

void check_trials(std::int64_t n) {
  if (n < 1) throw ConfigError("number of trials must be >= 1");
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("intensity must be >= 0");
}

constexpr double campbell_tol = 1e-6;

} // namespace

GeomGraph sample_graph(const ModelSpec& model, double lambda, const Window& window, std::uint64_t replicate,
                       const BuildOptions& build) {
  const auto cloud = sample_ppp(window, lambda, stream_key(replicate, Stream::cloud));
  return build_graph(cloud, model, stream_key(replicate, Stream::edges), build);
}

std::optional<CampbellValue> truncation_bound(const ModelSpec& model, double lambda, const EventSpec& event,
                                              double window_radius) {
  if (!model.is_pairwise()) return std::nullopt;
  const double r = event.r;
  switch (event.kind) {
  case EventKind::long_edge:
    return campbell_escaping_pairs(model, lambda, r, window_radius, event.c * r, campbell_tol);
  case EventKind::far_edge: return campbell_escaping_pairs(model, lambda, 20.0 * r, window_radius, r, campbell_tol);
  case EventKind::crossing:
    // a path that leaves the window before reaching B(0,2r)^c inside it
    // leaves from a vertex in B(0, 2r)
    return campbell_escaping_pairs(model, lambda, 2.0 * r, window_radius, 0.0, campbell_tol);
  case EventKind::local_crossing: return CampbellValue{};
  }
  return std::nullopt;
}

EventEstimate estimate_event(const ModelSpec& model, double lambda, const EventSpec& event, std::int64_t n,
                             std::uint64_t seed, const RunOptions& opt) {
  check_trials(n);
  check_lambda(lambda);
  const Window window = event_window(model.dim(), event, opt.window_margin);
  const auto hits = run_replicates<char>(static_cast<std::size_t>(n), opt.threads, [&](std::size_t i) -> char {
    const auto graph = sample_graph(model, lambda, window, replicate_key(seed, i), opt.build);
    return evaluate_event(graph, event) ? 1 : 0;
  });
  EventEstimate out;
  out.event = event;
  out.window_radius = window.radius();
  out.estimate = wilson_estimate(std::count(hits.begin(), hits.end(), 1), n, opt.level);
  out.truncation = truncation_bound(model, lambda, event, window.radius());
  return out;
}

const char* trend_verdict_name(TrendVerdict v) noexcept {
  switch (v) {
  case TrendVerdict::vanishing: return "vanishing";
  case TrendVerdict::persistent: return "persistent";
  case TrendVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<double> geometric_grid(double r_min, double r_max, int k) {
  if (!(r_min > 0.0) || !(r_max >= r_min) || !std::isfinite(r_max)) throw ConfigError("r-grid needs 0 < r_min <= r_max");
  if (k < 1) throw ConfigError("r-grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    out[i] = k == 1 ? r_min : r_min * std::pow(r_max / r_min, static_cast<double>(i) / (k - 1));
  }
  out.back() = r_max;
  if (k == 1) out[0] = r_min;
  return out;
}

TrendReport probe_H(const ModelSpec& model, double lambda, double c, double r_min, double r_max, int k,
                    std::int64_t n, std::uint64_t seed, const RunOptions& opt, const ProbeOptions& popt) {
  if (k < 4) throw ConfigError("probe-h needs a grid of at least 4 scales");
  if (!(popt.p_min >= 0.0 && popt.p_min < 1.0)) throw ConfigError("persistence floor p_min must lie in [0,1)");
  if (!(popt.decrease_factor >= 1.0)) throw ConfigError("decrease factor must be >= 1");
  TrendReport rep;
  rep.lambda = lambda;
  rep.c = c;
  rep.options = popt;
  const auto grid = geometric_grid(r_min, r_max, k);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto ev = EventSpec::long_edge(grid[g], c);
    const auto est = estimate_event(model, lambda, ev, n, hash_combine(seed, 0x9D, g), opt);
    TrendPoint pt;
    pt.r = grid[g];
    pt.estimate = est.estimate;
    pt.truncation = est.truncation;
    if (model.is_pairwise()) pt.campbell = campbell_long_edges(model, lambda, grid[g], c, campbell_tol);
    rep.points.push_back(pt);
  }

  // log-log slope over nonzero estimates
  std::vector<double> lx, ly;
  for (const auto& pt : rep.points) {
    if (pt.estimate.hits > 0) {
      lx.push_back(std::log(pt.r));
      ly.push_back(std::log(pt.estimate.p));
    }
  }
  if (lx.size() >= 3) {
    const double m = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    rep.slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double res = ly[i] - my - rep.slope * (lx[i] - mx);
      ssr += res * res;
    }
    const double se = std::sqrt(ssr / (m - 2.0) / sxx);
    const double t = student_quantile(opt.level, m - 2.0);
    rep.slope_defined = true;
    rep.slope_lo = rep.slope - t * se;
    rep.slope_hi = rep.slope + t * se;
  }

  rep.all_zero = std::all_of(rep.points.begin(), rep.points.end(), [](const auto& p) { return p.estimate.hits == 0; });
  const std::size_t tail = (rep.points.size() + 2) / 3;
  const bool persistent = std::all_of(rep.points.end() - static_cast<std::ptrdiff_t>(tail), rep.points.end(),
                                      [&](const auto& p) { return p.estimate.lo > popt.p_min; });
  const double first = rep.points.front().estimate.p;
  const double last = rep.points.back().estimate.p;
  if (persistent) {
    rep.verdict = TrendVerdict::persistent;
  } else if (rep.all_zero) {
    rep.verdict = TrendVerdict::vanishing;
    rep.small_mean_caveat =
        model.is_pairwise() && std::all_of(rep.points.begin(), rep.points.end(), [&](const auto& p) {
          return p.campbell && p.campbell->value < 0.1 / static_cast<double>(n);
        });
  } else if (rep.slope_defined && rep.slope_hi < 0.0 && last <= first / popt.decrease_factor) {
    rep.verdict = TrendVerdict::vanishing;
  } else {
    rep.verdict = TrendVerdict::inconclusive;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "finite-scale proxy for H(lambda; c) on r in [%.9g; %.9g]; not a statement about the limit r -> infinity",
                r_min, r_max);
  rep.note = buf;
  return rep;
}

Covering covering_number(double q, int dim) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw ConfigError("covering ratio q must be >= 1");
  if (dim < 1 || dim > max_dimension) throw ConfigError("dimension must be in [1, 8]");
  Covering cov;
  cov.dim = dim;
  cov.q = q;
  const auto d = static_cast<std::size_t>(dim);
  if (q <= 1.0) {
    cov.centers.emplace_back(d, 0.0);
    return cov;
  }
  const int m = static_cast<int>(std::ceil(q * std::sqrt(static_cast<double>(dim)) - 1e-12));
  const double h = 2.0 * q / m;
  std::vector<int> idx(d, 0);
  for (;;) {
    std::vector<double> c(d);
    double gap2 = 0.0; // squared distance from the origin to the cell
    for (std::size_t k = 0; k < d; ++k) {
      const double lo = -q + idx[k] * h;
      c[k] = lo + 0.5 * h;
      const double g = std::max({0.0, lo, -(lo + h)});
      gap2 += g * g;
    }
    if (gap2 < q * q) cov.centers.push_back(std::move(c));
    std::size_t k = d;
    for (;;) {
      if (k == 0) return cov;
      --k;
      if (++idx[k] < m) break;
      idx[k] = 0;
    }
  }
}

std::int64_t uncovered_samples(const Covering& cover, std::int64_t samples, std::uint64_t seed) {
  CounterRng rng(seed);
  const auto d = static_cast<std::size_t>(cover.dim);
  std::vector<double> p(d);
  std::int64_t bad = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    do {
      for (auto& x : p) x = cover.q * (2.0 * rng.uniform() - 1.0);
    } while (norm(p) >= cover.q);
    const bool ok = std::any_of(cover.centers.begin(), cover.centers.end(),
                                [&](const auto& c) { return distance(p, c) <= 1.0 + 1e-12; });
    bad += !ok;
  }
  return bad;
}

Lemma1Report check_lemma1(const ModelSpec& model, double lambda, double r, double c, double c_prime, std::int64_t n,
                          std::uint64_t seed, const RunOptions& opt) {
  check_trials(n);
  check_lambda(lambda);
  if (!(c > 0.0) || !(c_prime >= c)) throw ConfigError("check-lemma1 needs 0 < c <= c'");
  Lemma1Report rep;
  rep.r = r;
  rep.c = c;
  rep.c_prime = c_prime;
  const auto cover = covering_number(c_prime / c, model.dim());
  rep.covering = cover.count();
  const double big = c_prime * r / c;
  const auto rhs_event = EventSpec::long_edge(big, c);
  const Window window = event_window(model.dim(), rhs_event, opt.window_margin);
  rep.window_radius = window.radius();

  struct Outcome {
    char lhs = 0, rhs = 0, violation = 0;
  };
  const auto res = run_replicates<Outcome>(static_cast<std::size_t>(n), opt.threads, [&](std::size_t i) {
    const auto graph = sample_graph(model, lambda, window, replicate_key(seed, i), opt.build);
    Outcome o;
    o.lhs = long_edge_event(graph, r, c_prime);
    o.rhs = long_edge_event(graph, big, c);
    if (o.rhs) {
      std::vector<double> z(static_cast<std::size_t>(model.dim()));
      bool covered = false;
      for (const auto& ctr : cover.centers) {
        for (std::size_t k = 0; k < z.size(); ++k) z[k] = r * ctr[k];
        if (has_long_edge(graph, z, r, c_prime * r)) {
          covered = true;
          break;
        }
      }
      o.violation = !covered;
    }
    return o;
  });
  std::int64_t lhs = 0, rhs = 0;
  for (const auto& o : res) {
    lhs += o.lhs;
    rhs += o.rhs;
    rep.exact_violations += o.violation;
  }
  rep.lhs = wilson_estimate(lhs, n, opt.level);
  rep.rhs = wilson_estimate(rhs, n, opt.level);
  rep.not_violated = rep.exact_violations == 0 && static_cast<double>(rep.covering) * rep.lhs.hi >= rep.rhs.lo;
  return rep;
}

MixingEstimate estimate_mixing_cov(const ModelSpec& model, double lambda, double r, const std::vector<double>& x,
                                   std::int64_t n, std::uint64_t seed, const RunOptions& opt) {
  check_lambda(lambda);
  if (n < 1000) throw ConfigError("mixing covariance needs n >= 1000 replicates");
  if (!(r > 0.0)) throw ConfigError("scale r must be positive");
  if (static_cast<int>(x.size()) != model.dim()) throw ConfigError("centre x has the wrong dimension");
  const double sep = norm(x);
  if (!(sep > 6.0 * r)) throw ConfigError("mixing covariance needs |x| > 6r");

  const double reach = (3.0 + opt.window_margin) * r;
  std::vector<double> lo(x.size()), hi(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    lo[k] = std::min(0.0, x[k]) - reach;
    hi[k] = std::max(0.0, x[k]) + reach;
  }
  const Window window = Window::box(lo, hi);

  struct Pair {
    char a = 0, b = 0;
  };
  const auto res = run_replicates<Pair>(static_cast<std::size_t>(n), opt.threads, [&](std::size_t i) {
    const auto graph = sample_graph(model, lambda, window, replicate_key(seed, i), opt.build);
    return Pair{static_cast<char>(local_crossing_event(graph, r)), static_cast<char>(local_crossing_event(graph, r, x))};
  });

  MixingEstimate out;
  out.trials = n;
  out.level = opt.level;
  out.separation = sep / r;
  const double m = static_cast<double>(n);
  double sa = 0.0, sb = 0.0;
  for (const auto& p : res) {
    sa += p.a;
    sb += p.b;
  }
  out.p_a = sa / m;
  out.p_b = sb / m;
  double sum = 0.0, sum2 = 0.0;
  for (const auto& p : res) {
    const double z = (p.a - out.p_a) * (p.b - out.p_b);
    sum += z;
    sum2 += z * z;
  }
  out.cov = sum / (m - 1.0);
  const double mean = sum / m;
  const double var = std::max(0.0, (sum2 - m * mean * mean) / (m - 1.0));
  out.se = std::sqrt(var / m);
  const double z = normal_quantile(opt.level);
  out.lo = out.cov - z * out.se;
  out.hi = out.cov + z * out.se;
  return out;
}

} // namespace perco
