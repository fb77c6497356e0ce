#include "dcslab/poisson_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "dcslab/errors.hpp"
#include "dcslab/quadrature.hpp"
#include "dcslab/rng.hpp"

#include <json.hpp>

namespace dcs::coupling {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSlackTol = 1e-12;
constexpr double kNormTol = 1e-4;

void check_oracle_normalization(const DensityOracle& oracle,
                                std::span<const double> history) {
  auto f = [&](double x) { return oracle.g(history, x); };
  const double mass = quad::integrate(f, 1e-9, 1.0 - 1e-9, 1e-6).value;
  if (std::abs(mass - 1.0) > kNormTol) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "oracle '%s' normalization defect %.3e exceeds %.0e",
                  oracle.id.c_str(), std::abs(mass - 1.0), kNormTol);
    throw std::invalid_argument(buf);
  }
}

}  // namespace

PoissonStrip sample_strip(double height, std::uint64_t seed) {
  if (!(height > 0.0)) throw std::invalid_argument("strip height must be > 0");
  PoissonStrip s;
  s.height = height;
  s.seed = seed;
  rng::Stream stream(rng::mix(seed, 0x706f6973736f6eULL));
  const long n = stream.poisson(height);
  s.points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    StripPoint p;
    p.y = stream.uniform_open();
    p.h = stream.uniform_open() * height;
    s.points.push_back(p);
  }
  return s;
}

DensityOracle uniform_oracle() {
  return {"iid-uniform", [](std::span<const double>, double) { return 1.0; }};
}

DensityOracle iid_oracle(std::string id, std::function<double(double)> f) {
  return {std::move(id),
          [f = std::move(f)](std::span<const double>, double x) { return f(x); }};
}

DensityOracle cosine_markov_oracle() {
  return {"cosine-markov", [](std::span<const double> history, double x) {
            if (history.empty()) return 1.0;
            return 1.0 + std::cos(kTwoPi * (x - history.back()));
          }};
}

std::vector<double> CouplingTrace::history(std::size_t upto) const {
  std::vector<double> h;
  h.reserve(upto);
  for (std::size_t i = 0; i < upto && i < steps.size(); ++i)
    h.push_back(steps[i].y);
  return h;
}

double graph_height(const CouplingTrace& trace, const DensityOracle& oracle,
                    double y, std::size_t upto) {
  double s = 0.0;
  std::vector<double> hist;
  hist.reserve(upto);
  for (std::size_t k = 0; k < upto && k < trace.steps.size(); ++k) {
    s += trace.steps[k].t * oracle.g(hist, y);
    hist.push_back(trace.steps[k].y);
  }
  return s;
}

ExtractResult extract_next(const PoissonStrip& strip,
                           const DensityOracle& oracle, CouplingTrace& trace) {
  if (trace.consumed.size() != strip.points.size())
    trace.consumed.assign(strip.points.size(), 0);

  const std::vector<double> hist = trace.history(trace.steps.size());
  ExtractResult best;
  double best_t = std::numeric_limits<double>::infinity();
  for (std::size_t id = 0; id < strip.points.size(); ++id) {
    if (trace.consumed[id]) continue;
    const StripPoint& p = strip.points[id];
    const double slack = p.h - graph_height(trace, oracle, p.y, trace.steps.size());
    if (slack < -kSlackTol * std::max(1.0, p.h))
      throw InternalError("unconsumed point below the accumulated graph");
    const double g = oracle.g(hist, p.y);
    if (!(g > 0.0)) continue;  // t = +infinity where the density vanishes
    const double t = std::max(slack, 0.0) / g;
    if (t < best_t) {  // ties broken by smallest point id
      best_t = t;
      best = {false, t, p.y, id};
    }
  }
  if (best.exhausted) return best;
  trace.consumed[best.point_id] = 1;
  trace.steps.push_back(
      {trace.steps.size() + 1, best.t, best.y, best.point_id});
  return best;
}

namespace {

void finalize_trace(const PoissonStrip& strip, const DensityOracle& oracle,
                    CouplingTrace& trace) {
  // L* = min_y S_n(y), scanned on a fine grid plus the point abscissas
  double level = std::numeric_limits<double>::infinity();
  const int grid = 512;
  for (int i = 1; i < grid; ++i)
    level = std::min(level, graph_height(trace, oracle,
                                         static_cast<double>(i) / grid,
                                         trace.steps.size()));
  for (const StripPoint& p : strip.points)
    level = std::min(level,
                     graph_height(trace, oracle, p.y, trace.steps.size()));
  trace.level = std::isfinite(level) ? level : 0.0;
  trace.unconsumed_count = 0;
  for (char c : trace.consumed)
    if (!c) ++trace.unconsumed_count;
}

}  // namespace

CouplingTrace run_coupling_on(const PoissonStrip& strip,
                              const DensityOracle& oracle,
                              std::size_t n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  check_oracle_normalization(oracle, {});
  CouplingTrace trace;
  trace.seed = strip.seed;
  trace.height = strip.height;
  trace.oracle_id = oracle.id;
  trace.consumed.assign(strip.points.size(), 0);
  while (trace.steps.size() < n_max) {
    if (extract_next(strip, oracle, trace).exhausted) break;
  }
  finalize_trace(strip, oracle, trace);
  return trace;
}

CouplingTrace run_coupling(const DensityOracle& oracle, double height,
                           std::size_t n_max, std::uint64_t seed) {
  return run_coupling_on(sample_strip(height, seed), oracle, n_max);
}

DivergenceReport divergence_diagnostics(
    const std::vector<std::vector<double>>& samples,
    std::vector<double> eps_grid) {
  if (samples.empty() || samples.front().empty())
    throw std::invalid_argument("empty sample matrix");
  const std::size_t n_steps = samples.front().size();
  for (const auto& row : samples) {
    if (row.size() != n_steps)
      throw std::invalid_argument("sample matrix must be rectangular");
    for (double v : row)
      if (v < 0.0) throw std::domain_error("Y-values must be nonnegative");
  }
  std::sort(eps_grid.begin(), eps_grid.end());

  DivergenceReport rep;
  rep.eps_grid = eps_grid;
  rep.per_n_profile.assign(n_steps,
                           std::vector<double>(eps_grid.size(), 0.0));
  rep.sup_profile.assign(eps_grid.size(), 0.0);
  rep.mean_partial_sums.assign(n_steps, 0.0);

  const double r = static_cast<double>(samples.size());
  for (std::size_t n = 0; n < n_steps; ++n) {
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
      std::size_t c = 0;
      for (const auto& row : samples)
        if (row[n] > 0.0 && row[n] < eps_grid[e]) ++c;
      rep.per_n_profile[n][e] = static_cast<double>(c) / r;
      rep.sup_profile[e] = std::max(rep.sup_profile[e], rep.per_n_profile[n][e]);
    }
    double mean = 0.0;
    for (const auto& row : samples) mean += row[n];
    rep.mean_partial_sums[n] =
        mean / r + (n > 0 ? rep.mean_partial_sums[n - 1] : 0.0);
  }

  rep.profile_vanishing =
      rep.sup_profile.front() <=
      std::max(0.05, 0.25 * rep.sup_profile.back());
  // growth without visible saturation: late increments comparable to early
  const double total = rep.mean_partial_sums.back();
  const std::size_t half = n_steps / 2;
  const double early = half > 0 ? rep.mean_partial_sums[half - 1] : 0.0;
  const double late = total - early;
  rep.sums_diverging =
      total > 0.0 && (n_steps < 2 || late > 0.25 * early);
  return rep;
}

void write_trace_json(const CouplingTrace& trace, const PoissonStrip& strip,
                      std::ostream& os) {
  nlohmann::ordered_json j;
  j["seed"] = trace.seed;
  j["H"] = trace.height;
  j["oracle"] = trace.oracle_id;
  j["n_steps"] = trace.steps.size();
  j["L_star"] = trace.level;
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& s : trace.steps)
    j["steps"].push_back(
        {{"n", s.n}, {"T", s.t}, {"Y", s.y}, {"point_id", s.point_id}});
  j["unconsumed"] = nlohmann::ordered_json::array();
  for (std::size_t id = 0; id < strip.points.size(); ++id)
    if (id < trace.consumed.size() && !trace.consumed[id])
      j["unconsumed"].push_back(
          {{"y", strip.points[id].y}, {"h", strip.points[id].h}});
  os << j.dump(2) << '\n';
}

void write_trace_csv(const CouplingTrace& trace, std::ostream& os) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# seed=%llu H=%.17g oracle=%s L_star=%.17g\n",
                static_cast<unsigned long long>(trace.seed), trace.height,
                trace.oracle_id.c_str(), trace.level);
  os << buf << "n,T,Y,point_id\n";
  for (const auto& s : trace.steps) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%zu\n", s.n, s.t, s.y,
                  s.point_id);
    os << buf;
  }
}

}  // namespace dcs::coupling
