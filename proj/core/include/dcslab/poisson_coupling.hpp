#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

// Exponential-racing extraction from a Poisson point set on the strip
// (0,1) x (0,H): step n consumes the point minimizing
// (h - S_{n-1}(y)) / g_n(history, y), which yields Exp(1) race times and
// locations with density g_n. The projection of the consumed set does not
// depend on the oracle.
namespace dcs::coupling {

struct StripPoint {
  double y = 0.0;  // in (0,1)
  double h = 0.0;  // in (0,H)
};

struct PoissonStrip {
  double height = 0.0;
  std::uint64_t seed = 0;
  std::vector<StripPoint> points;
};

// Poisson(H) points, i.i.d. uniform on (0,1) x (0,H).
PoissonStrip sample_strip(double height, std::uint64_t seed);

// Conditional density evaluator g_n(y_1..y_{n-1}, x); must integrate to 1
// over (0,1) for every history.
struct DensityOracle {
  std::string id;
  std::function<double(std::span<const double> history, double x)> g;
};

DensityOracle uniform_oracle();
// i.i.d. family with a fixed density f on (0,1)
DensityOracle iid_oracle(std::string id, std::function<double(double)> f);
// history-dependent Markov family g(x | y_prev) = 1 + cos(2 pi (x - y_prev));
// exactly normalized for every y_prev
DensityOracle cosine_markov_oracle();

struct CouplingStep {
  std::size_t n = 0;  // 1-based
  double t = 0.0;
  double y = 0.0;
  std::size_t point_id = 0;
};

struct CouplingTrace {
  std::uint64_t seed = 0;
  double height = 0.0;
  std::string oracle_id;
  std::vector<CouplingStep> steps;
  std::vector<char> consumed;  // per strip point
  double level = 0.0;          // L*: min_y S_n(y) at termination
  std::size_t unconsumed_count = 0;

  std::vector<double> history(std::size_t upto) const;  // y_1..y_upto
};

// S_k(y) = sum_{j<=k} T_j g_j(y_1..y_{j-1}, y).
double graph_height(const CouplingTrace& trace, const DensityOracle& oracle,
                    double y, std::size_t upto);

struct ExtractResult {
  bool exhausted = true;
  double t = 0.0;
  double y = 0.0;
  std::size_t point_id = 0;
};

// One racing step; marks the winning point consumed in the trace.
ExtractResult extract_next(const PoissonStrip& strip,
                           const DensityOracle& oracle, CouplingTrace& trace);

CouplingTrace run_coupling(const DensityOracle& oracle, double height,
                           std::size_t n_max, std::uint64_t seed);
// same, on an externally supplied strip
CouplingTrace run_coupling_on(const PoissonStrip& strip,
                              const DensityOracle& oracle, std::size_t n_max);

struct DivergenceReport {
  std::vector<double> eps_grid;
  std::vector<std::vector<double>> per_n_profile;  // [n][eps]
  std::vector<double> sup_profile;                 // [eps]
  std::vector<double> mean_partial_sums;           // [n]
  bool profile_vanishing = false;
  bool sums_diverging = false;
};

// samples: one row per replica, column n holds Y_n (values >= 0)
DivergenceReport divergence_diagnostics(
    const std::vector<std::vector<double>>& samples,
    std::vector<double> eps_grid);

void write_trace_json(const CouplingTrace& trace, const PoissonStrip& strip,
                      std::ostream& os);
void write_trace_csv(const CouplingTrace& trace, std::ostream& os);

}  // namespace dcs::coupling
