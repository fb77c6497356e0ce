#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Grid-based joining of two densities concentrated on rational differences:
// mass is transported only along lines y = x + q with q an exact multiple of
// the grid step, so x - y is rational by construction.
namespace dcs::joining {

// Density on the grid {origin + i/L : i = 0..values.size()-1}, with origin
// itself a multiple of 1/L (stored as an integer offset).
struct GridDensity {
  long long offset = 0;  // origin = offset / L
  long long denom = 1;   // L, grid step = 1/L
  std::vector<double> values;

  double mass() const;
  double origin() const { return static_cast<double>(offset) / denom; }
  double x_at(std::size_t i) const {
    return static_cast<double>(offset + static_cast<long long>(i)) / denom;
  }
};

// Uniform density on (lo, hi); lo, hi given as multiples of 1/L.
GridDensity uniform_grid(long long lo_num, long long hi_num, long long denom);
// Exp(1) truncated to (0, x_max) and renormalized, x_max a multiple of 1/L.
GridDensity truncated_exponential_grid(long long x_max_num, long long denom);

struct ShiftEntry {
  long long shift_num = 0;  // shift q = shift_num / denom
  GridDensity density;      // mass leaving f at each source cell
  double mass = 0.0;
};

struct ShiftPlan {
  long long denom = 1;
  std::vector<ShiftEntry> entries;
  GridDensity f_res, g_res;
  std::vector<double> sweep_residuals;  // residual f-mass after each sweep
  int sweeps_run = 0;

  double residual_mass() const { return f_res.mass(); }
};

// Cyclic greedy sweeps: for each shift q, transfer
// min(f_res(x), g_res(x+q)) pointwise and subtract from both residuals.
// f and g must carry equal mass (tolerance 1e-9) and share the grid denom.
ShiftPlan greedy_join(const GridDensity& f, const GridDensity& g,
                      const std::vector<long long>& shift_nums, int sweeps);

// first = sum of entry densities (f side), second = sum of shifted entries
// (g side); residuals reported separately inside the plan.
struct Marginals {
  GridDensity first;
  GridDensity second;
};
Marginals plan_marginals(const ShiftPlan& plan);

struct RationalityReport {
  bool all_rational = true;  // true by construction; kept for the record
  long long denominator_bound = 1;
  std::vector<std::string> shifts;  // reduced p/q form
};
RationalityReport verify_rationality(const ShiftPlan& plan);

// {step:"1/L", entries:[{q:"p/L", mass, support_range}], residual_mass, sweeps}
void write_plan_json(const ShiftPlan& plan, std::ostream& os);
// columns x, value
void write_density_csv(const GridDensity& d, std::ostream& os);

}  // namespace dcs::joining
