#include "dcslab/rational_joining.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace dcs::joining {

namespace {

constexpr double kMassTol = 1e-9;

}  // namespace

double GridDensity::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(denom);
}

GridDensity uniform_grid(long long lo_num, long long hi_num, long long denom) {
  if (denom < 1 || hi_num <= lo_num)
    throw std::invalid_argument("bad uniform grid bounds");
  GridDensity d;
  d.offset = lo_num;
  d.denom = denom;
  d.values.assign(static_cast<std::size_t>(hi_num - lo_num),
                  static_cast<double>(denom) /
                      static_cast<double>(hi_num - lo_num));
  return d;
}

GridDensity truncated_exponential_grid(long long x_max_num, long long denom) {
  if (denom < 1 || x_max_num < 1)
    throw std::invalid_argument("bad exponential grid bounds");
  GridDensity d;
  d.offset = 0;
  d.denom = denom;
  const double x_max = static_cast<double>(x_max_num) / denom;
  const double norm = 1.0 - std::exp(-x_max);
  d.values.reserve(static_cast<std::size_t>(x_max_num));
  for (long long i = 0; i < x_max_num; ++i) {
    // exact cell mass of the renormalized law, expressed as a grid value
    const double a = static_cast<double>(i) / denom;
    const double b = static_cast<double>(i + 1) / denom;
    const double cell_mass = (std::exp(-a) - std::exp(-b)) / norm;
    d.values.push_back(cell_mass * denom);
  }
  return d;
}

ShiftPlan greedy_join(const GridDensity& f, const GridDensity& g,
                      const std::vector<long long>& shift_nums, int sweeps) {
  if (f.denom != g.denom)
    throw std::invalid_argument("grids must share the same step");
  if (std::abs(f.mass() - g.mass()) > kMassTol)
    throw std::invalid_argument("f and g must carry equal total mass");
  if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");

  ShiftPlan plan;
  plan.denom = f.denom;
  plan.f_res = f;
  plan.g_res = g;

  std::map<long long, std::size_t> entry_index;
  const long long gl = g.offset;
  const long long gh = g.offset + static_cast<long long>(g.values.size());

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (long long q : shift_nums) {
      double moved = 0.0;
      std::size_t entry = static_cast<std::size_t>(-1);
      for (std::size_t i = 0; i < plan.f_res.values.size(); ++i) {
        const double fv = plan.f_res.values[i];
        if (fv <= 0.0) continue;
        const long long target = plan.f_res.offset +
                                 static_cast<long long>(i) + q;
        if (target < gl || target >= gh) continue;
        const std::size_t j = static_cast<std::size_t>(target - gl);
        const double gv = plan.g_res.values[j];
        if (gv <= 0.0) continue;
        const double m = std::min(fv, gv);
        if (entry == static_cast<std::size_t>(-1)) {
          auto it = entry_index.find(q);
          if (it == entry_index.end()) {
            ShiftEntry e;
            e.shift_num = q;
            e.density.offset = f.offset;
            e.density.denom = f.denom;
            e.density.values.assign(f.values.size(), 0.0);
            entry_index.emplace(q, plan.entries.size());
            plan.entries.push_back(std::move(e));
            entry = plan.entries.size() - 1;
          } else {
            entry = it->second;
          }
        }
        plan.entries[entry].density.values[i] += m;
        plan.f_res.values[i] = fv - m;
        plan.g_res.values[j] = gv - m;
        moved += m;
      }
      if (entry != static_cast<std::size_t>(-1))
        plan.entries[entry].mass = plan.entries[entry].density.mass();
      (void)moved;
    }
    plan.sweep_residuals.push_back(plan.f_res.mass());
    ++plan.sweeps_run;
    if (plan.sweep_residuals.back() == 0.0) break;
  }
  return plan;
}

Marginals plan_marginals(const ShiftPlan& plan) {
  Marginals m;
  m.first.denom = plan.denom;
  m.second.denom = plan.denom;
  if (plan.entries.empty() && plan.f_res.values.empty()) return m;

  m.first.offset = plan.f_res.offset;
  m.first.values.assign(plan.f_res.values.size(), 0.0);
  m.second.offset = plan.g_res.offset;
  m.second.values.assign(plan.g_res.values.size(), 0.0);

  for (const auto& e : plan.entries) {
    for (std::size_t i = 0; i < e.density.values.size(); ++i) {
      const double v = e.density.values[i];
      if (v == 0.0) continue;
      m.first.values[i] += v;
      const long long target =
          e.density.offset + static_cast<long long>(i) + e.shift_num;
      const long long j = target - m.second.offset;
      if (j < 0 || j >= static_cast<long long>(m.second.values.size()))
        throw std::logic_error("plan entry shifts outside the g grid");
      m.second.values[static_cast<std::size_t>(j)] += v;
    }
  }
  return m;
}

RationalityReport verify_rationality(const ShiftPlan& plan) {
  RationalityReport rep;
  for (const auto& e : plan.entries) {
    long long num = e.shift_num;
    long long den = plan.denom;
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    rep.denominator_bound = std::max(rep.denominator_bound, den);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%lld/%lld", num, den);
    rep.shifts.emplace_back(buf);
  }
  return rep;
}

void write_plan_json(const ShiftPlan& plan, std::ostream& os) {
  nlohmann::ordered_json j;
  char buf[48];
  std::snprintf(buf, sizeof buf, "1/%lld", plan.denom);
  j["step"] = buf;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : plan.entries) {
    std::size_t lo = e.density.values.size(), hi = 0;
    for (std::size_t i = 0; i < e.density.values.size(); ++i)
      if (e.density.values[i] > 0.0) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
      }
    std::snprintf(buf, sizeof buf, "%lld/%lld", e.shift_num, plan.denom);
    nlohmann::ordered_json entry;
    entry["q"] = buf;
    entry["mass"] = e.mass;
    if (lo <= hi)
      entry["support_range"] = {e.density.x_at(lo), e.density.x_at(hi + 1)};
    j["entries"].push_back(std::move(entry));
  }
  j["residual_mass"] = plan.residual_mass();
  j["sweeps"] = plan.sweeps_run;
  os << j.dump(2) << '\n';
}

void write_density_csv(const GridDensity& d, std::ostream& os) {
  os << "x,value\n";
  char buf[80];
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", d.x_at(i), d.values[i]);
    os << buf;
  }
}

}  // namespace dcs::joining
