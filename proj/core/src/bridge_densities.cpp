#include "dcslab/bridge_densities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "dcslab/errors.hpp"
#include "dcslab/quadrature.hpp"

namespace dcs::densities {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_boundary(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("boundary gaps must be positive");
}

double inner_integral(double a, double b, double t, const QuadratureSpec& q) {
  const double ub = std::min(a, b);
  const double it = 1.0 / (2.0 * t);
  const double is = 1.0 / (2.0 * (1.0 - t));
  // substitute y = ub - z; the mass sits in a spike of width
  // sqrt(t(1-t)) at z = 0, so truncate there instead of spanning all of
  // (0, ub) with panels that can straddle the spike
  const double sigma = std::sqrt(t * (1.0 - t));
  const double zmax = std::min(ub, 40.0 * sigma);
  auto f = [&](double z) {
    const double ay = a - ub + z;
    const double by = b - ub + z;
    return ay * by * std::exp(-ay * ay * it - by * by * is);
  };
  // keep the tolerance proportionate when the integral itself is tiny, but
  // floored: an underflowed tolerance would force full-depth recursion
  const double scale = f(std::min(zmax, sigma)) * zmax;
  if (!(scale > 1e-250)) return 0.0;
  const double tol = std::max(q.tol_inner * std::min(1.0, scale), 1e-30);
  return quad::integrate(f, 0.0, zmax, tol, q.max_depth).value;
}

double weighted(double value, double t, PhiVariant variant) {
  if (variant == PhiVariant::plain) return value;
  const double w = t - t * t;
  return value / (w * std::sqrt(w));
}

struct CacheKey {
  double a, b;
  PhiVariant variant;
  bool operator<(const CacheKey& o) const {
    return std::tie(a, b, variant) < std::tie(o.a, o.b, o.variant);
  }
};

std::map<CacheKey, double> g_const_cache;
std::mutex g_const_mutex;

}  // namespace

double phi_integrand(double a, double b, double t, PhiVariant variant,
                     const QuadratureSpec& q) {
  check_boundary(a, b);
  if (!(t > 0.0) || !(t < 1.0)) throw std::domain_error("t must be in (0,1)");
  return weighted(inner_integral(a, b, t, q), t, variant);
}

double phi_norm_const(double a, double b, PhiVariant variant,
                      const QuadratureSpec& q) {
  check_boundary(a, b);
  const CacheKey key{a, b, variant};
  {
    std::lock_guard<std::mutex> lock(g_const_mutex);
    auto it = g_const_cache.find(key);
    if (it != g_const_cache.end()) return it->second;
  }
  // substitute t = sin^2(pi s / 2); removes the endpoint singularity of the
  // weighted variant and the vanishing-tail plateau of the plain one
  auto f = [&](double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double si = std::sin(0.5 * kPi * s);
    const double t = si * si;
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double jac = 0.5 * kPi * std::sin(kPi * s);
    return weighted(inner_integral(a, b, t, q), t, variant) * jac;
  };
  const quad::Result r = quad::integrate(f, 0.0, 1.0, q.tol_norm, q.max_depth);
  if (!(r.value > 0.0) || r.err > 10.0 * q.tol_norm) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "phi normalization did not converge (defect %.3e)", r.err);
    throw NumericError(buf);
  }
  const double c = 1.0 / r.value;
  std::lock_guard<std::mutex> lock(g_const_mutex);
  g_const_cache.emplace(key, c);
  return c;
}

double phi(double a, double b, double t, PhiVariant variant,
           const QuadratureSpec& q) {
  return phi_norm_const(a, b, variant, q) * phi_integrand(a, b, t, variant, q);
}

double minmin_joint_density(double a, double b, double t, double y) {
  if (!(t > 0.0) || !(t < 1.0)) throw std::domain_error("t must be in (0,1)");
  if (!(y < std::min(a, b))) throw std::domain_error("y must be below min(a,b)");
  const double w = t - t * t;
  const double ay = a - y;
  const double by = b - y;
  const double ab = a - b;
  return std::sqrt(2.0 / kPi) * ay * by / (w * std::sqrt(w)) *
         std::exp(0.5 * ab * ab - ay * ay / (2.0 * t) -
                  by * by / (2.0 * (1.0 - t)));
}

double g_n_density(const BoundaryData& bd, double x, PhiVariant variant,
                   const QuadratureSpec& q) {
  check_boundary(bd.a, bd.b);
  if (!(bd.u < bd.v)) throw std::domain_error("interval must satisfy u < v");
  if (!(x > bd.u) || !(x < bd.v))
    throw std::domain_error("x must lie inside (u,v)");
  const double len = bd.v - bd.u;
  const double s = std::sqrt(len);
  return phi(bd.a / s, bd.b / s, (x - bd.u) / len, variant, q) / len;
}

double psi_lower_bound(double a, double b, PhiVariant variant,
                       const QuadratureSpec& q) {
  // coarse scan plus golden-section polish; phi is smooth on [1/4, 3/4]
  const int n = 200;
  double best_t = 0.25;
  double best = phi(a, b, 0.25, variant, q);
  for (int i = 1; i <= n; ++i) {
    const double t = 0.25 + 0.5 * i / n;
    const double v = phi(a, b, t, variant, q);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  const double h = 0.5 / n;
  double lo = std::max(0.25, best_t - h);
  double hi = std::min(0.75, best_t + h);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 40; ++it) {
    const double m1 = hi - gr * (hi - lo);
    const double m2 = lo + gr * (hi - lo);
    if (phi(a, b, m1, variant, q) < phi(a, b, m2, variant, q))
      hi = m2;
    else
      lo = m1;
  }
  return std::min(best, phi(a, b, 0.5 * (lo + hi), variant, q));
}

TailProfile::TailProfile(std::vector<double> g_values) {
  if (g_values.empty()) throw std::invalid_argument("empty g-value sample");
  n_ = g_values.size();
  for (double v : g_values) {
    if (v < 0.0) throw std::domain_error("g-values must be nonnegative");
    if (v > 0.0) positives_.push_back(v);
  }
  std::sort(positives_.begin(), positives_.end());
}

double TailProfile::operator()(double eps) const {
  const auto it = std::lower_bound(positives_.begin(), positives_.end(), eps);
  return static_cast<double>(it - positives_.begin()) /
         static_cast<double>(n_);
}

void write_phi_table_csv(double a, double b, PhiVariant variant, int points,
                         const QuadratureSpec& q, std::ostream& os) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "# phi table a=%.17g b=%.17g variant=%s tol=%.3g\n", a, b,
                variant == PhiVariant::plain ? "plain" : "time_weighted",
                q.tol_norm);
  os << buf << "t,value\n";
  for (int i = 1; i < points; ++i) {
    const double t = static_cast<double>(i) / points;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t,
                  phi(a, b, t, variant, q));
    os << buf;
  }
}

}  // namespace dcs::densities
