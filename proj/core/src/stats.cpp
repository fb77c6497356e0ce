#include "dcslab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include <json.hpp>

namespace dcs::stats {

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // theta-function form, fast-converging for small arguments
    const double y = std::exp(-1.23370055013616983 / (x * x));  // pi^2/8
    const double p =
        2.50662827463100050 / x *
        (y + std::pow(y, 9.0) + std::pow(y, 25.0) + std::pow(y, 49.0));
    return std::clamp(1.0 - p, 0.0, 1.0);
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    s += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

TestReport ks_test(std::vector<double> sample,
                   const std::function<double(double)>& cdf,
                   double significance, std::string id) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  const double sn = std::sqrt(static_cast<double>(n));
  const double p = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
  TestReport r;
  r.id = std::move(id);
  r.statistic = d;
  r.p_value = p;
  r.n = n;
  r.significance = significance;
  r.pass = p > significance;
  return r;
}

TestReport chi_square_uniform(const std::vector<double>& sample, int bins,
                              double significance, std::string id) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  if (bins < 2) throw std::invalid_argument("need at least 2 bins");
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double x : sample) {
    if (x < 0.0 || x >= 1.0)
      throw std::domain_error("sample values must lie in [0,1)");
    ++counts[static_cast<std::size_t>(x * bins)];
  }
  std::vector<double> probs(static_cast<std::size_t>(bins), 1.0 / bins);
  TestReport r = chi_square_counts(counts, probs, significance, std::move(id));
  return r;
}

TestReport chi_square_counts(const std::vector<std::size_t>& observed,
                             const std::vector<double>& expected_probs,
                             double significance, std::string id) {
  if (observed.size() != expected_probs.size() || observed.size() < 2)
    throw std::invalid_argument("bad chi-square input dimensions");
  std::size_t n = 0;
  for (std::size_t c : observed) n += c;
  if (n == 0) throw std::invalid_argument("empty sample");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_probs[i] * static_cast<double>(n);
    if (e <= 0.0) throw std::invalid_argument("expected cell probability <= 0");
    const double diff = static_cast<double>(observed[i]) - e;
    stat += diff * diff / e;
  }
  const boost::math::chi_squared dist(
      static_cast<double>(observed.size() - 1));
  const double p = boost::math::cdf(boost::math::complement(dist, stat));
  TestReport r;
  r.id = std::move(id);
  r.statistic = stat;
  r.p_value = p;
  r.n = n;
  r.significance = significance;
  r.pass = p > significance;
  return r;
}

TestReport poisson_dispersion(const std::vector<long long>& counts,
                              double significance, std::string id) {
  if (counts.size() < 2)
    throw std::invalid_argument("need at least 2 counts");
  for (long long c : counts)
    if (c < 0) throw std::domain_error("counts must be nonnegative");
  const double n = static_cast<double>(counts.size());
  double mean = 0.0;
  for (long long c : counts) mean += static_cast<double>(c);
  mean /= n;
  TestReport r;
  r.id = std::move(id);
  r.n = counts.size();
  r.significance = significance;
  if (mean == 0.0) {
    r.statistic = 0.0;
    r.p_value = 0.0;
    r.pass = false;
    r.note = "degenerate: zero mean";
    return r;
  }
  double ss = 0.0;
  for (long long c : counts) {
    const double d = static_cast<double>(c) - mean;
    ss += d * d;
  }
  const double stat = ss / mean;  // (n-1) s^2 / mean
  const boost::math::chi_squared dist(n - 1.0);
  const double lower = boost::math::cdf(dist, stat);
  const double upper = 1.0 - lower;
  r.statistic = stat;
  r.p_value = 2.0 * std::min(lower, upper);
  r.pass = r.p_value > significance;
  if (!r.pass) r.note = upper < lower ? "overdispersed" : "underdispersed";
  return r;
}

double pearson_corr(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("correlation needs equal-length samples");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

double exp1_cdf(double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x); }

double arcsine_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 2.0 / 3.14159265358979323846 * std::asin(std::sqrt(x));
}

void write_reports_json(const std::vector<TestReport>& reports,
                        std::ostream& os) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    j.push_back({{"id", r.id},
                 {"statistic", r.statistic},
                 {"p_value", r.p_value},
                 {"n", r.n},
                 {"significance", r.significance},
                 {"pass", r.pass},
                 {"note", r.note}});
  }
  os << j.dump(2) << '\n';
}

void write_reports_csv(const std::vector<TestReport>& reports,
                       std::ostream& os) {
  os << "test_id,statistic,p,pass\n";
  char buf[160];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%d\n", r.id.c_str(),
                  r.statistic, r.p_value, r.pass ? 1 : 0);
    os << buf;
  }
}

}  // namespace dcs::stats
