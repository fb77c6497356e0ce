#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace dcs::stats {

inline constexpr double kDefaultSignificance = 1e-3;

struct TestReport {
  std::string id;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  double significance = kDefaultSignificance;
  bool pass = false;
  std::string note;
};

// Survival function of the Kolmogorov distribution.
double kolmogorov_sf(double x);

// One-sample KS against a given CDF; asymptotic p-value with the usual
// finite-n refinement of the argument.
TestReport ks_test(std::vector<double> sample,
                   const std::function<double(double)>& cdf,
                   double significance = kDefaultSignificance,
                   std::string id = "ks");

// Pearson chi-square against equal bin probabilities on [0,1).
TestReport chi_square_uniform(const std::vector<double>& sample, int bins,
                              double significance = kDefaultSignificance,
                              std::string id = "chi2-uniform");

// Pearson chi-square of observed counts against arbitrary cell
// probabilities (used by the 2-D histogram suites).
TestReport chi_square_counts(const std::vector<std::size_t>& observed,
                             const std::vector<double>& expected_probs,
                             double significance = kDefaultSignificance,
                             std::string id = "chi2");

// Index-of-dispersion test of counts against the Poisson hypothesis;
// two-sided, with over/underdispersion noted.
TestReport poisson_dispersion(const std::vector<long long>& counts,
                              double significance = kDefaultSignificance,
                              std::string id = "poisson-dispersion");

double pearson_corr(const std::vector<double>& a, const std::vector<double>& b);

// common CDFs for the suites
double uniform_cdf(double x);
double exp1_cdf(double x);
double arcsine_cdf(double x);

void write_reports_json(const std::vector<TestReport>& reports,
                        std::ostream& os);
// CSV summary: test_id, statistic, p, pass
void write_reports_csv(const std::vector<TestReport>& reports,
                       std::ostream& os);

}  // namespace dcs::stats
