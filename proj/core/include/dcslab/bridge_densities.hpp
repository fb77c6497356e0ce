#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

// Closed-form conditional densities of the interval argmin of a Brownian
// bridge kept above a competing minimum, in two variants that differ by the
// (t-t^2)^{-3/2} time weight; Monte Carlo adjudicates which one matches the
// simulated law.
namespace dcs::densities {

enum class PhiVariant {
  plain,          // integrand without the time weight
  time_weighted,  // integrand carries (t-t^2)^{-3/2}
};

struct QuadratureSpec {
  double tol_inner = 1e-8;  // y-integral
  double tol_norm = 1e-6;   // normalization over t
  int max_depth = 30;
};

// Unnormalized integrand of phi at time t (the y-integral only).
double phi_integrand(double a, double b, double t, PhiVariant variant,
                     const QuadratureSpec& q = {});

// Normalizing constant so that the t-integral of phi over (0,1) is 1.
// Cached per (a, b, variant). Throws NumericError if the quadrature cannot
// reach q.tol_norm.
double phi_norm_const(double a, double b, PhiVariant variant,
                      const QuadratureSpec& q = {});

// Normalized density of the argmin location on (0,1), boundary gaps a, b > 0.
double phi(double a, double b, double t, PhiVariant variant = PhiVariant::plain,
           const QuadratureSpec& q = {});

// Joint density of (argmin, min) of a Brownian path on [0,1] conditioned on
// B_0 = a, B_1 = b; domain 0 < t < 1, y < min(a,b).
double minmin_joint_density(double a, double b, double t, double y);

// Boundary data for one dyadic half-interval: gaps of the endpoint values
// above the competing minimum, plus the interval itself.
struct BoundaryData {
  double a = 0.0;  // B_u minus the competing minimum, > 0
  double b = 0.0;  // B_v minus the competing minimum, > 0
  double u = 0.0;
  double v = 0.0;
};

// Conditional density of the minimizer location x in (u,v):
// (1/(v-u)) * phi(a/sqrt(v-u), b/sqrt(v-u), (x-u)/(v-u)).
double g_n_density(const BoundaryData& bd, double x,
                   PhiVariant variant = PhiVariant::plain,
                   const QuadratureSpec& q = {});

// Numerical min of phi(a,b,.) over the inner half [1/4, 3/4]; positive.
double psi_lower_bound(double a, double b,
                       PhiVariant variant = PhiVariant::plain,
                       const QuadratureSpec& q = {});

// Empirical profile eps -> Pr{0 < g < eps} over a sample of realized
// density values (zeros included).
class TailProfile {
 public:
  explicit TailProfile(std::vector<double> g_values);

  double operator()(double eps) const;
  std::size_t sample_size() const { return n_; }
  std::size_t positive_count() const { return positives_.size(); }

 private:
  std::vector<double> positives_;  // sorted
  std::size_t n_ = 0;
};

// CSV export of a density table: metadata header lines starting with '#',
// then "t,value" rows.
void write_phi_table_csv(double a, double b, PhiVariant variant, int points,
                         const QuadratureSpec& q, std::ostream& os);

}  // namespace dcs::densities
