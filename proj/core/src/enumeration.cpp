#include "dcslab/enumeration.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "dcslab/errors.hpp"

namespace dcs::enumeration {

using brownian::ArgminResult;
using brownian::BrownianPath;
using brownian::DyadicInterval;

brownian::DyadicInterval interval_of_index(long long n) {
  if (n < 2) throw std::domain_error("dyadic index must be >= 2");
  // 2^k < n <= 2^{k+1}
  const int k = std::bit_width(static_cast<unsigned long long>(n - 1)) - 1;
  const long long i = n - (1LL << k);
  return DyadicInterval{k, i};
}

std::pair<long long, long long> children(long long n) {
  if (n < 2) throw std::domain_error("dyadic index must be >= 2");
  return {2 * n - 1, 2 * n};
}

namespace {

void check_levels(const BrownianPath& path, int level, int guard) {
  if (guard < 2) throw std::invalid_argument("guard must be >= 2");
  if (level > path.depth - guard)
    throw ResolutionError("path depth insufficient for requested enumeration");
}

// Argmin over the left-open, right-closed grid cell (with the global right
// endpoint excluded as well). These cells partition the interior grid
// points exactly, so sibling halves never share an eligible point and the
// level-k cells tile the level-(k-1) cells; the continuum analog differs
// from the open intervals only on a null set.
ArgminResult argmin_interior(const BrownianPath& path,
                             const DyadicInterval& interval) {
  const std::size_t step =
      std::size_t{1} << (path.depth - interval.level);
  const std::size_t lo = static_cast<std::size_t>(interval.position - 1) * step;
  const std::size_t hi =
      std::min(static_cast<std::size_t>(interval.position) * step,
               path.grid_size() - 2);
  ArgminResult r{path.grid_time(lo + 1), path.values[lo + 1], lo + 1};
  for (std::size_t i = lo + 2; i <= hi; ++i) {
    if (path.values[i] < r.m) {
      r.m = path.values[i];
      r.index = i;
    }
  }
  r.t = path.grid_time(r.index);
  return r;
}

}  // namespace

MinimizerEnumeration enumerate_minimizers(const BrownianPath& path,
                                          std::size_t m, int guard) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  // halves of interval m live one level deeper than interval m itself
  if (m >= 2) check_levels(path, interval_of_index(2 * m).level, guard);

  MinimizerEnumeration e;
  e.xs.reserve(m);
  e.xs.push_back(argmin_interior(path, DyadicInterval{0, 1}).t);
  for (std::size_t n = 2; n <= m; ++n) {
    const auto [ln, rn] = children(static_cast<long long>(n));
    const ArgminResult left = argmin_interior(path, interval_of_index(ln));
    const ArgminResult right = argmin_interior(path, interval_of_index(rn));
    if (left.m == right.m) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "equal half minima at index %zu", n);
      throw DegeneratePathError(buf);
    }
    e.xs.push_back(left.m > right.m ? left.t : right.t);
  }
  return e;
}

std::vector<double> level_argmins(const BrownianPath& path, int k, int guard) {
  if (k < 0) throw std::invalid_argument("level must be >= 0");
  check_levels(path, k, guard);
  std::vector<double> out;
  out.reserve(std::size_t{1} << k);
  for (long long i = 1; i <= (1LL << k); ++i)
    out.push_back(argmin_interior(path, DyadicInterval{k, i}).t);
  return out;
}

void write_csv(const MinimizerEnumeration& e, std::ostream& os) {
  os << "n,x_n,interval_level,interval_position\n";
  char buf[96];
  for (std::size_t j = 0; j < e.xs.size(); ++j) {
    const long long n = static_cast<long long>(j) + 1;
    DyadicInterval iv{0, 1};
    if (n >= 2) iv = interval_of_index(n);
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%d,%lld\n", n, e.xs[j], iv.level,
                  iv.position);
    os << buf;
  }
}

}  // namespace dcs::enumeration
