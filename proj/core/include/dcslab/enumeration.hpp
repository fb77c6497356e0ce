#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "dcslab/brownian.hpp"

// Measurable enumeration of the local minimizers of a dyadic-grid path:
// index n >= 2 names a dyadic interval, each interval is split in two, and
// the enumerated point is the argmin of the half whose minimum is greater.
namespace dcs::enumeration {

// Decomposes n = 2^k + i (1 <= i <= 2^k) and returns ((i-1)/2^k, i/2^k).
brownian::DyadicInterval interval_of_index(long long n);

// Left and right halves of interval n, as indices: (2n-1, 2n).
std::pair<long long, long long> children(long long n);

struct MinimizerEnumeration {
  std::vector<double> xs;  // X_1 .. X_m
  std::uint64_t source_seed = 0;
  std::size_t count() const { return xs.size(); }
};

inline constexpr int kDefaultGuard = 2;

// X_1 is the global argmin; X_n (n >= 2) is the argmin of the child half of
// interval n carrying the greater minimum. Throws DegeneratePathError on an
// exact tie of realized minima, ResolutionError when the path is too coarse.
MinimizerEnumeration enumerate_minimizers(const brownian::BrownianPath& path,
                                          std::size_t m,
                                          int guard = kDefaultGuard);

// Per-interval argmins of the 2^k level-k intervals, in interval order.
std::vector<double> level_argmins(const brownian::BrownianPath& path, int k,
                                  int guard = kDefaultGuard);

// CSV export: n, x_n, interval_level, interval_position (X_1 reported with
// level 0, position 1).
void write_csv(const MinimizerEnumeration& e, std::ostream& os);

}  // namespace dcs::enumeration
