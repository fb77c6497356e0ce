#pragma once

#include <cstdint>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace dcs::brownian {

// Open dyadic interval ((position-1)/2^level, position/2^level).
struct DyadicInterval {
  int level = 0;
  long long position = 1;  // 1 .. 2^level

  double left() const;
  double right() const;
  double width() const;
};

// Brownian path sampled on the dyadic grid {i/2^depth : i = 0..2^depth}.
// Values are produced by midpoint refinement with one keyed normal draw per
// grid node, so refining a path never changes already-sampled values.
struct BrownianPath {
  int depth = 0;
  double origin = 0.0;
  std::vector<double> values;  // 2^depth + 1 entries, values[0] == origin

  std::size_t grid_size() const { return values.size(); }
  double grid_time(std::size_t i) const;
};

BrownianPath sample_path(int depth, std::uint64_t seed);
BrownianPath sample_bridge(double a, double b, int depth, std::uint64_t seed);

// One more dyadic level, reusing the node keys of `seed`: the returned path
// agrees with the input on all coarse grid points bit-exactly.
BrownianPath refine(const BrownianPath& path, std::uint64_t seed);

struct ArgminResult {
  double t = 0.0;
  double m = 0.0;
  std::size_t index = 0;  // grid index of t at the path's depth
};

// Grid argmin over the closed interval; ties go to the smallest grid index.
ArgminResult argmin_on(const BrownianPath& path, const DyadicInterval& interval);

ArgminResult global_argmin(const BrownianPath& path);

// CSV export: header "t,value", rows in ascending t.
void write_csv(const BrownianPath& path, std::ostream& os);

}  // namespace dcs::brownian
