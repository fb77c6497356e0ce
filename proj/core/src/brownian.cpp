#include "dcslab/brownian.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "dcslab/errors.hpp"
#include "dcslab/rng.hpp"

namespace dcs::brownian {

namespace {

constexpr int kMaxDepth = 26;  // 2^26+1 doubles is already half a gigabyte

// one keyed draw per grid node; level 0 is the right endpoint, level l >= 1
// holds the midpoints j/2^l with j odd
std::uint64_t node_key(std::uint64_t seed, int level, long long j) {
  return rng::mix(seed, static_cast<std::uint64_t>(level),
                  static_cast<std::uint64_t>(j));
}

void check_depth(int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  if (depth > kMaxDepth) throw ResolutionError("depth exceeds configured maximum");
}

// midpoint refinement between fixed endpoints
void fill_interior(BrownianPath& p, std::uint64_t seed) {
  const std::size_t n = std::size_t{1} << p.depth;
  for (int level = 1; level <= p.depth; ++level) {
    const std::size_t step = n >> level;
    // conditional sd of the midpoint of an interval of width 2^{-(level-1)}
    const double sd = 0.5 * std::pow(2.0, -0.5 * (level - 1));
    for (long long j = 1; j < (1LL << level); j += 2) {
      const std::size_t idx = static_cast<std::size_t>(j) * step;
      p.values[idx] = 0.5 * (p.values[idx - step] + p.values[idx + step]) +
                      sd * rng::gaussian(node_key(seed, level, j));
    }
  }
}

}  // namespace

double DyadicInterval::left() const {
  return static_cast<double>(position - 1) / static_cast<double>(1LL << level);
}

double DyadicInterval::right() const {
  return static_cast<double>(position) / static_cast<double>(1LL << level);
}

double DyadicInterval::width() const {
  return 1.0 / static_cast<double>(1LL << level);
}

double BrownianPath::grid_time(std::size_t i) const {
  return static_cast<double>(i) / static_cast<double>(std::size_t{1} << depth);
}

BrownianPath sample_path(int depth, std::uint64_t seed) {
  check_depth(depth);
  BrownianPath p;
  p.depth = depth;
  p.origin = 0.0;
  p.values.assign((std::size_t{1} << depth) + 1, 0.0);
  p.values.back() = rng::gaussian(node_key(seed, 0, 1));
  fill_interior(p, seed);
  return p;
}

BrownianPath sample_bridge(double a, double b, int depth, std::uint64_t seed) {
  check_depth(depth);
  BrownianPath p;
  p.depth = depth;
  p.origin = a;
  p.values.assign((std::size_t{1} << depth) + 1, 0.0);
  p.values.front() = a;
  p.values.back() = b;
  fill_interior(p, seed);
  return p;
}

BrownianPath refine(const BrownianPath& path, std::uint64_t seed) {
  check_depth(path.depth + 1);
  BrownianPath p;
  p.depth = path.depth + 1;
  p.origin = path.origin;
  p.values.assign((std::size_t{1} << p.depth) + 1, 0.0);
  for (std::size_t i = 0; i < path.values.size(); ++i)
    p.values[2 * i] = path.values[i];
  const double sd = 0.5 * std::pow(2.0, -0.5 * (p.depth - 1));
  for (long long j = 1; j < (1LL << p.depth); j += 2) {
    const std::size_t idx = static_cast<std::size_t>(j);
    p.values[idx] = 0.5 * (p.values[idx - 1] + p.values[idx + 1]) +
                    sd * rng::gaussian(node_key(seed, p.depth, j));
  }
  return p;
}

ArgminResult argmin_on(const BrownianPath& path, const DyadicInterval& interval) {
  if (interval.level > path.depth)
    throw ResolutionError("interval level exceeds path depth");
  if (interval.position < 1 || interval.position > (1LL << interval.level))
    throw std::invalid_argument("interval position out of range");
  const std::size_t step = std::size_t{1} << (path.depth - interval.level);
  const std::size_t lo = static_cast<std::size_t>(interval.position - 1) * step;
  const std::size_t hi = static_cast<std::size_t>(interval.position) * step;
  ArgminResult r{path.grid_time(lo), path.values[lo], lo};
  for (std::size_t i = lo + 1; i <= hi; ++i) {
    if (path.values[i] < r.m) {
      r.m = path.values[i];
      r.index = i;
    }
  }
  r.t = path.grid_time(r.index);
  return r;
}

ArgminResult global_argmin(const BrownianPath& path) {
  return argmin_on(path, DyadicInterval{0, 1});
}

void write_csv(const BrownianPath& path, std::ostream& os) {
  os << "t,value\n";
  char buf[64];
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.grid_time(i),
                  path.values[i]);
    os << buf;
  }
}

}  // namespace dcs::brownian
