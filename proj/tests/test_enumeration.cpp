#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "dcslab/brownian.hpp"
#include "dcslab/enumeration.hpp"
#include "dcslab/errors.hpp"
#include "dcslab/rng.hpp"

using namespace dcs;
using brownian::BrownianPath;
using enumeration::children;
using enumeration::interval_of_index;

namespace {

BrownianPath increasing_path(int depth) {
  BrownianPath p;
  p.depth = depth;
  p.origin = 0.0;
  const std::size_t n = (std::size_t{1} << depth) + 1;
  for (std::size_t i = 0; i < n; ++i)
    p.values.push_back(static_cast<double>(i) / (n - 1));
  return p;
}

}  // namespace

TEST_CASE("index table of the dyadic enumeration") {
  auto i2 = interval_of_index(2);
  CHECK(i2.level == 0);
  CHECK(i2.left() == 0.0);
  CHECK(i2.right() == 1.0);
  auto i7 = interval_of_index(7);
  CHECK(i7.left() == 0.5);
  CHECK(i7.right() == 0.75);
  auto i9 = interval_of_index(9);
  CHECK(i9.left() == 0.0);
  CHECK(i9.right() == 0.125);
  CHECK_THROWS_AS(interval_of_index(1), std::domain_error);
}

TEST_CASE("children indices halve the parent interval") {
  CHECK(children(2) == std::pair<long long, long long>{3, 4});
  CHECK(children(3) == std::pair<long long, long long>{5, 6});
  for (long long n = 2; n <= 16; ++n) {
    const auto [l, r] = children(n);
    const auto parent = interval_of_index(n);
    const auto left = interval_of_index(l);
    const auto right = interval_of_index(r);
    CHECK(left.level == parent.level + 1);
    CHECK(right.level == parent.level + 1);
    CHECK(left.left() == parent.left());
    CHECK(left.right() == right.left());
    CHECK(right.right() == parent.right());
  }
}

TEST_CASE("indices 2^k < n <= 2^{k+1} enumerate level k exactly once") {
  for (int k = 0; k <= 12; ++k) {
    std::set<long long> positions;
    for (long long n = (1LL << k) + 1; n <= (1LL << (k + 1)); ++n) {
      const auto iv = interval_of_index(n);
      CHECK(iv.level == k);
      positions.insert(iv.position);
    }
    CHECK(positions.size() == static_cast<std::size_t>(1LL << k));
    CHECK(*positions.begin() == 1);
    CHECK(*positions.rbegin() == (1LL << k));
  }
}

TEST_CASE("greater-minimum rule on a strictly increasing path") {
  const auto p = increasing_path(8);
  const auto e = enumeration::enumerate_minimizers(p, 2);
  const double step = 1.0 / 256.0;
  CHECK(e.xs[0] == step);        // leftmost interior point
  CHECK(e.xs[1] == 0.5 + step);  // left-half min smaller, pick right half
}

TEST_CASE("level argmins of the increasing path") {
  const auto p = increasing_path(8);
  const double step = 1.0 / 256.0;
  const auto l0 = enumeration::level_argmins(p, 0);
  CHECK(l0 == std::vector<double>{step});
  const auto l1 = enumeration::level_argmins(p, 1);
  CHECK(l1 == std::vector<double>{step, 0.5 + step});
}

TEST_CASE("first 2^k enumerated points are the level-k argmins") {
  for (int path_idx = 0; path_idx < 20; ++path_idx) {
    const auto p = brownian::sample_path(9, rng::derive(101, path_idx));
    for (int k = 0; k <= 5; ++k) {
      auto xs = enumeration::enumerate_minimizers(
                    p, std::size_t{1} << k)
                    .xs;
      auto level = enumeration::level_argmins(p, k);
      std::sort(xs.begin(), xs.end());
      std::sort(level.begin(), level.end());
      CHECK(xs == level);
    }
  }
}

TEST_CASE("enumerated minimizers are pairwise distinct") {
  const auto p = brownian::sample_path(11, 271828);
  const auto e = enumeration::enumerate_minimizers(p, 64);
  std::set<double> uniq(e.xs.begin(), e.xs.end());
  CHECK(uniq.size() == e.xs.size());
}

TEST_CASE("insufficient depth raises a resolution error") {
  const auto p = brownian::sample_path(4, 1);
  CHECK_THROWS_AS(enumeration::enumerate_minimizers(p, 64), ResolutionError);
  CHECK_THROWS_AS(enumeration::level_argmins(p, 4), ResolutionError);
}

TEST_CASE("exact half-minimum ties are reported, not resolved") {
  BrownianPath flat;
  flat.depth = 6;
  flat.origin = 0.0;
  flat.values.assign(65, 0.0);
  CHECK_THROWS_AS(enumeration::enumerate_minimizers(flat, 2),
                  DegeneratePathError);
}

TEST_CASE("csv export carries index metadata") {
  const auto p = brownian::sample_path(8, 5);
  const auto e = enumeration::enumerate_minimizers(p, 4);
  std::ostringstream os;
  enumeration::write_csv(e, os);
  const std::string out = os.str();
  CHECK(out.rfind("n,x_n,interval_level,interval_position\n", 0) == 0);
  CHECK(std::count(out.begin(), out.end(), '\n') == 5);
}
