#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <vector>

#include "dcslab/rng.hpp"
#include "dcslab/transport.hpp"

using namespace dcs;
using transport::BlockSet;
using transport::FiniteMeasure;
using transport::FinitePartition;
using transport::Rat;

namespace {

Rat rat(long long n, long long d = 1) { return Rat(n, d); }

// small random instance: weights p/12 with p in 0..6, random blocks
struct RandomInstance {
  FiniteMeasure mu, nu;
  BlockSet w;
};

RandomInstance random_instance(rng::Stream& s, int ground, int max_blocks) {
  RandomInstance inst;
  inst.w.ground = ground;
  for (int i = 0; i < ground; ++i) {
    inst.mu.weights.push_back(rat(static_cast<long long>(s.uniform() * 7), 12));
    inst.nu.weights.push_back(rat(static_cast<long long>(s.uniform() * 7), 12));
  }
  const int nb = 1 + static_cast<int>(s.uniform() * max_blocks);
  for (int b = 0; b < nb; ++b) {
    std::vector<int> u, v;
    for (int i = 0; i < ground; ++i) {
      if (s.uniform() < 0.4) u.push_back(i);
      if (s.uniform() < 0.4) v.push_back(i);
    }
    if (u.empty() || v.empty()) continue;
    inst.w.blocks.push_back({u, v});
  }
  return inst;
}

// exhaustive min over covers W subset (U x ground) u (ground x V)
Rat brute_force_cover(const FiniteMeasure& mu, const FiniteMeasure& nu,
                      const BlockSet& w) {
  const int n = w.ground;
  const auto adj = w.adjacency();
  Rat best = mu.total() + nu.total() + 1;
  for (int um = 0; um < (1 << n); ++um)
    for (int vm = 0; vm < (1 << n); ++vm) {
      bool covers = true;
      for (int x = 0; x < n && covers; ++x)
        for (int y = 0; y < n && covers; ++y)
          if (adj[x][y] && !(um >> x & 1) && !(vm >> y & 1)) covers = false;
      if (!covers) continue;
      Rat c = 0;
      for (int i = 0; i < n; ++i) {
        if (um >> i & 1) c += mu.weights[i];
        if (vm >> i & 1) c += nu.weights[i];
      }
      best = std::min(best, c);
    }
  return best;
}

}  // namespace

TEST_CASE("rational parsing and printing round-trip") {
  CHECK(transport::parse_rational("3/4") == rat(3, 4));
  CHECK(transport::parse_rational("-6/8") == rat(-3, 4));
  CHECK(transport::parse_rational("5") == rat(5));
  CHECK(transport::to_string(rat(3, 4)) == "3/4");
  CHECK(transport::to_string(rat(2)) == "2");
  CHECK_THROWS_AS(transport::parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("full product block moves the smaller total mass") {
  FiniteMeasure mu{{rat(1, 2), rat(1, 2)}};
  FiniteMeasure nu{{rat(1, 3), rat(1, 3)}};
  BlockSet w{2, {{{0, 1}, {0, 1}}}};
  const auto r = transport::max_mass(mu, nu, w);
  CHECK(r.value == rat(2, 3));
  CHECK(r.plan.total() == rat(2, 3));
  const auto c = transport::min_cover(mu, nu, w);
  CHECK(c.value == rat(2, 3));
}

TEST_CASE("a single cell carries at most min of its endpoints") {
  FiniteMeasure mu{{rat(1, 4), rat(3, 4)}};
  FiniteMeasure nu{{rat(2, 3), rat(1, 3)}};
  BlockSet w{2, {{{0}, {0}}}};
  const auto r = transport::max_mass(mu, nu, w);
  CHECK(r.value == rat(1, 4));
  REQUIRE(r.plan.cells.size() == 1);
  CHECK(r.plan.cells[0].x == 0);
  CHECK(r.plan.cells[0].y == 0);
}

TEST_CASE("empty block set moves nothing and is covered for free") {
  FiniteMeasure mu{{rat(1), rat(1)}};
  FiniteMeasure nu{{rat(1), rat(1)}};
  BlockSet w{2, {}};
  CHECK(transport::max_mass(mu, nu, w).value == 0);
  const auto c = transport::min_cover(mu, nu, w);
  CHECK(c.value == 0);
  CHECK(c.U.empty());
  CHECK(c.V.empty());
}

TEST_CASE("mismatched dimensions are rejected") {
  FiniteMeasure mu{{rat(1)}};
  FiniteMeasure nu{{rat(1), rat(1)}};
  BlockSet w{2, {}};
  CHECK_THROWS_AS(transport::max_mass(mu, nu, w), std::invalid_argument);
  FiniteMeasure neg{{rat(-1), rat(1)}};
  CHECK_THROWS_AS(transport::max_mass(neg, nu, w), std::invalid_argument);
}

TEST_CASE("duality holds exactly on random instances") {
  rng::Stream s(801);
  for (int rep = 0; rep < 200; ++rep) {
    const int ground = 2 + static_cast<int>(s.uniform() * 7);  // up to 8
    const auto inst = random_instance(s, ground, 4);
    const auto mm = transport::max_mass(inst.mu, inst.nu, inst.w);
    const auto mc = transport::min_cover(inst.mu, inst.nu, inst.w);
    CHECK(mm.value == mc.value);

    // the plan is admissible: dominated marginals, supported on W
    CHECK(mm.plan.total() == mm.value);
    const auto m1 = mm.plan.first_marginal(ground);
    const auto m2 = mm.plan.second_marginal(ground);
    for (int i = 0; i < ground; ++i) {
      CHECK(m1[i] <= inst.mu.weights[i]);
      CHECK(m2[i] <= inst.nu.weights[i]);
    }
    for (const auto& c : mm.plan.cells) {
      CHECK(c.mass > 0);
      CHECK(inst.w.contains(c.x, c.y));
    }

    // the cover is valid
    const auto adj = inst.w.adjacency();
    std::vector<char> in_u(ground, 0), in_v(ground, 0);
    for (int x : mc.U) in_u[x] = 1;
    for (int y : mc.V) in_v[y] = 1;
    for (int x = 0; x < ground; ++x)
      for (int y = 0; y < ground; ++y)
        if (adj[x][y]) CHECK((in_u[x] || in_v[y]));
  }
}

TEST_CASE("min cover matches exhaustive search on small grounds") {
  rng::Stream s(802);
  for (int rep = 0; rep < 120; ++rep) {
    const int ground = 2 + static_cast<int>(s.uniform() * 3);  // up to 4
    const auto inst = random_instance(s, ground, 3);
    const auto mc = transport::min_cover(inst.mu, inst.nu, inst.w);
    CHECK(mc.value == brute_force_cover(inst.mu, inst.nu, inst.w));
  }
}

TEST_CASE("threshold cover covers W whenever f+g >= 1 on W") {
  const std::vector<Rat> f{rat(1, 2), rat(1, 2), rat(1)};
  const std::vector<Rat> g{rat(3, 4), rat(1, 2), rat(0)};
  BlockSet w{3, {{{0, 1}, {0, 1}}, {{2}, {2}}}};
  const auto c = transport::threshold_cover(f, g, rat(1, 3), w);
  std::vector<char> in_u(3, 0), in_v(3, 0);
  for (int x : c.U) in_u[x] = 1;
  for (int y : c.V) in_v[y] = 1;
  const auto adj = w.adjacency();
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if (adj[x][y]) CHECK((in_u[x] || in_v[y]));
}

TEST_CASE("threshold cover names an infeasible pair") {
  const std::vector<Rat> f{rat(1, 4)};
  const std::vector<Rat> g{rat(1, 2)};
  BlockSet w{1, {{{0}, {0}}}};
  try {
    transport::threshold_cover(f, g, rat(1, 2), w);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("(0,0)") != std::string::npos);
    CHECK(std::string(e.what()).find("3/4") != std::string::npos);
  }
  CHECK_THROWS_AS(transport::threshold_cover(f, g, rat(0), w),
                  std::domain_error);
}

TEST_CASE("threshold average is the clipped integral") {
  const std::vector<Rat> f{rat(1, 2), rat(3, 2), rat(0)};
  FiniteMeasure mu{{rat(1, 3), rat(1, 3), rat(1, 3)}};
  // min(f,1) integrates to (1/2 + 1 + 0)/3
  CHECK(transport::threshold_average(f, mu) == rat(1, 2));
  CHECK_THROWS_AS(transport::threshold_average({rat(1)}, mu),
                  std::invalid_argument);
}

TEST_CASE("some threshold beats the average cost") {
  rng::Stream s(803);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(s.uniform() * 5);
    std::vector<Rat> f, g;
    FiniteMeasure mu, nu;
    for (int i = 0; i < n; ++i) {
      f.push_back(rat(static_cast<long long>(s.uniform() * 13), 12));
      g.push_back(rat(static_cast<long long>(s.uniform() * 13), 12));
      mu.weights.push_back(rat(static_cast<long long>(s.uniform() * 7), 12));
      nu.weights.push_back(rat(static_cast<long long>(s.uniform() * 7), 12));
    }
    const auto [theta, cost] = transport::best_threshold(f, g, mu, nu);
    CHECK(theta > 0);
    CHECK(theta < 1);
    CHECK(cost <=
          transport::threshold_average(f, mu) + transport::threshold_average(g, nu));
  }
}

TEST_CASE("saturation is monotone and idempotent") {
  FinitePartition e{{0, 0, 1, 1, 2}};
  const auto s1 = transport::saturate({0}, e);
  CHECK(s1 == std::vector<int>{0, 1});
  const auto s2 = transport::saturate({0, 4}, e);
  CHECK(s2 == std::vector<int>{0, 1, 4});
  CHECK(transport::saturate(s2, e) == s2);
  CHECK(transport::saturate({}, e).empty());
}

TEST_CASE("maximal join with classwise equal masses yields exact marginals") {
  FiniteMeasure mu{{rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)}};
  FiniteMeasure nu{{rat(1, 4), rat(1, 2), rat(0), rat(1, 4)}};
  FinitePartition e{{0, 0, 1, 1}};
  const auto r = transport::maximal_join(mu, nu, e);
  REQUIRE(std::holds_alternative<transport::TransportPlan>(r));
  const auto& plan = std::get<transport::TransportPlan>(r);
  CHECK(plan.first_marginal(4) == mu.weights);
  CHECK(plan.second_marginal(4) == nu.weights);
  for (const auto& c : plan.cells) CHECK(e.related(c.x, c.y));
}

TEST_CASE("maximal join reports a witness class on mass mismatch") {
  FiniteMeasure mu{{rat(1, 2), rat(1, 2)}};
  FiniteMeasure nu{{rat(1, 4), rat(3, 4)}};
  FinitePartition e{{0, 1}};
  const auto r = transport::maximal_join(mu, nu, e);
  REQUIRE(std::holds_alternative<std::vector<int>>(r));
  const auto& witness = std::get<std::vector<int>>(r);
  CHECK(transport::saturate(witness, e) == witness);
  CHECK(mu.mass(witness) != nu.mass(witness));
}

TEST_CASE("instance parsing accepts mixed weight spellings") {
  std::istringstream is(
      R"({"ground": 2, "mu": ["1/2", 1], "nu": [0, "3/4"],
          "blocks": [[[0], [1]]]})");
  const auto inst = transport::parse_instance(is);
  CHECK(inst.mu.weights == std::vector<Rat>{rat(1, 2), rat(1)});
  CHECK(inst.nu.weights == std::vector<Rat>{rat(0), rat(3, 4)});
  CHECK(inst.w.contains(0, 1));
  CHECK_FALSE(inst.w.contains(1, 0));
}

TEST_CASE("instance parsing rejects malformed input") {
  std::istringstream bad_json("{not json");
  CHECK_THROWS_AS(transport::parse_instance(bad_json), std::invalid_argument);
  std::istringstream missing(R"({"ground": 1, "mu": [1]})");
  CHECK_THROWS_AS(transport::parse_instance(missing), std::invalid_argument);
  std::istringstream bad_weight(
      R"({"ground": 1, "mu": [0.5], "nu": [1], "blocks": []})");
  CHECK_THROWS_AS(transport::parse_instance(bad_weight), std::invalid_argument);
  std::istringstream bad_block(
      R"({"ground": 1, "mu": [1], "nu": [1], "blocks": [[[0]]]})");
  CHECK_THROWS_AS(transport::parse_instance(bad_block), std::invalid_argument);
}

TEST_CASE("plan export prints exact rationals") {
  transport::TransportPlan plan;
  plan.cells.push_back({0, 1, rat(1, 3)});
  std::ostringstream os;
  transport::write_plan_json(plan, os);
  CHECK(os.str().find("\"total\": \"1/3\"") != std::string::npos);
  CHECK(os.str().find("\"mass\": \"1/3\"") != std::string::npos);
}
