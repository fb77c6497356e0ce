#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

// Finite-ground-set marriage-lemma duality: the maximal mass of a plan with
// dominated marginals supported on a block set equals the cheapest cover
// cost, exactly, via max-flow/min-cut in rational arithmetic.
namespace dcs::transport {

using Rat = boost::multiprecision::cpp_rational;

struct FiniteMeasure {
  std::vector<Rat> weights;  // >= 0

  std::size_t size() const { return weights.size(); }
  Rat total() const;
  Rat mass(const std::vector<int>& subset) const;
};

// W = union of U_i x V_i, index sets over a ground set of size n.
struct BlockSet {
  int ground = 0;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> blocks;

  bool contains(int x, int y) const;
  // dense adjacency, ground x ground
  std::vector<std::vector<char>> adjacency() const;
};

struct PlanCell {
  int x = 0;
  int y = 0;
  Rat mass;
};

struct TransportPlan {
  std::vector<PlanCell> cells;
  Rat total() const;
  std::vector<Rat> first_marginal(int ground) const;
  std::vector<Rat> second_marginal(int ground) const;
};

struct MaxMassResult {
  Rat value;
  TransportPlan plan;
};

struct MinCoverResult {
  std::vector<int> U;
  std::vector<int> V;
  Rat value;
};

// sup { m(W) : m_1 <= mu, m_2 <= nu }, realized by bipartite max-flow.
MaxMassResult max_mass(const FiniteMeasure& mu, const FiniteMeasure& nu,
                       const BlockSet& W);

// inf { mu(U) + nu(V) : W subset (U x B) u (B x V) }, from the min-cut of
// the same network; equals max_mass exactly.
MinCoverResult min_cover(const FiniteMeasure& mu, const FiniteMeasure& nu,
                         const BlockSet& W);

// Threshold sets of the duality proof: U_theta = {f >= theta},
// V_theta = {g >= 1 - theta}.
struct ThresholdCover {
  std::vector<int> U;
  std::vector<int> V;
};
// Throws std::invalid_argument naming a violating pair if f(x)+g(y) < 1
// somewhere on W.
ThresholdCover threshold_cover(const std::vector<Rat>& f,
                               const std::vector<Rat>& g, const Rat& theta,
                               const BlockSet& W);

// Exact breakpoint scan: integral over theta in (0,1) of mu(U_theta).
Rat threshold_average(const std::vector<Rat>& f, const FiniteMeasure& mu);
// Some theta whose cover cost is <= integral f dmu + integral g dnu.
std::pair<Rat, Rat> best_threshold(const std::vector<Rat>& f,
                                   const std::vector<Rat>& g,
                                   const FiniteMeasure& mu,
                                   const FiniteMeasure& nu);

struct FinitePartition {
  std::vector<int> labels;  // class label per ground element

  std::size_t size() const { return labels.size(); }
  bool related(int x, int y) const { return labels[x] == labels[y]; }
  std::vector<std::vector<int>> classes() const;
};

// Union of the classes meeting A; idempotent.
std::vector<int> saturate(const std::vector<int>& a, const FinitePartition& e);

// If mu == nu on every saturated set, a plan concentrated on the relation
// with exact marginals; otherwise a saturated witness set where they differ.
using JoinResult = std::variant<TransportPlan, std::vector<int>>;
JoinResult maximal_join(const FiniteMeasure& mu, const FiniteMeasure& nu,
                        const FinitePartition& e);

// JSON instance: {ground: n, mu: [...], nu: [...], blocks: [[[..],[..]],..]};
// weights may be integers or "p/q" strings.
struct Instance {
  FiniteMeasure mu, nu;
  BlockSet w;
};
Instance parse_instance(std::istream& is);
void write_plan_json(const TransportPlan& plan, std::ostream& os);

Rat parse_rational(const std::string& text);
std::string to_string(const Rat& r);

}  // namespace dcs::transport
