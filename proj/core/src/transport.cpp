#include "dcslab/transport.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dcslab/errors.hpp"

namespace dcs::transport {

Rat FiniteMeasure::total() const {
  Rat s = 0;
  for (const Rat& w : weights) s += w;
  return s;
}

Rat FiniteMeasure::mass(const std::vector<int>& subset) const {
  Rat s = 0;
  for (int i : subset) s += weights.at(static_cast<std::size_t>(i));
  return s;
}

bool BlockSet::contains(int x, int y) const {
  for (const auto& [u, v] : blocks) {
    if (std::find(u.begin(), u.end(), x) != u.end() &&
        std::find(v.begin(), v.end(), y) != v.end())
      return true;
  }
  return false;
}

std::vector<std::vector<char>> BlockSet::adjacency() const {
  std::vector<std::vector<char>> adj(
      static_cast<std::size_t>(ground),
      std::vector<char>(static_cast<std::size_t>(ground), 0));
  for (const auto& [u, v] : blocks)
    for (int x : u)
      for (int y : v) adj.at(x).at(y) = 1;
  return adj;
}

Rat TransportPlan::total() const {
  Rat s = 0;
  for (const auto& c : cells) s += c.mass;
  return s;
}

std::vector<Rat> TransportPlan::first_marginal(int ground) const {
  std::vector<Rat> m(static_cast<std::size_t>(ground), Rat(0));
  for (const auto& c : cells) m.at(c.x) += c.mass;
  return m;
}

std::vector<Rat> TransportPlan::second_marginal(int ground) const {
  std::vector<Rat> m(static_cast<std::size_t>(ground), Rat(0));
  for (const auto& c : cells) m.at(c.y) += c.mass;
  return m;
}

namespace {

void check_instance(const FiniteMeasure& mu, const FiniteMeasure& nu,
                    const BlockSet& w) {
  const std::size_t n = static_cast<std::size_t>(w.ground);
  if (mu.size() != n || nu.size() != n)
    throw std::invalid_argument("measure dimensions do not match ground set");
  for (const Rat& x : mu.weights)
    if (x < 0) throw std::invalid_argument("mu has a negative weight");
  for (const Rat& x : nu.weights)
    if (x < 0) throw std::invalid_argument("nu has a negative weight");
}

// Edmonds-Karp on the bipartite network: 0 = source, 1..n = x-side,
// n+1..2n = y-side, 2n+1 = sink. Block edges get total-mass capacity, a
// valid stand-in for infinity.
struct FlowNetwork {
  int n;
  std::vector<std::vector<Rat>> cap;  // residual capacities

  FlowNetwork(const FiniteMeasure& mu, const FiniteMeasure& nu,
              const BlockSet& w)
      : n(w.ground),
        cap(static_cast<std::size_t>(2 * w.ground + 2),
            std::vector<Rat>(static_cast<std::size_t>(2 * w.ground + 2),
                             Rat(0))) {
    const Rat inf_cap = mu.total() + nu.total() + 1;
    const auto adj = w.adjacency();
    for (int i = 0; i < n; ++i) {
      cap[0][1 + i] = mu.weights[i];
      cap[1 + n + i][2 * n + 1] = nu.weights[i];
      for (int j = 0; j < n; ++j)
        if (adj[i][j]) cap[1 + i][1 + n + j] = inf_cap;
    }
  }

  int source() const { return 0; }
  int sink() const { return 2 * n + 1; }

  Rat run() {
    Rat flow = 0;
    const int s = source(), t = sink();
    const int m = 2 * n + 2;
    while (true) {
      std::vector<int> prev(static_cast<std::size_t>(m), -1);
      prev[s] = s;
      std::deque<int> queue{s};
      while (!queue.empty() && prev[t] < 0) {
        const int u = queue.front();
        queue.pop_front();
        for (int v = 0; v < m; ++v)
          if (prev[v] < 0 && cap[u][v] > 0) {
            prev[v] = u;
            queue.push_back(v);
          }
      }
      if (prev[t] < 0) break;
      Rat push = cap[prev[t]][t];
      for (int v = t; v != s; v = prev[v])
        push = std::min(push, cap[prev[v]][v]);
      for (int v = t; v != s; v = prev[v]) {
        cap[prev[v]][v] -= push;
        cap[v][prev[v]] += push;
      }
      flow += push;
    }
    return flow;
  }

  std::vector<char> reachable() const {
    const int m = 2 * n + 2;
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    std::deque<int> queue{source()};
    seen[source()] = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < m; ++v)
        if (!seen[v] && cap[u][v] > 0) {
          seen[v] = 1;
          queue.push_back(v);
        }
    }
    return seen;
  }
};

}  // namespace

MaxMassResult max_mass(const FiniteMeasure& mu, const FiniteMeasure& nu,
                       const BlockSet& w) {
  check_instance(mu, nu, w);
  FlowNetwork net(mu, nu, w);
  // keep pristine capacities to recover per-edge flow
  FlowNetwork pristine = net;
  MaxMassResult r;
  r.value = net.run();
  const int n = w.ground;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Rat f = pristine.cap[1 + i][1 + n + j] - net.cap[1 + i][1 + n + j];
      if (f > 0) r.plan.cells.push_back({i, j, f});
    }
  return r;
}

MinCoverResult min_cover(const FiniteMeasure& mu, const FiniteMeasure& nu,
                         const BlockSet& w) {
  check_instance(mu, nu, w);
  FlowNetwork net(mu, nu, w);
  net.run();
  const auto seen = net.reachable();
  MinCoverResult r;
  const int n = w.ground;
  // cut edges: source->x for unreachable x, y->sink for reachable y
  for (int i = 0; i < n; ++i)
    if (!seen[1 + i]) r.U.push_back(i);
  for (int j = 0; j < n; ++j)
    if (seen[1 + n + j]) r.V.push_back(j);
  r.value = mu.mass(r.U) + nu.mass(r.V);
  return r;
}

ThresholdCover threshold_cover(const std::vector<Rat>& f,
                               const std::vector<Rat>& g, const Rat& theta,
                               const BlockSet& w) {
  if (theta <= 0 || theta >= 1)
    throw std::domain_error("theta must be in (0,1)");
  const auto adj = w.adjacency();
  for (int x = 0; x < w.ground; ++x)
    for (int y = 0; y < w.ground; ++y)
      if (adj[x][y] && f.at(x) + g.at(y) < 1) {
        std::ostringstream os;
        os << "infeasible pair (" << x << "," << y << "): f+g = "
           << to_string(f.at(x) + g.at(y));
        throw std::invalid_argument(os.str());
      }
  ThresholdCover c;
  for (int x = 0; x < w.ground; ++x)
    if (f.at(x) >= theta) c.U.push_back(x);
  for (int y = 0; y < w.ground; ++y)
    if (g.at(y) >= 1 - theta) c.V.push_back(y);
  return c;
}

Rat threshold_average(const std::vector<Rat>& f, const FiniteMeasure& mu) {
  if (f.size() != mu.size())
    throw std::invalid_argument("dimension mismatch");
  // integral over theta of mu{f >= theta} = sum mu(x) min(f(x), 1)
  Rat s = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    s += mu.weights[i] * std::min(f[i], Rat(1));
  return s;
}

std::pair<Rat, Rat> best_threshold(const std::vector<Rat>& f,
                                   const std::vector<Rat>& g,
                                   const FiniteMeasure& mu,
                                   const FiniteMeasure& nu) {
  std::set<Rat> breaks;
  for (const Rat& v : f)
    if (v > 0 && v < 1) breaks.insert(v);
  for (const Rat& v : g)
    if (v > 0 && v < 1) breaks.insert(1 - v);
  std::vector<Rat> cands(breaks.begin(), breaks.end());
  std::vector<Rat> thetas;
  Rat lo = 0;
  for (const Rat& b : cands) {
    thetas.push_back((lo + b) / 2);
    thetas.push_back(b);
    lo = b;
  }
  thetas.push_back((lo + 1) / 2);

  auto cost = [&](const Rat& theta) {
    Rat c = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i] >= theta) c += mu.weights[i];
    for (std::size_t j = 0; j < g.size(); ++j)
      if (g[j] >= 1 - theta) c += nu.weights[j];
    return c;
  };

  Rat best_theta = thetas.front();
  Rat best_cost = cost(best_theta);
  for (const Rat& th : thetas) {
    const Rat c = cost(th);
    if (c < best_cost) {
      best_cost = c;
      best_theta = th;
    }
  }
  return {best_theta, best_cost};
}

std::vector<std::vector<int>> FinitePartition::classes() const {
  std::map<int, std::vector<int>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_label[labels[i]].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> out;
  out.reserve(by_label.size());
  for (auto& [_, members] : by_label) out.push_back(std::move(members));
  return out;
}

std::vector<int> saturate(const std::vector<int>& a, const FinitePartition& e) {
  std::set<int> hit_labels;
  for (int x : a) hit_labels.insert(e.labels.at(static_cast<std::size_t>(x)));
  std::vector<int> out;
  for (std::size_t i = 0; i < e.labels.size(); ++i)
    if (hit_labels.count(e.labels[i])) out.push_back(static_cast<int>(i));
  return out;
}

JoinResult maximal_join(const FiniteMeasure& mu, const FiniteMeasure& nu,
                        const FinitePartition& e) {
  if (mu.size() != e.size() || nu.size() != e.size())
    throw std::invalid_argument("dimension mismatch");
  for (const auto& cls : e.classes()) {
    if (mu.mass(cls) != nu.mass(cls)) return JoinResult{cls};  // saturated witness
  }
  // per-class northwest-corner transport
  TransportPlan plan;
  for (const auto& cls : e.classes()) {
    std::vector<Rat> rem_mu, rem_nu;
    for (int i : cls) {
      rem_mu.push_back(mu.weights[static_cast<std::size_t>(i)]);
      rem_nu.push_back(nu.weights[static_cast<std::size_t>(i)]);
    }
    std::size_t i = 0, j = 0;
    while (i < cls.size() && j < cls.size()) {
      if (rem_mu[i] == 0) {
        ++i;
        continue;
      }
      if (rem_nu[j] == 0) {
        ++j;
        continue;
      }
      const Rat m = std::min(rem_mu[i], rem_nu[j]);
      plan.cells.push_back({cls[i], cls[j], m});
      rem_mu[i] -= m;
      rem_nu[j] -= m;
    }
  }
  return JoinResult{plan};
}

Rat parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos)
    return Rat(boost::multiprecision::cpp_int(text));
  const boost::multiprecision::cpp_int num(text.substr(0, slash));
  const boost::multiprecision::cpp_int den(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: " + text);
  return Rat(num, den);
}

std::string to_string(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

namespace {

Rat rational_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer())
    return Rat(boost::multiprecision::cpp_int(v.get<long long>()));
  throw std::invalid_argument(
      "weights must be integers or \"p/q\" strings, got: " + v.dump());
}

}  // namespace

Instance parse_instance(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance JSON: ") +
                                e.what());
  }
  if (!j.contains("ground") || !j.contains("mu") || !j.contains("nu") ||
      !j.contains("blocks"))
    throw std::invalid_argument(
        "instance needs fields ground, mu, nu, blocks");
  Instance inst;
  inst.w.ground = j["ground"].get<int>();
  for (const auto& v : j["mu"]) inst.mu.weights.push_back(rational_from_json(v));
  for (const auto& v : j["nu"]) inst.nu.weights.push_back(rational_from_json(v));
  for (const auto& b : j["blocks"]) {
    if (!b.is_array() || b.size() != 2)
      throw std::invalid_argument("each block must be a [U, V] pair");
    std::pair<std::vector<int>, std::vector<int>> blk;
    for (const auto& x : b[0]) blk.first.push_back(x.get<int>());
    for (const auto& y : b[1]) blk.second.push_back(y.get<int>());
    inst.w.blocks.push_back(std::move(blk));
  }
  check_instance(inst.mu, inst.nu, inst.w);
  return inst;
}

void write_plan_json(const TransportPlan& plan, std::ostream& os) {
  nlohmann::ordered_json j;
  j["total"] = to_string(plan.total());
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : plan.cells)
    j["cells"].push_back({{"x", c.x}, {"y", c.y}, {"mass", to_string(c.mass)}});
  os << j.dump(2) << '\n';
}

}  // namespace dcs::transport
