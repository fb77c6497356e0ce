// dcslab: simulation and verification lab for random dense countable sets.
// Subcommands cover the five module families; `selftest` runs them all with
// small parameters. Exit codes: 0 ok, 1 statistical failure, 2 usage error,
// 3 internal error.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dcslab/quadrature.hpp"

#include "dcslab/bridge_densities.hpp"
#include "dcslab/brownian.hpp"
#include "dcslab/enumeration.hpp"
#include "dcslab/errors.hpp"
#include "dcslab/poisson_coupling.hpp"
#include "dcslab/rational_joining.hpp"
#include "dcslab/rng.hpp"
#include "dcslab/stats.hpp"
#include "dcslab/transport.hpp"

namespace fs = std::filesystem;
using namespace dcs;
using nlohmann::ordered_json;

namespace {

struct Config {
  std::map<std::string, std::string> kv;  // sorted, deterministic

  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }
  double get_d(const std::string& key, double fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
  }
  long long get_i(const std::string& key, long long fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoll(it->second);
  }
};

// flat key=value lines; '#' starts a comment
Config load_config(const std::string& path) {
  Config cfg;
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": empty key");
    cfg.kv[key] = value;
  }
  return cfg;
}

ordered_json config_json(const Config& cfg) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : cfg.kv) j[k] = v;
  return j;
}

void write_config_comment(std::ostream& os, const Config& cfg) {
  os << "# config";
  for (const auto& [k, v] : cfg.kv) os << ' ' << k << '=' << v;
  os << '\n';
}

struct Context {
  std::uint64_t seed = 1;
  long long replicas = 0;  // 0 = per-command default
  fs::path out_dir = "out";
  Config cfg;

  long long reps(long long fallback) const {
    return replicas > 0 ? replicas : cfg.get_i("replicas", fallback);
  }
  fs::path out(const std::string& name) const { return out_dir / name; }
};

void write_reports(const Context& ctx, const std::string& stem,
                   const std::vector<stats::TestReport>& reports) {
  std::ostringstream tmp;
  stats::write_reports_json(reports, tmp);
  ordered_json j;
  j["config"] = config_json(ctx.cfg);
  j["reports"] = nlohmann::json::parse(tmp.str());
  std::ofstream js(ctx.out(stem + "_reports.json"));
  js << j.dump(2) << '\n';
  std::ofstream cs(ctx.out(stem + "_reports.csv"));
  write_config_comment(cs, ctx.cfg);
  stats::write_reports_csv(reports, cs);
}

void write_wrapped_json(const Context& ctx, const std::string& name,
                        const std::string& field, const std::string& payload) {
  ordered_json j;
  j["config"] = config_json(ctx.cfg);
  j[field] = nlohmann::json::parse(payload);
  std::ofstream os(ctx.out(name));
  os << j.dump(2) << '\n';
}

stats::TestReport flag_report(std::string id, bool pass, double statistic,
                              std::string note = "") {
  stats::TestReport r;
  r.id = std::move(id);
  r.statistic = statistic;
  r.p_value = pass ? 1.0 : 0.0;
  r.pass = pass;
  r.note = std::move(note);
  return r;
}

// ---------------------------------------------------------------- minima

std::vector<stats::TestReport> cmd_minima(const Context& ctx) {
  const int depth = static_cast<int>(ctx.cfg.get_i("depth", 12));
  const std::size_t m = static_cast<std::size_t>(ctx.cfg.get_i("m", 16));
  const long long reps = ctx.reps(200);

  std::vector<double> first_points;
  std::size_t distinct_violations = 0, level_violations = 0;
  for (long long r = 0; r < reps; ++r) {
    const auto path =
        brownian::sample_path(depth, rng::derive(ctx.seed, r));
    const auto e = enumeration::enumerate_minimizers(path, m);
    first_points.push_back(e.xs.front());
    std::set<double> uniq(e.xs.begin(), e.xs.end());
    if (uniq.size() != e.xs.size()) ++distinct_violations;
    for (int k = 1; (std::size_t{1} << k) <= m && k <= 3; ++k) {
      auto head = std::vector<double>(e.xs.begin(),
                                      e.xs.begin() + (std::size_t{1} << k));
      auto level = enumeration::level_argmins(path, k);
      std::sort(head.begin(), head.end());
      std::sort(level.begin(), level.end());
      if (head != level) ++level_violations;
    }
    if (r == 0) {
      std::ofstream os(ctx.out("minima.csv"));
      write_config_comment(os, ctx.cfg);
      enumeration::write_csv(e, os);
      std::ofstream ps(ctx.out("path.csv"));
      write_config_comment(ps, ctx.cfg);
      brownian::write_csv(path, ps);
    }
  }

  std::vector<stats::TestReport> reports;
  reports.push_back(stats::ks_test(first_points, stats::arcsine_cdf,
                                   stats::kDefaultSignificance,
                                   "minima-arcsine"));
  reports.push_back(flag_report("minima-distinct", distinct_violations == 0,
                                static_cast<double>(distinct_violations)));
  reports.push_back(flag_report("minima-level-property",
                                level_violations == 0,
                                static_cast<double>(level_violations)));
  return reports;
}

// --------------------------------------------------------------- density

std::vector<stats::TestReport> cmd_density(const Context& ctx) {
  const double a = ctx.cfg.get_d("a", 1.0);
  const double b = ctx.cfg.get_d("b", 2.0);
  const int depth = static_cast<int>(ctx.cfg.get_i("depth", 12));
  const long long reps = ctx.reps(3000);
  const int bins = static_cast<int>(ctx.cfg.get_i("bins", 10));

  {
    std::ofstream p(ctx.out("phi_plain.csv")), w(ctx.out("phi_weighted.csv"));
    write_config_comment(p, ctx.cfg);
    write_config_comment(w, ctx.cfg);
    densities::write_phi_table_csv(a, b, densities::PhiVariant::plain, 64, {},
                                   p);
    densities::write_phi_table_csv(a, b, densities::PhiVariant::time_weighted,
                                   64, {}, w);
  }

  std::vector<stats::TestReport> reports;
  const double closed = std::sqrt(2.0 / 3.14159265358979323846) *
                        std::exp(0.5 * (a - b) * (a - b)) /
                        (1.0 - std::exp(-2.0 * a * b));
  const double got =
      densities::phi_norm_const(a, b, densities::PhiVariant::time_weighted);
  const double rel = std::abs(got - closed) / closed;
  reports.push_back(
      flag_report("density-norm-closed-form", rel < 1e-4, rel));

  // argmin locations of positive bridges adjudicate the two variants
  std::vector<double> ts;
  for (long long r = 0; r < reps; ++r) {
    const auto path =
        brownian::sample_bridge(a, b, depth, rng::derive(ctx.seed, r));
    const auto am = brownian::global_argmin(path);
    if (am.m > 0.0 && am.index > 0 && am.index + 1 < path.grid_size())
      ts.push_back(am.t);
  }
  double p_plain = 0.0, p_weighted = 0.0;
  for (auto v : {densities::PhiVariant::plain,
                 densities::PhiVariant::time_weighted}) {
    std::vector<double> probs(bins, 0.0);
    std::vector<std::size_t> counts(bins, 0);
    const double kPi = 3.14159265358979323846;
    for (int k = 0; k < bins; ++k) {
      auto f = [&](double s) {
        const double si = std::sin(0.5 * kPi * s);
        const double t = si * si;
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return densities::phi(a, b, t, v) * 0.5 * kPi * std::sin(kPi * s);
      };
      const double s_lo =
          2.0 / kPi * std::asin(std::sqrt(static_cast<double>(k) / bins));
      const double s_hi =
          2.0 / kPi * std::asin(std::sqrt(static_cast<double>(k + 1) / bins));
      probs[k] = quad::integrate(f, s_lo, s_hi, 1e-8).value;
    }
    for (double t : ts)
      ++counts[std::min(bins - 1, static_cast<int>(t * bins))];
    const auto r = stats::chi_square_counts(counts, probs);
    (v == densities::PhiVariant::plain ? p_plain : p_weighted) = r.p_value;
  }
  const bool adjudicated = p_weighted > 1e-3 && p_plain < 1e-3;
  reports.push_back(flag_report(
      "density-variant-adjudication", adjudicated, p_plain,
      adjudicated ? "time-weighted variant fits, plain rejected" :
                    "inconclusive"));
  reports.back().p_value = p_weighted;
  reports.back().n = ts.size();
  return reports;
}

// -------------------------------------------------------------- coupling

coupling::DensityOracle oracle_by_name(const std::string& name) {
  if (name == "uniform") return coupling::uniform_oracle();
  if (name == "cosine") return coupling::cosine_markov_oracle();
  if (name == "triangle")
    return coupling::iid_oracle("triangle",
                                [](double x) { return 2.0 * x; });
  throw std::invalid_argument("unknown oracle: " + name +
                              " (want uniform|cosine|triangle)");
}

std::vector<stats::TestReport> cmd_coupling(const Context& ctx) {
  const double height = ctx.cfg.get_d("height", 30.0);
  const std::size_t n_max =
      static_cast<std::size_t>(ctx.cfg.get_i("n_max", 8));
  const long long reps = ctx.reps(400);
  const auto oracle = oracle_by_name(ctx.cfg.get("oracle", "uniform"));

  std::vector<double> pooled_t;
  std::vector<long long> counts;
  std::vector<std::vector<double>> t_rows;
  for (long long r = 0; r < reps; ++r) {
    const auto strip =
        coupling::sample_strip(height, rng::derive(ctx.seed, r));
    const auto trace = coupling::run_coupling_on(strip, oracle, n_max);
    counts.push_back(static_cast<long long>(strip.points.size()));
    if (trace.steps.size() == n_max) {
      std::vector<double> row;
      for (const auto& s : trace.steps) {
        pooled_t.push_back(s.t);
        row.push_back(s.t);
      }
      t_rows.push_back(std::move(row));
    }
    if (r == 0) {
      std::ostringstream tmp;
      coupling::write_trace_json(trace, strip, tmp);
      write_wrapped_json(ctx, "trace.json", "trace", tmp.str());
      std::ofstream cs(ctx.out("trace.csv"));
      write_config_comment(cs, ctx.cfg);
      coupling::write_trace_csv(trace, cs);
    }
  }

  std::vector<stats::TestReport> reports;
  reports.push_back(stats::ks_test(pooled_t, stats::exp1_cdf,
                                   stats::kDefaultSignificance,
                                   "coupling-exp1"));
  reports.push_back(stats::poisson_dispersion(counts,
                                              stats::kDefaultSignificance,
                                              "coupling-poisson-counts"));
  const auto div =
      coupling::divergence_diagnostics(t_rows, {0.01, 0.1, 1.0});
  reports.push_back(flag_report("coupling-profile-vanishing",
                                div.profile_vanishing,
                                div.sup_profile.front()));
  reports.push_back(flag_report("coupling-sums-diverging", div.sums_diverging,
                                div.mean_partial_sums.back()));
  return reports;
}

// --------------------------------------------------------------- duality

std::vector<stats::TestReport> cmd_duality(const Context& ctx) {
  transport::Instance inst;
  const std::string path = ctx.cfg.get("instance", "");
  if (!path.empty()) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open instance: " + path);
    inst = transport::parse_instance(is);
  } else {
    std::istringstream demo(
        R"({"ground": 4,
            "mu": ["1/4", "1/4", "1/4", "1/4"],
            "nu": ["1/2", "1/6", "1/6", "1/6"],
            "blocks": [[[0, 1], [0, 1]], [[2], [2, 3]], [[3], [0]]]})");
    inst = transport::parse_instance(demo);
  }

  const auto mm = transport::max_mass(inst.mu, inst.nu, inst.w);
  const auto mc = transport::min_cover(inst.mu, inst.nu, inst.w);
  {
    std::ostringstream tmp;
    transport::write_plan_json(mm.plan, tmp);
    write_wrapped_json(ctx, "plan.json", "plan", tmp.str());
    ordered_json j;
    j["config"] = config_json(ctx.cfg);
    j["max_mass"] = transport::to_string(mm.value);
    j["min_cover"] = transport::to_string(mc.value);
    j["cover_U"] = mc.U;
    j["cover_V"] = mc.V;
    std::ofstream os(ctx.out("duality.json"));
    os << j.dump(2) << '\n';
  }

  std::vector<stats::TestReport> reports;
  reports.push_back(flag_report(
      "duality-exact", mm.value == mc.value,
      static_cast<double>(mm.value - mc.value),
      transport::to_string(mm.value) + " vs " + transport::to_string(mc.value)));

  // randomized batch: duality and plan admissibility on small instances
  const long long reps = ctx.reps(100);
  rng::Stream s(rng::derive(ctx.seed, 0x6475616cULL));
  std::size_t violations = 0;
  for (long long r = 0; r < reps; ++r) {
    const int ground = 2 + static_cast<int>(s.uniform() * 5);
    transport::FiniteMeasure mu, nu;
    transport::BlockSet w;
    w.ground = ground;
    for (int i = 0; i < ground; ++i) {
      mu.weights.push_back(transport::Rat(
          static_cast<long long>(s.uniform() * 7), 12));
      nu.weights.push_back(transport::Rat(
          static_cast<long long>(s.uniform() * 7), 12));
    }
    const int nb = 1 + static_cast<int>(s.uniform() * 3);
    for (int bix = 0; bix < nb; ++bix) {
      std::vector<int> u, v;
      for (int i = 0; i < ground; ++i) {
        if (s.uniform() < 0.4) u.push_back(i);
        if (s.uniform() < 0.4) v.push_back(i);
      }
      if (!u.empty() && !v.empty()) w.blocks.push_back({u, v});
    }
    const auto rmm = transport::max_mass(mu, nu, w);
    const auto rmc = transport::min_cover(mu, nu, w);
    if (rmm.value != rmc.value || rmm.plan.total() != rmm.value) ++violations;
  }
  reports.push_back(flag_report("duality-random-batch", violations == 0,
                                static_cast<double>(violations)));
  return reports;
}

// -------------------------------------------------------------- rational

std::vector<stats::TestReport> cmd_rational(const Context& ctx) {
  const long long L = ctx.cfg.get_i("denom", 256);
  const auto f = joining::uniform_grid(0, L, L);
  const auto g = joining::truncated_exponential_grid(L, L);
  std::vector<long long> shifts;
  for (long long q = -L; q <= L; ++q) shifts.push_back(q);
  const auto plan = joining::greedy_join(f, g, shifts, 4);

  {
    std::ostringstream tmp;
    joining::write_plan_json(plan, tmp);
    write_wrapped_json(ctx, "rational_plan.json", "plan", tmp.str());
    std::ofstream fs_(ctx.out("density_f.csv")), gs(ctx.out("density_g.csv"));
    write_config_comment(fs_, ctx.cfg);
    write_config_comment(gs, ctx.cfg);
    joining::write_density_csv(f, fs_);
    joining::write_density_csv(g, gs);
  }

  std::vector<stats::TestReport> reports;
  reports.push_back(flag_report("rational-residual",
                                plan.residual_mass() < 1e-9,
                                plan.residual_mass()));
  const auto m = joining::plan_marginals(plan);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    worst = std::max(worst, std::abs(m.first.values[i] +
                                     plan.f_res.values[i] - f.values[i]));
  for (std::size_t j = 0; j < g.values.size(); ++j)
    worst = std::max(worst, std::abs(m.second.values[j] +
                                     plan.g_res.values[j] - g.values[j]));
  reports.push_back(flag_report("rational-marginals", worst < 1e-9, worst));
  const auto rat = joining::verify_rationality(plan);
  reports.push_back(flag_report(
      "rational-shifts", rat.all_rational && rat.denominator_bound <= L,
      static_cast<double>(rat.denominator_bound)));
  return reports;
}

// -------------------------------------------------------------- selftest

std::vector<stats::TestReport> cmd_selftest(Context ctx) {
  // small parameters; command defaults otherwise
  ctx.cfg.kv.insert({"depth", "10"});
  ctx.cfg.kv.insert({"m", "8"});
  ctx.cfg.kv.insert({"denom", "64"});
  if (ctx.replicas == 0) ctx.replicas = 150;
  std::vector<stats::TestReport> all;
  for (const auto& [stem, fn] :
       std::vector<std::pair<std::string,
                             std::vector<stats::TestReport> (*)(
                                 const Context&)>>{
           {"minima", cmd_minima},
           {"density", cmd_density},
           {"coupling", cmd_coupling},
           {"duality", cmd_duality},
           {"rational", cmd_rational}}) {
    Context sub = ctx;
    // the variant adjudication needs enough conditioned bridges to separate
    // the two candidate densities
    if (stem == "density" && sub.replicas < 1500) sub.replicas = 1500;
    auto reports = fn(sub);
    write_reports(ctx, stem, reports);
    for (auto& r : reports) {
      r.id = stem + "/" + r.id;
      all.push_back(std::move(r));
    }
  }
  return all;
}

int run(const std::string& command, Context& ctx, bool print_json) {
  fs::create_directories(ctx.out_dir);
  std::vector<stats::TestReport> reports;
  if (command == "minima") reports = cmd_minima(ctx);
  else if (command == "density") reports = cmd_density(ctx);
  else if (command == "coupling") reports = cmd_coupling(ctx);
  else if (command == "duality") reports = cmd_duality(ctx);
  else if (command == "rational") reports = cmd_rational(ctx);
  else if (command == "selftest") reports = cmd_selftest(ctx);
  if (command != "selftest") write_reports(ctx, command, reports);

  bool all_pass = true;
  ordered_json suites = ordered_json::array();
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    const std::string stem =
        command == "selftest" ? r.id.substr(0, r.id.find('/')) : command;
    suites.push_back({{"name", r.id},
                      {"pass", r.pass},
                      {"details_path", (ctx.out_dir / (stem + "_reports.json"))
                                           .string()}});
  }
  ordered_json summary;
  summary["command"] = command;
  summary["config"] = config_json(ctx.cfg);
  summary["suites"] = suites;
  {
    std::ofstream os(ctx.out("summary.json"));
    os << summary.dump(2) << '\n';
  }
  if (print_json) std::cout << summary.dump(2) << '\n';
  else {
    for (const auto& r : reports)
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.id
                << (r.note.empty() ? "" : "  (" + r.note + ")") << '\n';
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random dense countable set laboratory"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  long long replicas = 0;
  std::string out_dir = "out";
  std::string config_path;
  bool json_out = false;
  app.add_option("--seed", seed, "base RNG seed");
  app.add_option("--replicas", replicas, "replica count (0 = default)");
  app.add_option("--out-dir", out_dir, "artifact directory");
  app.add_option("--config", config_path, "key=value config file");
  app.add_flag("--json", json_out, "print the summary as JSON");

  for (const char* name :
       {"minima", "density", "coupling", "duality", "rational", "selftest"})
    app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Context ctx;
  ctx.seed = seed;
  ctx.replicas = replicas;
  ctx.out_dir = out_dir;
  try {
    if (!config_path.empty()) ctx.cfg = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  // flags override config and are embedded alongside it
  ctx.cfg.kv["version"] = "0.1.0";
  ctx.cfg.kv["seed"] = std::to_string(seed);
  if (replicas > 0) ctx.cfg.kv["replicas"] = std::to_string(replicas);
  ctx.cfg.kv["out_dir"] = out_dir;

  try {
    return run(app.get_subcommands().front()->get_name(), ctx, json_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
