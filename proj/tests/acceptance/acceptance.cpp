// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any gating criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ndet/avgcase.hpp"
#include "ndet/faultmodels.hpp"
#include "ndet/report.hpp"
#include "ndet/worstcase.hpp"
#include "oracles.hpp"

using namespace ndet;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string data(const char* name) { return oracle::read_file(std::string(NDET_TEST_DATA) + "/" + name); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome table1() {
  const auto t0 = Clock::now();
  const auto u = load_fixture(data("table1.fixture"), "table1");
  std::vector<std::size_t> pairs;
  for (const auto& t : u.targets) {
    const auto r = pair_requirement(t.tests, u.untargeted.at(0).tests);
    pairs.push_back(r ? r->n_min() : 0);
  }
  const auto n = worst_case(u);
  const double secs = seconds_since(t0);
  const std::vector<std::string> labels{"1/1", "2/0", "3/0", "8/0", "9/1", "10/0", "11/0"};
  std::vector<std::string> got_labels;
  for (const auto& t : u.targets) got_labels.push_back(t.label);

  Outcome o;
  o.pass = pairs == std::vector<std::size_t>{3, 5, 5, 4, 11, 3, 11} && got_labels == labels && n.size() == 1 &&
           n[0] == NMin{3} && secs < 1.0;
  std::string list;
  for (std::size_t p : pairs) list += (list.empty() ? "" : ",") + std::to_string(p);
  o.detail = "pairs {" + list + "}, n_min(g0)=" + (n.size() == 1 && n[0] ? std::to_string(*n[0]) : "?") + ", " +
             fmt("%.3f s", secs);
  return o;
}

Outcome table4() {
  const auto u = load_fixture(data("table4.fixture"), "table4");
  const auto e = load_snapshots(data("table4.snapshots"));
  const auto p = estimate_probabilities(e, u);
  Outcome o;
  const std::string p1 = format_probability(p.p(1, 0)), p2 = format_probability(p.p(2, 0));
  o.pass = e.trials() == 10 && p.d(1, 0) == 2 && p.d(2, 0) == 4 && p1 == "0.200" && p2 == "0.400";
  o.detail = "d(1)=" + std::to_string(p.d(1, 0)) + " p=" + p1 + ", d(2)=" + std::to_string(p.d(2, 0)) + " p=" + p2;
  return o;
}

// Detection sets recomputed by the per-vector interpreter, independent of the
// packed simulator used to build the universe.
std::vector<std::set<VectorId>> oracle_target_sets(const Circuit& c, const DetectionUniverse& u) {
  std::vector<std::set<VectorId>> out;
  for (const auto& t : u.targets) out.push_back(oracle::naive_detection(c, t.fault));
  return out;
}

bool valid_n_detection(const std::vector<std::set<VectorId>>& targets, const std::vector<bool>& in, std::size_t n) {
  for (const auto& tf : targets) {
    std::size_t hits = 0;
    for (VectorId v : tf) hits += in[v];
    if (hits < n && hits < tf.size()) return false;
  }
  return true;
}

Outcome guarantee() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t circuits = 0, bounded = 0, sets = 0, violations = 0;
  while (circuits < 60) {
    const std::size_t p = 2 + rng() % 3;
    auto c = std::make_shared<Circuit>(oracle::random_circuit(rng, p, 2 + rng() % 11));
    const auto u = build_universe(c, true);
    if (u.untargeted.empty() || u.targets.empty()) continue;
    ++circuits;
    const auto tsets = oracle_target_sets(*c, u);
    const auto n_min = worst_case(u);
    const std::size_t nv = c->num_vectors();
    for (std::size_t g = 0; g < u.untargeted.size(); ++g) {
      if (!n_min[g]) continue;
      ++bounded;
      const std::size_t n = *n_min[g];
      const auto tg = oracle::naive_detection(*c, *u.untargeted[g].fault);

      // (a) the witness is (n - 1)-detection valid and misses g.
      const BitVec w = witness_set(u.untargeted[g].tests, u);
      std::vector<bool> in(nv, false);
      bool misses = true;
      for (VectorId v = 0; v < nv; ++v) {
        in[v] = w.test(v);
        if (in[v] && tg.count(v)) misses = false;
      }
      if (!misses || !valid_n_detection(tsets, in, n - 1)) ++violations;

      // (b) random valid n-detection sets always detect g.
      for (int s = 0; s < 200; ++s) {
        std::fill(in.begin(), in.end(), false);
        const std::uint64_t density = rng() % 4;
        for (VectorId v = 0; v < nv; ++v) in[v] = density && rng() % 8 < density;
        for (const auto& tf : tsets) {
          std::vector<VectorId> missing;
          std::size_t hits = 0;
          for (VectorId v : tf) {
            if (in[v])
              ++hits;
            else
              missing.push_back(v);
          }
          std::shuffle(missing.begin(), missing.end(), rng);
          for (std::size_t i = 0; hits < n && i < missing.size(); ++i, ++hits) in[missing[i]] = true;
        }
        ++sets;
        if (!valid_n_detection(tsets, in, n)) {
          ++violations;
          continue;
        }
        bool hit = false;
        for (VectorId v : tg) hit |= in[v];
        if (!hit) ++violations;
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = violations == 0 && secs < 120.0 && bounded > 0;
  o.detail = std::to_string(circuits) + " circuits, " + std::to_string(bounded) + " bounded faults, " +
             std::to_string(sets) + " random sets, " + std::to_string(violations) + " violations, " +
             fmt("%.1f s", secs);
  return o;
}

Outcome simulator_oracle() {
  std::mt19937_64 rng(777);
  std::size_t circuits = 0, faults = 0, mismatches = 0;
  for (; circuits < 120; ++circuits) {
    const Circuit c = oracle::random_circuit(rng, 1 + rng() % 4, 1 + rng() % 12);
    std::vector<std::optional<FaultInjection>> list{std::nullopt};
    for (const auto& f : enumerate_stuck_at(c, false)) list.emplace_back(f);
    for (const auto& f : enumerate_bridging(c)) list.emplace_back(f);
    const ExhaustiveSimulator sim(c);
    for (const auto& f : list) {
      ++faults;
      const auto packed = simulate_all(c, f);
      const auto cone = f ? sim.faulty_lines(*f) : sim.good_tables();
      for (VectorId v = 0; v < c.num_vectors(); ++v) {
        const auto ref = oracle::naive_eval(c, v, f);
        for (LineId l = 0; l < c.num_lines(); ++l)
          if (packed[l].test(v) != ref[l] || cone[l].test(v) != ref[l]) ++mismatches;
      }
    }
  }
  Outcome o;
  o.pass = mismatches == 0;
  o.detail = std::to_string(circuits) + " circuits, " + std::to_string(faults) + " fault cases, " +
             std::to_string(mismatches) + " mismatching bits";
  return o;
}

Outcome cross_module() {
  std::mt19937_64 rng(4242);
  std::size_t runs = 0, checks = 0, violations = 0;
  for (int circuit = 0; circuit < 12; ++circuit) {
    auto c = std::make_shared<Circuit>(oracle::random_circuit(rng, 3 + rng() % 3, 6 + rng() % 10));
    const auto u = build_universe(c, true);
    if (u.targets.empty() || u.untargeted.empty()) {
      --circuit;
      continue;
    }
    const auto n_min = worst_case(u);
    for (Definition d : {Definition::One, Definition::Two})
      for (std::uint64_t seed : {1ULL, 99ULL}) {
        const auto e = procedure1_build(u, {.n_max = 10, .trials = 100, .seed = seed + circuit, .definition = d});
        const auto pt = estimate_probabilities(e, u);
        ++runs;
        for (std::size_t g = 0; g < u.untargeted.size(); ++g)
          for (std::size_t n = 1; n <= 10; ++n)
            if (n_min[g] && *n_min[g] <= n) {
              ++checks;
              if (pt.d(n, g) != pt.trials) ++violations;
            }
      }
  }
  Outcome o;
  o.pass = violations == 0 && checks > 0;
  o.detail = std::to_string(runs) + " runs (K=100), " + std::to_string(checks) + " guaranteed (n, g) cells, " +
             std::to_string(violations) + " below 1.0";
  return o;
}

Outcome def2_bound() {
  std::mt19937_64 rng(31337);
  std::size_t samples = 0, violations = 0;
  for (int circuit = 0; circuit < 40; ++circuit) {
    auto c = std::make_shared<Circuit>(oracle::random_circuit(rng, 3 + rng() % 2, 4 + rng() % 9));
    const auto u = build_universe(c, true);
    if (u.targets.empty()) continue;
    const auto e = procedure1_build(u, {.n_max = 6, .trials = 8, .seed = 5u + circuit, .definition = Definition::Two});
    for (const auto& set : e.sets)
      for (std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{6}}) {
        const auto snap = set.snapshot(n);
        for (const auto& t : u.targets) {
          std::vector<VectorId> inter;
          for (VectorId v : snap)
            if (t.tests.contains(v)) inter.push_back(v);
          if (inter.empty() || inter.size() > 12) continue;
          ++samples;
          if (count_def2(*c, t.fault, t.tests, snap) > oracle::brute_force_def2(*c, t.fault, inter)) ++violations;
        }
      }
  }
  Outcome o;
  o.pass = violations == 0 && samples > 0;
  o.detail = std::to_string(samples) + " (f, T_k) samples, " + std::to_string(violations) + " violations";
  return o;
}

Outcome def2_trend() {
  std::mt19937_64 rng(2718);
  std::size_t used = 0;
  double sum1 = 0, sum2 = 0;
  std::size_t worse = 0;
  for (int attempt = 0; attempt < 200 && used < 6; ++attempt) {
    auto c = std::make_shared<Circuit>(oracle::random_circuit(rng, 6, 14 + rng() % 8));
    const auto u = build_universe(c, true);
    if (u.targets.empty() || u.untargeted.empty()) continue;
    const auto n_min = worst_case(u);
    if (std::none_of(n_min.begin(), n_min.end(), [](const NMin& n) { return !n || *n >= 3; })) continue;
    ++used;
    double mean[2] = {0, 0};
    int i = 0;
    for (Definition d : {Definition::One, Definition::Two}) {
      const auto e = procedure1_build(u, {.n_max = 10, .trials = 1000, .seed = 11, .definition = d});
      const auto pt = estimate_probabilities(e, u);
      for (std::size_t g = 0; g < u.untargeted.size(); ++g)
        mean[i] += static_cast<double>(pt.d(10, g)) / static_cast<double>(pt.trials);
      mean[i++] /= static_cast<double>(u.untargeted.size());
    }
    sum1 += mean[0];
    sum2 += mean[1];
    if (mean[1] < mean[0] - 0.01) ++worse;
  }
  Outcome o;
  o.pass = used > 0 && worse == 0;
  o.detail = std::to_string(used) + " circuits, mean p(10) def1 " + fmt("%.4f", used ? sum1 / used : 0) +
             " def2 " + fmt("%.4f", used ? sum2 / used : 0) + ", " + std::to_string(worse) +
             " circuits where def2 < def1 - 0.01";
  return o;
}

std::string run_cli(std::vector<std::string> args, const std::string& stdin_text) {
  args.insert(args.begin(), "ndet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  if (cli_main(static_cast<int>(argv.size()), argv.data(), in, out, err) != 0) return "error: " + err.str();
  return out.str();
}

Outcome determinism() {
  std::mt19937_64 rng(8);
  std::size_t compared = 0, differing = 0;
  for (int circuit = 0; circuit < 3; ++circuit) {
    const std::string bench = to_bench(oracle::random_circuit(rng, 5, 16));
    for (const char* mode : {"worst", "avg", "compare-defs"})
      for (const char* format : {"csv", "json"}) {
        const std::vector<std::string> base{mode, "--trials", "200", "--seed", "17", "--format", format};
        auto with_jobs = [&](const char* jobs) {
          auto a = base;
          a.insert(a.end(), {"--jobs", jobs});
          return run_cli(a, bench);
        };
        const std::string a = with_jobs("1"), b = with_jobs("1"), c = with_jobs("4");
        compared += 2;
        if (a.rfind("error", 0) == 0) ++differing;
        differing += (a != b) + (a != c);
      }
  }
  Outcome o;
  o.pass = differing == 0;
  o.detail = std::to_string(compared) + " output pairs compared (1 vs 1 and 1 vs 4 workers), " +
             std::to_string(differing) + " differ";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    bool gating;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "Table 1 fixture n_min values", true, table1},
      {2, "Table 4 fixture detection probabilities", true, table4},
      {3, "worst-case guarantee and witness tightness", true, guarantee},
      {4, "packed simulation equals naive interpreter", true, simulator_oracle},
      {5, "guaranteed faults have p(n,g) = 1", true, cross_module},
      {6, "greedy Definition 2 count <= exact maximum", true, def2_bound},
      {7, "Definition 2 mean p(10) not below Definition 1 (soft)", false, def2_trend},
      {8, "byte-identical reports across runs and workers", true, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const char* status = o.pass ? "PASS" : (c.gating ? "FAIL" : "WARN");
    std::cout << status << "  [" << c.id << "] " << c.name << ": " << o.detail << (c.gating ? "" : " (not gating)")
              << std::endl;
    if (!o.pass && c.gating) ++failures;
  }
  std::cout << "NOTE  [9] benchmark tables need the original benchmark netlists, which are not available; "
               "only table layouts and fixture-level values are checked"
            << std::endl;
  std::cout << (failures ? "acceptance: FAILED (" + std::to_string(failures) + ")" : std::string("acceptance: all gating criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
