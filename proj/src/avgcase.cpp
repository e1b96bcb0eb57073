#include "ndet/avgcase.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ndet/parallel.hpp"

namespace ndet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Batched common-bit similarity checks against one circuit, 64 pairs per pass.
// A three-valued detection by the common-bit test of a and b implies that
// every vector in the cube spanned by a and b detects f, so pairs whose cube
// leaves T(f) are settled without simulation.
class PairChecker {
 public:
  explicit PairChecker(const Circuit& circuit) : sim_(circuit) {}

  bool similar_to_any(const StuckAtFault& f, const BitVec& tf, VectorId t, std::span<const VectorId> counted) {
    a_.clear();
    b_.clear();
    for (VectorId c : counted) {
      if (!cube_inside(tf, t, c)) continue;
      a_.push_back(t);
      b_.push_back(c);
      if (a_.size() == TernarySimulator::kLanes && flush(f)) return true;
    }
    return flush(f) != 0;
  }

  // Tests of `pool` that are similar to none of `counted`, in pool order.
  std::vector<VectorId> dissimilar_to_all(const StuckAtFault& f, const BitVec& tf, std::span<const VectorId> pool,
                                          std::span<const VectorId> counted) {
    if (counted.empty()) return {pool.begin(), pool.end()};
    std::vector<bool> excluded(pool.size(), false);
    owner_.clear();
    a_.clear();
    b_.clear();
    auto drain = [&] {
      std::uint64_t hit = flush(f);
      while (hit) {
        excluded[owner_[static_cast<std::size_t>(std::countr_zero(hit))]] = true;
        hit &= hit - 1;
      }
      owner_.clear();
    };
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (VectorId c : counted) {
        if (!cube_inside(tf, pool[i], c)) continue;
        a_.push_back(pool[i]);
        b_.push_back(c);
        owner_.push_back(i);
        if (a_.size() == TernarySimulator::kLanes) drain();
      }
    }
    drain();
    std::vector<VectorId> out;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (!excluded[i]) out.push_back(pool[i]);
    return out;
  }

 private:
  // False when some vector of the a/b cube is outside T(f). Only the first
  // 64 vertices are examined; true means "simulate to decide".
  static bool cube_inside(const BitVec& tf, VectorId a, VectorId b) {
    const VectorId diff = a ^ b;
    const VectorId base = a & ~diff;
    VectorId sub = diff;
    for (int i = 0; i < 64; ++i) {
      if (!tf.test(base | sub)) return false;
      if (sub == 0) break;
      sub = (sub - 1) & diff;
    }
    return true;
  }

  // Simulates the queued pairs and clears the queue; returns the lanes whose
  // common-bit test detects f.
  std::uint64_t flush(const StuckAtFault& f) {
    if (a_.empty()) return 0;
    sim_.load_common(a_, b_);
    sim_.run(FaultInjection{f});
    a_.clear();
    b_.clear();
    return sim_.detected_lanes();
  }

  TernarySimulator sim_;
  std::vector<VectorId> a_;
  std::vector<VectorId> b_;
  std::vector<std::size_t> owner_;
};

struct TrialResult {
  TrialSet set;
  std::uint64_t fallbacks = 0;
};

class TrialBuilder {
 public:
  TrialBuilder(const DetectionUniverse& universe, const std::vector<std::vector<VectorId>>& target_tests,
               const BuildOptions& options)
      : universe_(universe), target_tests_(target_tests), options_(options) {}

  TrialResult run(std::size_t k) {
    std::mt19937_64 rng(trial_stream_seed(options_.seed, k));
    const std::size_t nf = universe_.targets.size();
    in_set_ = BitVec(universe_.num_vectors());
    def1_.assign(nf, 0);
    counted_.assign(nf, {});
    std::optional<PairChecker> checker;
    if (options_.definition == Definition::Two) {
      checker.emplace(*universe_.circuit);
      candidates_.assign(nf, {});
      filtered_.assign(nf, kUnfiltered);
    }

    TrialResult result;
    std::vector<VectorId> pool;
    for (std::size_t n = 1; n <= options_.n_max; ++n) {
      for (std::size_t i = 0; i < nf; ++i) {
        const auto& tests = target_tests_[i];
        const std::size_t count = options_.definition == Definition::One ? def1_[i] : counted_[i].size();
        if (count >= n || def1_[i] == tests.size()) continue;

        pool.clear();
        for (VectorId t : tests)
          if (!in_set_.test(t)) pool.push_back(t);

        if (options_.definition == Definition::Two) {
          const auto& candidates = def2_candidates(i, pool, *checker);
          if (!candidates.empty()) {
            add(candidates[uniform_index(rng, candidates.size())], result.set, checker);
            continue;
          }
          // Definition 2 cannot reach n: count and select by Definition 1.
          if (def1_[i] >= n) continue;
          ++result.fallbacks;
        }
        add(pool[uniform_index(rng, pool.size())], result.set, checker);
      }
      result.set.prefix.push_back(static_cast<std::uint32_t>(result.set.order.size()));
    }
    return result;
  }

 private:
  static constexpr std::size_t kUnfiltered = static_cast<std::size_t>(-1);

  // Tests of T(f_i) - T_k dissimilar to every counted test of f_i. The list
  // is kept between calls and only checked against newly counted tests.
  const std::vector<VectorId>& def2_candidates(std::size_t i, const std::vector<VectorId>& pool, PairChecker& checker) {
    const auto& f = universe_.targets[i];
    auto& list = candidates_[i];
    if (filtered_[i] == kUnfiltered) {
      list = checker.dissimilar_to_all(f.fault, f.tests.bits(), pool, counted_[i]);
    } else {
      std::erase_if(list, [&](VectorId t) { return in_set_.test(t); });
      const auto fresh = std::span<const VectorId>(counted_[i]).subspan(filtered_[i]);
      if (!fresh.empty()) list = checker.dissimilar_to_all(f.fault, f.tests.bits(), list, fresh);
    }
    filtered_[i] = counted_[i].size();
    return list;
  }

  void add(VectorId t, TrialSet& set, std::optional<PairChecker>& checker) {
    in_set_.set(t);
    set.order.push_back(t);
    for (std::size_t i = 0; i < universe_.targets.size(); ++i) {
      const auto& f = universe_.targets[i];
      if (!f.tests.contains(t)) continue;
      ++def1_[i];
      if (checker && !checker->similar_to_any(f.fault, f.tests.bits(), t, counted_[i])) counted_[i].push_back(t);
    }
  }

  const DetectionUniverse& universe_;
  const std::vector<std::vector<VectorId>>& target_tests_;
  const BuildOptions& options_;
  BitVec in_set_;
  std::vector<std::size_t> def1_;
  std::vector<std::vector<VectorId>> counted_;
  std::vector<std::vector<VectorId>> candidates_;
  std::vector<std::size_t> filtered_;
};

template <typename T>
std::optional<T> to_number(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(seed + (trial + 1) * 0x9E3779B97F4A7C15ULL);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

TrialEnsemble procedure1_build(const DetectionUniverse& universe, const BuildOptions& options) {
  if (universe.targets.empty()) throw std::invalid_argument("procedure1_build: no target faults");
  if (options.trials == 0) throw std::invalid_argument("procedure1_build: trial count must be at least 1");
  if (options.n_max == 0) throw std::invalid_argument("procedure1_build: n_max must be at least 1");
  if (options.definition == Definition::Two && !universe.circuit)
    throw std::invalid_argument("procedure1_build: Definition 2 needs the circuit, not a fixture");

  std::vector<std::vector<VectorId>> target_tests;
  target_tests.reserve(universe.targets.size());
  for (const auto& f : universe.targets) target_tests.push_back(f.tests.vectors());

  std::vector<TrialResult> results(options.trials);
  parallel_for(options.trials, options.workers, [&](std::size_t k) {
    TrialBuilder builder(universe, target_tests, options);
    results[k] = builder.run(k);
  });

  TrialEnsemble e;
  e.n_max = options.n_max;
  e.seed = options.seed;
  e.definition = options.definition;
  e.sets.reserve(results.size());
  for (auto& r : results) {
    e.fallbacks += r.fallbacks;
    e.sets.push_back(std::move(r.set));
  }
  return e;
}

std::size_t count_def1(std::span<const VectorId> tests, const DetectionSet& tf) {
  return static_cast<std::size_t>(
      std::count_if(tests.begin(), tests.end(), [&](VectorId t) { return t < tf.bits().size() && tf.contains(t); }));
}

TernaryVector common_test(VectorId a, VectorId b, std::size_t num_inputs) {
  TernaryVector t(num_inputs);
  for (std::size_t i = 0; i < num_inputs; ++i) {
    const std::size_t shift = num_inputs - 1 - i;
    const bool va = (a >> shift) & 1U;
    const bool vb = (b >> shift) & 1U;
    t[i] = va == vb ? to_ternary(va) : Ternary::X;
  }
  return t;
}

bool similar(const Circuit& circuit, const StuckAtFault& f, VectorId a, VectorId b) {
  return detects3(circuit, f, common_test(a, b, circuit.num_inputs()));
}

std::size_t count_def2(const Circuit& circuit, const StuckAtFault& f, const DetectionSet& tf,
                       std::span<const VectorId> ordered) {
  PairChecker checker(circuit);
  std::vector<VectorId> counted;
  for (VectorId t : ordered)
    if (tf.contains(t) && !checker.similar_to_any(f, tf.bits(), t, counted)) counted.push_back(t);
  return counted.size();
}

CandidateSelection def2_candidate_filter(const Circuit& circuit, const StuckAtFault& f, const DetectionSet& tf,
                                         std::span<const VectorId> ordered) {
  PairChecker checker(circuit);
  std::vector<VectorId> counted;
  BitVec in_set(tf.bits().size());
  for (VectorId t : ordered) {
    in_set.set(t);
    if (tf.contains(t) && !checker.similar_to_any(f, tf.bits(), t, counted)) counted.push_back(t);
  }
  std::vector<VectorId> pool;
  for (VectorId t : tf.vectors())
    if (!in_set.test(t)) pool.push_back(t);

  CandidateSelection sel;
  sel.candidates = checker.dissimilar_to_all(f, tf.bits(), pool, counted);
  if (sel.candidates.empty() && !pool.empty()) {
    sel.candidates = std::move(pool);
    sel.fallback = true;
  }
  return sel;
}

ProbabilityTable estimate_probabilities(const TrialEnsemble& ensemble, const DetectionUniverse& universe,
                                        std::size_t workers) {
  ProbabilityTable table;
  table.trials = ensemble.trials();
  table.n_max = ensemble.n_max;
  table.detections.assign(ensemble.n_max, std::vector<std::uint32_t>(universe.untargeted.size(), 0));
  for (const auto& set : ensemble.sets) {
    if (set.prefix.size() != ensemble.n_max) throw std::invalid_argument("estimate_probabilities: missing snapshots");
    for (VectorId v : set.order)
      if (v >= universe.num_vectors())
        throw std::invalid_argument("estimate_probabilities: vector " + std::to_string(v) + " outside the input space");
  }

  parallel_for(universe.untargeted.size(), workers, [&](std::size_t g) {
    const DetectionSet& tg = universe.untargeted[g].tests;
    for (const auto& set : ensemble.sets) {
      // The snapshot at n detects g iff the first hit lies inside its prefix.
      std::size_t first = set.order.size();
      for (std::size_t i = 0; i < set.order.size(); ++i) {
        if (tg.contains(set.order[i])) {
          first = i;
          break;
        }
      }
      for (std::size_t n = 1; n <= ensemble.n_max; ++n)
        if (first < set.prefix[n - 1]) ++table.detections[n - 1][g];
    }
  });
  return table;
}

std::string format_probability(const Fraction& p) {
  if (p.total == 0) return "0.000";
  const std::uint64_t scaled = (std::uint64_t{p.count} * 2000 + p.total) / (2 * std::uint64_t{p.total});
  std::string frac = std::to_string(scaled % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return std::to_string(scaled / 1000) + "." + frac;
}

std::vector<std::size_t> probability_bins(std::span<const Fraction> probabilities) {
  std::vector<std::size_t> counts(kProbabilityEdges, 0);
  for (std::size_t e = 0; e < kProbabilityEdges; ++e) {
    const std::size_t tenths = kProbabilityEdges - 1 - e;
    for (const auto& p : probabilities)
      if (std::uint64_t{p.count} * 10 >= std::uint64_t{tenths} * p.total) ++counts[e];
  }
  return counts;
}

std::vector<std::size_t> hard_faults(std::span<const NMin> n_min, std::size_t min_n_min) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < n_min.size(); ++g)
    if (!n_min[g] || *n_min[g] >= min_n_min) out.push_back(g);
  return out;
}

std::string dump_snapshots(const TrialEnsemble& ensemble) {
  std::ostringstream out;
  out << "nmax " << ensemble.n_max << "\n";
  out << "trials " << ensemble.trials() << "\n";
  for (std::size_t n = 1; n <= ensemble.n_max; ++n) {
    for (std::size_t k = 0; k < ensemble.trials(); ++k) {
      out << "set " << n << ' ' << k << " :";
      for (VectorId v : ensemble.sets[k].snapshot(n)) out << ' ' << v;
      out << '\n';
    }
  }
  return out.str();
}

TrialEnsemble load_snapshots(std::string_view text) {
  auto fail = [](std::size_t line, const std::string& msg) {
    return std::invalid_argument("snapshot line " + std::to_string(line) + ": " + msg);
  };
  std::optional<std::size_t> n_max, trials;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::vector<VectorId>, std::size_t>> listed;

  std::size_t src = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++src;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto colon = raw.find(':');
    const auto head = split_ws(raw.substr(0, colon));
    if (head.empty()) continue;
    if ((head[0] == "nmax" || head[0] == "trials") && colon == std::string_view::npos) {
      const auto v = head.size() == 2 ? to_number<std::size_t>(head[1]) : std::nullopt;
      if (!v || *v == 0) throw fail(src, "expected a positive count after '" + std::string(head[0]) + "'");
      (head[0] == "nmax" ? n_max : trials) = *v;
      continue;
    }
    if (head[0] != "set" || head.size() != 3 || colon == std::string_view::npos)
      throw fail(src, "expected 'set <n> <k> : vectors'");
    const auto n = to_number<std::size_t>(head[1]);
    const auto k = to_number<std::size_t>(head[2]);
    if (!n || !k || *n == 0) throw fail(src, "invalid set index");
    std::vector<VectorId> vectors;
    for (auto tok : split_ws(raw.substr(colon + 1))) {
      const auto v = to_number<VectorId>(tok);
      if (!v) throw fail(src, "invalid vector id '" + std::string(tok) + "'");
      vectors.push_back(*v);
    }
    if (!listed.emplace(std::make_pair(*n, *k), std::make_pair(std::move(vectors), src)).second)
      throw fail(src, "set listed twice");
  }
  if (!n_max || !trials) throw std::invalid_argument("snapshot archive lacks 'nmax' or 'trials'");

  TrialEnsemble e;
  e.n_max = *n_max;
  e.sets.resize(*trials);
  for (const auto& [key, entry] : listed)
    if (key.first > *n_max || key.second >= *trials) throw fail(entry.second, "set index out of range");
  for (std::size_t k = 0; k < *trials; ++k) {
    std::set<VectorId> have;
    for (std::size_t n = 1; n <= *n_max; ++n) {
      const auto it = listed.find({n, k});
      if (it == listed.end())
        throw std::invalid_argument("snapshot archive lacks set n=" + std::to_string(n) + " k=" + std::to_string(k));
      const auto& [vectors, line] = it->second;
      const std::set<VectorId> now(vectors.begin(), vectors.end());
      if (now.size() != vectors.size()) throw fail(line, "duplicate vector in set");
      if (!std::includes(now.begin(), now.end(), have.begin(), have.end()))
        throw fail(line, "set does not contain the previous snapshot of the same trial");
      for (VectorId v : vectors)
        if (!have.count(v)) e.sets[k].order.push_back(v);
      have = now;
      e.sets[k].prefix.push_back(static_cast<std::uint32_t>(e.sets[k].order.size()));
    }
  }
  return e;
}

}  // namespace ndet
