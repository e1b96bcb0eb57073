#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ndet/detmap.hpp"
#include "ndet/logicsim.hpp"
#include "ndet/worstcase.hpp"

namespace ndet {

// How detections of a target fault are counted.
//   One: every test in T(f) counts.
//   Two: tests count only when pairwise sufficiently different, i.e. the
//        common-bit test of every counted pair fails to detect f.
enum class Definition : std::uint8_t { One = 1, Two = 2 };

// One randomly built test set T_k. Tests are only ever appended, so the
// snapshot after iteration n is a prefix of the insertion order.
struct TrialSet {
  std::vector<VectorId> order;
  std::vector<std::uint32_t> prefix;  // prefix[n - 1] = |T_k| after iteration n

  std::span<const VectorId> snapshot(std::size_t n) const {
    return std::span<const VectorId>(order).first(prefix.at(n - 1));
  }
};

struct TrialEnsemble {
  std::size_t n_max = 0;
  std::uint64_t seed = 0;
  Definition definition = Definition::One;
  std::vector<TrialSet> sets;
  // Selections that fell back to Definition 1 because no remaining test
  // would raise the Definition 2 count.
  std::uint64_t fallbacks = 0;

  std::size_t trials() const { return sets.size(); }
};

struct BuildOptions {
  std::size_t n_max = 10;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  Definition definition = Definition::One;
  std::size_t workers = 0;
};

// Seed of trial k's generator: splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15).
// Trial k draws from std::mt19937_64 seeded with this value.
std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t trial);

// Uniform index in [0, bound) from one 64-bit draw via multiply-shift.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound);

// Builds K test sets for n = 1..n_max. In every iteration n, each target fault
// in universe order that is detected fewer than n times by T_k (and still has
// tests outside T_k) gets one randomly selected test added. Definition 2
// requires universe.circuit.
TrialEnsemble procedure1_build(const DetectionUniverse& universe, const BuildOptions& options);

std::size_t count_def1(std::span<const VectorId> tests, const DetectionSet& tf);

// Tests specified where a and b agree and X elsewhere.
TernaryVector common_test(VectorId a, VectorId b, std::size_t num_inputs);

// True when the common-bit test of a and b still detects f, so the two tests
// do not count as different detections.
bool similar(const Circuit& circuit, const StuckAtFault& f, VectorId a, VectorId b);

// Greedy Definition 2 count: scan `ordered` in insertion order and count a
// test of f when it is not similar to any test counted before it. A lower
// bound on the largest pairwise-different subset.
std::size_t count_def2(const Circuit& circuit, const StuckAtFault& f, const DetectionSet& tf,
                       std::span<const VectorId> ordered);

struct CandidateSelection {
  std::vector<VectorId> candidates;  // ascending
  bool fallback = false;
};

// Tests of T(f) - T_k whose addition raises the greedy Definition 2 count.
// When there are none but T(f) - T_k is nonempty, returns all of T(f) - T_k
// with the fallback flag set.
CandidateSelection def2_candidate_filter(const Circuit& circuit, const StuckAtFault& f, const DetectionSet& tf,
                                         std::span<const VectorId> ordered);

// d(n, g) for n = 1..n_max and every untargeted fault; p = d / K.
struct ProbabilityTable {
  std::size_t trials = 0;
  std::size_t n_max = 0;
  std::vector<std::vector<std::uint32_t>> detections;  // [n - 1][g]

  std::uint32_t d(std::size_t n, std::size_t g) const { return detections.at(n - 1).at(g); }
  Fraction p(std::size_t n, std::size_t g) const { return {d(n, g), trials}; }
};

ProbabilityTable estimate_probabilities(const TrialEnsemble& ensemble, const DetectionUniverse& universe,
                                        std::size_t workers = 0);

// Probability with three decimals, rounded half up: 52/1000 -> "0.052".
std::string format_probability(const Fraction& p);

// Bin edges in tenths, 1.0 down to 0.0.
inline constexpr std::size_t kProbabilityEdges = 11;

// Number of probabilities >= each edge {1.0, 0.9, ..., 0.0}, compared exactly.
std::vector<std::size_t> probability_bins(std::span<const Fraction> probabilities);

// Untargeted faults that n_min does not guarantee for n < min_n_min
// (bounded n_min >= min_n_min, or unbounded), in universe order.
std::vector<std::size_t> hard_faults(std::span<const NMin> n_min, std::size_t min_n_min);

// Snapshot archive: "nmax <n>", "trials <K>", then "set <n> <k> : v ..." for
// every snapshot, listing vectors in insertion order.
std::string dump_snapshots(const TrialEnsemble& ensemble);

// Reads an archive. Each listed snapshot must contain the previous one; new
// vectors are appended in listed order.
TrialEnsemble load_snapshots(std::string_view text);

}  // namespace ndet
