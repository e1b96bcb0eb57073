#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ndet/bitvec.hpp"
#include "ndet/detmap.hpp"

namespace ndet {

// Requirement that one target fault f places on an untargeted fault g: f can
// be detected N - M times while missing g, so N - M + 1 detections of f
// guarantee g is detected.
struct PairRequirement {
  std::size_t tests_f = 0;  // N = |T(f)|
  std::size_t overlap = 0;  // M = |T(f) & T(g)|
  std::size_t n_min() const { return tests_f - overlap + 1; }
};

// None when T(f) and T(g) are disjoint.
std::optional<PairRequirement> pair_requirement(const DetectionSet& tf, const DetectionSet& tg);

// Smallest n for which every n-detection test set of F detects g. An empty
// value means no target fault overlaps g, so no n gives a guarantee.
using NMin = std::optional<std::size_t>;

NMin fault_requirement(const DetectionSet& tg, const DetectionUniverse& universe);

// n_min for every untargeted fault, in universe order.
std::vector<NMin> worst_case(const DetectionUniverse& universe, std::size_t workers = 0);

// Does `tests` detect every target fault at least n times, or contain all
// of its tests when it has fewer? n = 0 is vacuously satisfied.
bool is_n_detection(const DetectionUniverse& universe, const BitVec& tests, std::size_t n);

// U \ T(g): a valid (n_min(g) - 1)-detection test set that misses g.
// Throws std::invalid_argument when n_min(g) is unbounded.
BitVec witness_set(const DetectionSet& tg, const DetectionUniverse& universe);

// Percentage of all results with a bounded n_min <= threshold, per threshold,
// as exact fractions count / total.
struct Fraction {
  std::size_t count = 0;
  std::size_t total = 0;
  bool operator==(const Fraction&) const = default;
};

std::vector<Fraction> coverage_table(std::span<const NMin> results, std::span<const std::size_t> thresholds);

// Results with n_min >= threshold; unbounded results count for every threshold.
std::vector<Fraction> tail_table(std::span<const NMin> results, std::span<const std::size_t> thresholds);

struct Histogram {
  struct Bin {
    std::size_t lower = 0;
    std::size_t count = 0;
    bool operator==(const Bin&) const = default;
  };
  std::size_t bin_width = 1;
  std::vector<Bin> bins;  // contiguous from the lowest to the highest occupied bin
  std::size_t unbounded = 0;
};

// Bin lower bound is floor(n / width) * width.
Histogram histogram(std::span<const NMin> results, std::size_t bin_width);

// Percentage with two decimals, rounded half up: 2/3 -> "66.67".
std::string format_percent(const Fraction& f);

}  // namespace ndet
