#include "ndet/worstcase.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ndet/parallel.hpp"

namespace ndet {

std::optional<PairRequirement> pair_requirement(const DetectionSet& tf, const DetectionSet& tg) {
  if (tf.empty() || tg.empty()) throw std::invalid_argument("pair_requirement: empty detection set");
  const std::size_t m = tf.bits().count_and(tg.bits());
  if (m == 0) return std::nullopt;
  return PairRequirement{tf.size(), m};
}

NMin fault_requirement(const DetectionSet& tg, const DetectionUniverse& universe) {
  NMin best;
  for (const auto& f : universe.targets) {
    const auto req = pair_requirement(f.tests, tg);
    if (!req) continue;
    if (!best || req->n_min() < *best) best = req->n_min();
    if (*best == 1) break;
  }
  return best;
}

std::vector<NMin> worst_case(const DetectionUniverse& universe, std::size_t workers) {
  std::vector<NMin> out(universe.untargeted.size());
  parallel_for(out.size(), workers,
               [&](std::size_t j) { out[j] = fault_requirement(universe.untargeted[j].tests, universe); });
  return out;
}

bool is_n_detection(const DetectionUniverse& universe, const BitVec& tests, std::size_t n) {
  for (const auto& f : universe.targets) {
    const std::size_t hits = f.tests.bits().count_and(tests);
    if (hits < n && hits < f.tests.size()) return false;
  }
  return true;
}

BitVec witness_set(const DetectionSet& tg, const DetectionUniverse& universe) {
  if (!fault_requirement(tg, universe))
    throw std::invalid_argument("witness_set: no target fault overlaps the untargeted fault");
  return ~tg.bits();
}

std::vector<Fraction> coverage_table(std::span<const NMin> results, std::span<const std::size_t> thresholds) {
  std::vector<Fraction> out;
  for (std::size_t th : thresholds) {
    const auto c = std::count_if(results.begin(), results.end(), [th](const NMin& r) { return r && *r <= th; });
    out.push_back({static_cast<std::size_t>(c), results.size()});
  }
  return out;
}

std::vector<Fraction> tail_table(std::span<const NMin> results, std::span<const std::size_t> thresholds) {
  std::vector<Fraction> out;
  for (std::size_t th : thresholds) {
    const auto c = std::count_if(results.begin(), results.end(), [th](const NMin& r) { return !r || *r >= th; });
    out.push_back({static_cast<std::size_t>(c), results.size()});
  }
  return out;
}

Histogram histogram(std::span<const NMin> results, std::size_t bin_width) {
  if (bin_width == 0) throw std::invalid_argument("histogram: bin width must be at least 1");
  Histogram h;
  h.bin_width = bin_width;
  std::optional<std::size_t> lo, hi;
  for (const auto& r : results) {
    if (!r) {
      ++h.unbounded;
      continue;
    }
    const std::size_t b = *r / bin_width;
    lo = lo ? std::min(*lo, b) : b;
    hi = hi ? std::max(*hi, b) : b;
  }
  if (!lo) return h;
  h.bins.resize(*hi - *lo + 1);
  for (std::size_t i = 0; i < h.bins.size(); ++i) h.bins[i].lower = (*lo + i) * bin_width;
  for (const auto& r : results)
    if (r) ++h.bins[*r / bin_width - *lo].count;
  return h;
}

std::string format_percent(const Fraction& f) {
  if (f.total == 0) return "0.00";
  // Hundredths of a percent, rounded half up, in exact integer arithmetic.
  const std::uint64_t scaled = (std::uint64_t{f.count} * 20000 + f.total) / (2 * std::uint64_t{f.total});
  std::string frac = std::to_string(scaled % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(scaled / 100) + "." + frac;
}

}  // namespace ndet
