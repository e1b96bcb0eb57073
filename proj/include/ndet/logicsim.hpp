#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ndet/bitvec.hpp"
#include "ndet/fault.hpp"
#include "ndet/netlist.hpp"

namespace ndet {

// Value of one line under every input vector; bit v is the value at VectorId v.
using TruthTable = BitVec;

enum class Ternary : std::uint8_t { Zero, One, X };

inline Ternary to_ternary(bool v) { return v ? Ternary::One : Ternary::Zero; }
char to_char(Ternary t);

// One value per primary input, in declaration order.
using TernaryVector = std::vector<Ternary>;

TernaryVector to_ternary_vector(VectorId v, std::size_t num_inputs);

// Projection table of the primary input at position `input_pos` (0 = first declared).
TruthTable input_pattern(std::size_t num_inputs, std::size_t input_pos);

// Exhaustive two-valued simulation of every line, optionally with one fault injected.
std::vector<TruthTable> simulate_all(const Circuit& circuit, const std::optional<FaultInjection>& fault = std::nullopt);

// Holds the fault-free tables of a circuit and re-evaluates only the fanout
// cone of a fault site. Const member functions are safe to call concurrently.
class ExhaustiveSimulator {
 public:
  explicit ExhaustiveSimulator(const Circuit& circuit);

  const Circuit& circuit() const { return circuit_; }
  const TruthTable& good(LineId l) const { return good_[l]; }
  const std::vector<TruthTable>& good_tables() const { return good_; }

  std::vector<TruthTable> faulty_lines(const FaultInjection& fault) const;
  std::vector<TruthTable> faulty_outputs(const FaultInjection& fault) const;

  // Vectors under which some primary output differs from the fault-free circuit.
  BitVec detection(const FaultInjection& fault) const;

 private:
  // Per-line table pointers with the fault applied; storage holds the recomputed cone.
  std::vector<const TruthTable*> inject(const FaultInjection& fault, std::vector<TruthTable>& storage) const;

  const Circuit& circuit_;
  std::vector<TruthTable> good_;
};

// Three-valued simulation of up to 64 vectors at once. Every line carries a
// pair of planes: bit k of `one` (`zero`) says lane k is known 1 (known 0);
// neither bit set means X.
class TernarySimulator {
 public:
  static constexpr std::size_t kLanes = 64;

  struct Planes {
    std::uint64_t one = 0;
    std::uint64_t zero = 0;
  };

  explicit TernarySimulator(const Circuit& circuit);

  // Loads vectors into lanes 0..n-1 (n <= 64).
  void load(std::span<const TernaryVector> vectors);
  // Loads the common-bit tests of (a[k], b[k]): bits where both agree keep
  // their value, the rest become X.
  void load_common(std::span<const VectorId> a, std::span<const VectorId> b);

  // Evaluates the loaded lanes fault-free and, when given, under `fault`.
  void run(const std::optional<FaultInjection>& fault);

  std::size_t lanes() const { return lanes_; }
  std::uint64_t lane_mask() const { return lanes_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes_) - 1; }
  Planes good(LineId l) const { return good_[l]; }
  Planes faulty(LineId l) const { return faulty_[l]; }

  // Lanes where some output is binary in both runs and the two values differ.
  std::uint64_t detected_lanes() const;

 private:
  void evaluate(std::vector<Planes>& values, const FaultInjection* fault);

  const Circuit& circuit_;
  std::size_t lanes_ = 0;
  std::vector<Planes> inputs_;
  std::vector<Planes> good_;
  std::vector<Planes> faulty_;
  std::optional<FaultInjection> validated_;  // last fault that passed validation
};

// Per-output ternary values for a single vector.
std::vector<Ternary> simulate3(const Circuit& circuit, const TernaryVector& t,
                               const std::optional<FaultInjection>& fault = std::nullopt);

// True iff some output is binary v fault-free and binary !v with the fault.
bool detects3(const Circuit& circuit, const FaultInjection& fault, const TernaryVector& t);

}  // namespace ndet
