#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ndet/bitvec.hpp"
#include "ndet/fault.hpp"
#include "ndet/logicsim.hpp"
#include "ndet/netlist.hpp"

namespace ndet {

// T(h): the input vectors that detect a fault, with its size N cached.
class DetectionSet {
 public:
  DetectionSet() = default;
  explicit DetectionSet(BitVec bits) : bits_(std::move(bits)), size_(bits_.count()) {}

  const BitVec& bits() const { return bits_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool contains(VectorId v) const { return bits_.test(v); }
  std::vector<VectorId> vectors() const { return bits_.ones(); }

  bool operator==(const DetectionSet& o) const { return bits_ == o.bits_; }

 private:
  BitVec bits_;
  std::size_t size_ = 0;
};

DetectionSet detection_set(const Circuit& circuit, const FaultInjection& fault);

struct TargetFault {
  StuckAtFault fault;
  std::string label;
  DetectionSet tests;
};

struct UntargetedFault {
  // Empty for fixture entries with a free-form "(name)" label.
  std::optional<BridgingFault> fault;
  std::string label;
  DetectionSet tests;
};

// Detection sets of the target faults F and untargeted faults G over the full
// input space. Only faults with a nonempty detection set are kept; the rest
// are listed in the dropped_* members in enumeration order.
struct DetectionUniverse {
  std::string name;
  std::size_t num_inputs = 0;
  // Null when loaded from a fixture; required for ternary (Definition 2) counting.
  std::shared_ptr<const Circuit> circuit;
  std::vector<TargetFault> targets;
  std::vector<UntargetedFault> untargeted;
  std::vector<std::string> dropped_targets;
  std::vector<std::string> dropped_untargeted;

  std::size_t num_vectors() const { return std::size_t{1} << num_inputs; }
};

DetectionUniverse build_universe(std::shared_ptr<const Circuit> circuit, bool collapse, std::string name = "circuit",
                                 std::size_t workers = 0);

class FixtureError : public std::runtime_error {
 public:
  FixtureError(std::size_t line_number, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + message), line_number_(line_number) {}
  std::size_t line_number() const { return line_number_; }

 private:
  std::size_t line_number_;
};

// Fixture text: optional "inputs <p>", then one "fault <label> : v1 v2 ..." per
// fault with decimal vector ids. "l/a" labels are target faults; "(l1,a1,l2,a2)"
// and any other parenthesized "(name)" labels are untargeted ones. Without an
// inputs line, p is the smallest width that holds the largest listed vector.
DetectionUniverse load_fixture(std::string_view text, std::string name = "fixture");

// Writes a universe in the fixture format (kept faults only).
std::string to_fixture(const DetectionUniverse& universe);

}  // namespace ndet
