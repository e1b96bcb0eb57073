#pragma once

#include <string>
#include <variant>

#include "ndet/netlist.hpp"

namespace ndet {

// Line l stuck-at value, written l/a.
struct StuckAtFault {
  LineId line = 0;
  bool value = false;

  auto operator<=>(const StuckAtFault&) const = default;
};

// Four-way bridge (victim, a1, aggressor, a2): when the fault-free values
// are victim == a1 and aggressor == a2, the victim is driven to !a1.
struct BridgingFault {
  LineId victim = 0;
  bool victim_value = false;
  LineId aggressor = 0;
  bool aggressor_value = false;

  auto operator<=>(const BridgingFault&) const = default;
};

using FaultInjection = std::variant<StuckAtFault, BridgingFault>;

// Report labels use 1-based line numbers: "3/0" and "(9,0,10,1)".
std::string label(const StuckAtFault& f);
std::string label(const BridgingFault& f);
std::string label(const FaultInjection& f);

// Throws std::invalid_argument when a referenced line is out of range or a
// bridge pair has a fanout relation in either direction.
void validate_injection(const Circuit& circuit, const FaultInjection& fault);

}  // namespace ndet
