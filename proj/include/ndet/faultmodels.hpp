#pragma once

#include <vector>

#include "ndet/fault.hpp"
#include "ndet/netlist.hpp"

namespace ndet {

// Single stuck-at faults ordered by (line, value). With `collapse`, faults
// structurally equivalent to a gate-output fault are dropped in favour of it:
//   AND/NAND  input/0 == output/0 (output/1 for NAND)
//   OR/NOR    input/1 == output/1 (output/0 for NOR)
//   NOT/BUF   input/a == output/!a (output/a for BUF)
// An input line takes part only when its single fanout is that gate and it
// is not itself a primary output; XOR/XNOR faults are never merged.
std::vector<StuckAtFault> enumerate_stuck_at(const Circuit& circuit, bool collapse);

// Same relation exposed for tests: the kept representative of every stuck-at
// fault, indexed by 2 * line + value.
std::vector<StuckAtFault> stuck_at_representatives(const Circuit& circuit);

// Lines eligible as bridge sites: outputs of gates with two or more inputs.
std::vector<LineId> bridge_sites(const Circuit& circuit);

// For every unordered pair {u, v} of bridge sites (u < v) without a fanout
// relation: (u,0,v,1), (u,1,v,0), (v,0,u,1), (v,1,u,0).
std::vector<BridgingFault> enumerate_bridging(const Circuit& circuit);

}  // namespace ndet
