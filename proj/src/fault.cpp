#include "ndet/fault.hpp"

#include <stdexcept>

namespace ndet {

std::string label(const StuckAtFault& f) { return std::to_string(f.line + 1) + "/" + (f.value ? "1" : "0"); }

std::string label(const BridgingFault& f) {
  return "(" + std::to_string(f.victim + 1) + "," + (f.victim_value ? "1" : "0") + "," +
         std::to_string(f.aggressor + 1) + "," + (f.aggressor_value ? "1" : "0") + ")";
}

std::string label(const FaultInjection& f) {
  return std::visit([](const auto& x) { return label(x); }, f);
}

void validate_injection(const Circuit& circuit, const FaultInjection& fault) {
  const auto n = circuit.num_lines();
  if (const auto* sa = std::get_if<StuckAtFault>(&fault)) {
    if (sa->line >= n) throw std::invalid_argument("stuck-at fault on invalid line " + label(*sa));
    return;
  }
  const auto& br = std::get<BridgingFault>(fault);
  if (br.victim >= n || br.aggressor >= n) throw std::invalid_argument("bridging fault on invalid line " + label(br));
  if (br.victim == br.aggressor) throw std::invalid_argument("bridging fault with identical lines " + label(br));
  if (fanout_cone_mask(circuit, br.victim)[br.aggressor] || fanout_cone_mask(circuit, br.aggressor)[br.victim])
    throw std::invalid_argument("feedback bridging fault " + label(br));
}

}  // namespace ndet
