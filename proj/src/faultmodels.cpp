#include "ndet/faultmodels.hpp"

#include <cstdint>
#include <numeric>

namespace ndet {

namespace {

std::size_t slot(LineId l, bool v) { return 2 * static_cast<std::size_t>(l) + (v ? 1 : 0); }

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<StuckAtFault> stuck_at_representatives(const Circuit& circuit) {
  const std::size_t n = circuit.num_lines();
  DisjointSets sets(2 * n);

  for (LineId in = 0; in < n; ++in) {
    const auto& fo = circuit.fanout(in);
    if (fo.size() != 1 || circuit.is_output(in)) continue;
    const Gate& gate = circuit.gates()[fo.front()];
    switch (gate.kind) {
      case GateKind::And: sets.unite(slot(in, false), slot(gate.output, false)); break;
      case GateKind::Nand: sets.unite(slot(in, false), slot(gate.output, true)); break;
      case GateKind::Or: sets.unite(slot(in, true), slot(gate.output, true)); break;
      case GateKind::Nor: sets.unite(slot(in, true), slot(gate.output, false)); break;
      case GateKind::Not:
        sets.unite(slot(in, false), slot(gate.output, true));
        sets.unite(slot(in, true), slot(gate.output, false));
        break;
      case GateKind::Buf:
        sets.unite(slot(in, false), slot(gate.output, false));
        sets.unite(slot(in, true), slot(gate.output, true));
        break;
      case GateKind::Xor:
      case GateKind::Xnor: break;
    }
  }

  // Representative: the deepest member of each class, ties to the larger line id.
  std::vector<std::size_t> best(2 * n, SIZE_MAX);
  for (std::size_t s = 0; s < 2 * n; ++s) {
    const std::size_t root = sets.find(s);
    const auto line = static_cast<LineId>(s / 2);
    if (best[root] == SIZE_MAX) {
      best[root] = s;
      continue;
    }
    const auto cur = static_cast<LineId>(best[root] / 2);
    if (circuit.level(line) > circuit.level(cur) || (circuit.level(line) == circuit.level(cur) && line > cur))
      best[root] = s;
  }
  std::vector<StuckAtFault> rep(2 * n);
  for (std::size_t s = 0; s < 2 * n; ++s) {
    const std::size_t r = best[sets.find(s)];
    rep[s] = StuckAtFault{static_cast<LineId>(r / 2), (r % 2) == 1};
  }
  return rep;
}

std::vector<StuckAtFault> enumerate_stuck_at(const Circuit& circuit, bool collapse) {
  std::vector<StuckAtFault> faults;
  const std::vector<StuckAtFault> rep = collapse ? stuck_at_representatives(circuit) : std::vector<StuckAtFault>{};
  for (LineId l = 0; l < circuit.num_lines(); ++l) {
    for (bool v : {false, true}) {
      const StuckAtFault f{l, v};
      if (collapse && rep[slot(l, v)] != f) continue;
      faults.push_back(f);
    }
  }
  return faults;
}

std::vector<LineId> bridge_sites(const Circuit& circuit) {
  std::vector<LineId> sites;
  for (LineId l = 0; l < circuit.num_lines(); ++l) {
    if (circuit.is_input(l)) continue;
    const Gate& g = circuit.gates()[static_cast<std::size_t>(circuit.driver(l))];
    if (g.inputs.size() >= 2) sites.push_back(l);
  }
  return sites;
}

std::vector<BridgingFault> enumerate_bridging(const Circuit& circuit) {
  const auto sites = bridge_sites(circuit);
  std::vector<std::vector<bool>> cones;
  cones.reserve(sites.size());
  for (LineId s : sites) cones.push_back(fanout_cone_mask(circuit, s));

  std::vector<BridgingFault> faults;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      const LineId u = sites[i];
      const LineId v = sites[j];
      if (cones[i][v] || cones[j][u]) continue;
      faults.push_back({u, false, v, true});
      faults.push_back({u, true, v, false});
      faults.push_back({v, false, u, true});
      faults.push_back({v, true, u, false});
    }
  }
  return faults;
}

}  // namespace ndet
