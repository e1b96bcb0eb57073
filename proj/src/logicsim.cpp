#include "ndet/logicsim.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace ndet {

namespace {

using Word = BitVec::Word;

bool inverting(GateKind k) {
  return k == GateKind::Nand || k == GateKind::Nor || k == GateKind::Xnor || k == GateKind::Not;
}

void eval_words(const Gate& gate, std::span<const TruthTable* const> values, TruthTable& out) {
  auto dst = out.words();
  const auto first = values[gate.inputs[0]]->words();
  std::copy(first.begin(), first.end(), dst.begin());
  for (std::size_t i = 1; i < gate.inputs.size(); ++i) {
    const auto src = values[gate.inputs[i]]->words();
    switch (gate.kind) {
      case GateKind::And:
      case GateKind::Nand:
        for (std::size_t w = 0; w < dst.size(); ++w) dst[w] &= src[w];
        break;
      case GateKind::Or:
      case GateKind::Nor:
        for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= src[w];
        break;
      case GateKind::Xor:
      case GateKind::Xnor:
        for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
        break;
      case GateKind::Not:
      case GateKind::Buf:
        break;
    }
  }
  if (inverting(gate.kind)) {
    for (Word& w : dst) w = ~w;
    out.trim();
  }
}

LineId fault_site(const FaultInjection& fault) {
  if (const auto* sa = std::get_if<StuckAtFault>(&fault)) return sa->line;
  return std::get<BridgingFault>(fault).victim;
}

using Planes = TernarySimulator::Planes;

Planes eval_planes(const Gate& gate, const std::vector<Planes>& v) {
  Planes acc = v[gate.inputs[0]];
  for (std::size_t i = 1; i < gate.inputs.size(); ++i) {
    const Planes b = v[gate.inputs[i]];
    switch (gate.kind) {
      case GateKind::And:
      case GateKind::Nand:
        acc = {acc.one & b.one, acc.zero | b.zero};
        break;
      case GateKind::Or:
      case GateKind::Nor:
        acc = {acc.one | b.one, acc.zero & b.zero};
        break;
      case GateKind::Xor:
      case GateKind::Xnor:
        acc = {(acc.one & b.zero) | (acc.zero & b.one), (acc.one & b.one) | (acc.zero & b.zero)};
        break;
      case GateKind::Not:
      case GateKind::Buf:
        break;
    }
  }
  if (inverting(gate.kind)) std::swap(acc.one, acc.zero);
  return acc;
}

}  // namespace

char to_char(Ternary t) {
  switch (t) {
    case Ternary::Zero: return '0';
    case Ternary::One: return '1';
    case Ternary::X: return 'X';
  }
  return '?';
}

TernaryVector to_ternary_vector(VectorId v, std::size_t num_inputs) {
  TernaryVector t(num_inputs);
  for (std::size_t i = 0; i < num_inputs; ++i) t[i] = to_ternary((v >> (num_inputs - 1 - i)) & 1U);
  return t;
}

TruthTable input_pattern(std::size_t num_inputs, std::size_t input_pos) {
  static constexpr Word kLowPatterns[6] = {
      0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
      0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
  };
  if (input_pos >= num_inputs) throw std::out_of_range("input_pattern: position out of range");
  TruthTable t(std::size_t{1} << num_inputs);
  const std::size_t bit = num_inputs - 1 - input_pos;
  auto words = t.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (bit < 6)
      words[w] = kLowPatterns[bit];
    else
      words[w] = ((w >> (bit - 6)) & 1U) ? ~Word{0} : Word{0};
  }
  t.trim();
  return t;
}

std::vector<TruthTable> simulate_all(const Circuit& circuit, const std::optional<FaultInjection>& fault) {
  ExhaustiveSimulator sim(circuit);
  if (!fault) return sim.good_tables();
  return sim.faulty_lines(*fault);
}

ExhaustiveSimulator::ExhaustiveSimulator(const Circuit& circuit) : circuit_(circuit) {
  const std::size_t p = circuit.num_inputs();
  good_.assign(circuit.num_lines(), TruthTable(circuit.num_vectors()));
  for (std::size_t i = 0; i < p; ++i) good_[circuit.inputs()[i]] = input_pattern(p, i);
  std::vector<const TruthTable*> view(good_.size());
  for (std::size_t l = 0; l < good_.size(); ++l) view[l] = &good_[l];
  for (std::uint32_t g : circuit.eval_order()) {
    const Gate& gate = circuit.gates()[g];
    eval_words(gate, view, good_[gate.output]);
  }
}

std::vector<const TruthTable*> ExhaustiveSimulator::inject(const FaultInjection& fault,
                                                           std::vector<TruthTable>& storage) const {
  validate_injection(circuit_, fault);
  const LineId site = fault_site(fault);
  const auto cone = fanout_cone_mask(circuit_, site);

  std::vector<const TruthTable*> view(good_.size());
  for (std::size_t l = 0; l < good_.size(); ++l) view[l] = &good_[l];

  // Slot 0 is the fault site, the rest follow gate evaluation order.
  storage.clear();
  storage.reserve(1 + static_cast<std::size_t>(std::count(cone.begin(), cone.end(), true)));
  if (const auto* sa = std::get_if<StuckAtFault>(&fault)) {
    storage.emplace_back(circuit_.num_vectors(), sa->value);
  } else {
    const auto& br = std::get<BridgingFault>(fault);
    TruthTable active = br.victim_value ? good_[br.victim] : ~good_[br.victim];
    active &= br.aggressor_value ? good_[br.aggressor] : ~good_[br.aggressor];
    storage.push_back(good_[br.victim] ^ active);
  }
  view[site] = &storage.back();

  for (std::uint32_t g : circuit_.eval_order()) {
    const Gate& gate = circuit_.gates()[g];
    if (!cone[gate.output]) continue;
    storage.emplace_back(circuit_.num_vectors());
    eval_words(gate, view, storage.back());
    view[gate.output] = &storage.back();
  }
  return view;
}

std::vector<TruthTable> ExhaustiveSimulator::faulty_lines(const FaultInjection& fault) const {
  std::vector<TruthTable> storage;
  const auto view = inject(fault, storage);
  std::vector<TruthTable> out;
  out.reserve(view.size());
  for (const TruthTable* t : view) out.push_back(*t);
  return out;
}

std::vector<TruthTable> ExhaustiveSimulator::faulty_outputs(const FaultInjection& fault) const {
  std::vector<TruthTable> storage;
  const auto view = inject(fault, storage);
  std::vector<TruthTable> out;
  for (LineId o : circuit_.outputs()) out.push_back(*view[o]);
  return out;
}

BitVec ExhaustiveSimulator::detection(const FaultInjection& fault) const {
  std::vector<TruthTable> storage;
  const auto view = inject(fault, storage);
  BitVec diff(circuit_.num_vectors());
  for (LineId o : circuit_.outputs()) {
    if (view[o] == &good_[o]) continue;
    diff |= good_[o] ^ *view[o];
  }
  return diff;
}

TernarySimulator::TernarySimulator(const Circuit& circuit)
    : circuit_(circuit),
      inputs_(circuit.num_inputs()),
      good_(circuit.num_lines()),
      faulty_(circuit.num_lines()) {}

void TernarySimulator::load(std::span<const TernaryVector> vectors) {
  if (vectors.size() > kLanes) throw std::invalid_argument("TernarySimulator: more than 64 vectors");
  lanes_ = vectors.size();
  std::fill(inputs_.begin(), inputs_.end(), Planes{});
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != inputs_.size())
      throw std::invalid_argument("TernarySimulator: vector width does not match input count");
    const std::uint64_t bit = std::uint64_t{1} << k;
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      if (vectors[k][i] == Ternary::One) inputs_[i].one |= bit;
      if (vectors[k][i] == Ternary::Zero) inputs_[i].zero |= bit;
    }
  }
}

void TernarySimulator::load_common(std::span<const VectorId> a, std::span<const VectorId> b) {
  if (a.size() != b.size() || a.size() > kLanes) throw std::invalid_argument("TernarySimulator: bad common batch");
  lanes_ = a.size();
  const std::size_t p = inputs_.size();
  std::fill(inputs_.begin(), inputs_.end(), Planes{});
  for (std::size_t k = 0; k < a.size(); ++k) {
    const VectorId same = ~(a[k] ^ b[k]);
    const VectorId ones = same & a[k];
    const VectorId zeros = same & ~a[k];
    for (std::size_t i = 0; i < p; ++i) {
      const std::size_t shift = p - 1 - i;
      inputs_[i].one |= std::uint64_t{(ones >> shift) & 1U} << k;
      inputs_[i].zero |= std::uint64_t{(zeros >> shift) & 1U} << k;
    }
  }
}

void TernarySimulator::evaluate(std::vector<Planes>& values, const FaultInjection* fault) {
  const std::uint64_t all = ~std::uint64_t{0};
  const StuckAtFault* sa = fault ? std::get_if<StuckAtFault>(fault) : nullptr;
  const BridgingFault* br = fault ? std::get_if<BridgingFault>(fault) : nullptr;
  auto apply = [&](LineId l) {
    if (sa && sa->line == l) values[l] = sa->value ? Planes{all, 0} : Planes{0, all};
    if (br && br->victim == l) {
      // Activation only on lanes where both lines are binary with the required values.
      const Planes v = good_[br->victim];
      const Planes a = good_[br->aggressor];
      const std::uint64_t act = (br->victim_value ? v.one : v.zero) & (br->aggressor_value ? a.one : a.zero);
      Planes out = values[l];
      if (br->victim_value)
        out = {out.one & ~act, out.zero | act};
      else
        out = {out.one | act, out.zero & ~act};
      values[l] = out;
    }
  };
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    values[circuit_.inputs()[i]] = inputs_[i];
    apply(circuit_.inputs()[i]);
  }
  for (std::uint32_t g : circuit_.eval_order()) {
    const Gate& gate = circuit_.gates()[g];
    values[gate.output] = eval_planes(gate, values);
    apply(gate.output);
  }
}

void TernarySimulator::run(const std::optional<FaultInjection>& fault) {
  evaluate(good_, nullptr);
  if (fault) {
    if (validated_ != fault) {
      validate_injection(circuit_, *fault);
      validated_ = fault;
    }
    evaluate(faulty_, &*fault);
  } else {
    faulty_ = good_;
  }
}

std::uint64_t TernarySimulator::detected_lanes() const {
  std::uint64_t hit = 0;
  for (LineId o : circuit_.outputs()) {
    const Planes g = good_[o];
    const Planes f = faulty_[o];
    hit |= (g.one & f.zero) | (g.zero & f.one);
  }
  return hit & lane_mask();
}

std::vector<Ternary> simulate3(const Circuit& circuit, const TernaryVector& t,
                               const std::optional<FaultInjection>& fault) {
  TernarySimulator sim(circuit);
  sim.load(std::span<const TernaryVector>(&t, 1));
  sim.run(fault);
  std::vector<Ternary> out;
  for (LineId o : circuit.outputs()) {
    const auto v = fault ? sim.faulty(o) : sim.good(o);
    out.push_back((v.one & 1U) ? Ternary::One : (v.zero & 1U) ? Ternary::Zero : Ternary::X);
  }
  return out;
}

bool detects3(const Circuit& circuit, const FaultInjection& fault, const TernaryVector& t) {
  TernarySimulator sim(circuit);
  sim.load(std::span<const TernaryVector>(&t, 1));
  sim.run(fault);
  return sim.detected_lanes() != 0;
}

}  // namespace ndet
