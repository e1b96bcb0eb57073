#include "ndet/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

namespace ndet {

namespace {

constexpr struct {
  GateKind kind;
  std::string_view name;
} kGateNames[] = {
    {GateKind::And, "AND"}, {GateKind::Nand, "NAND"}, {GateKind::Or, "OR"},   {GateKind::Nor, "NOR"},
    {GateKind::Xor, "XOR"}, {GateKind::Xnor, "XNOR"}, {GateKind::Not, "NOT"}, {GateKind::Buf, "BUF"},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string r(s);
  for (char& c : r) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return r;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' || c == '=' || c == '#';
  });
}

// Splits "KIND(a, b)" into KIND and argument names; nullopt on malformed text.
std::optional<std::pair<std::string_view, std::vector<std::string_view>>> split_call(std::string_view s) {
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') return std::nullopt;
  std::string_view head = trim(s.substr(0, open));
  std::string_view body = s.substr(open + 1, s.size() - open - 2);
  std::vector<std::string_view> args;
  if (!trim(body).empty()) {
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      std::string_view arg = trim(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start));
      if (!valid_name(arg)) return std::nullopt;
      args.push_back(arg);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  return std::make_pair(head, std::move(args));
}

}  // namespace

std::string_view to_string(GateKind kind) {
  for (const auto& g : kGateNames)
    if (g.kind == kind) return g.name;
  return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view name) {
  const std::string u = upper(name);
  if (u == "BUFF") return GateKind::Buf;
  if (u == "INV") return GateKind::Not;
  for (const auto& g : kGateNames)
    if (g.name == u) return g.kind;
  return std::nullopt;
}

bool is_single_input(GateKind kind) { return kind == GateKind::Not || kind == GateKind::Buf; }

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::Syntax: return "syntax error";
    case ParseErrorKind::DuplicateDriver: return "duplicate driver";
    case ParseErrorKind::UndeclaredLine: return "undeclared line";
    case ParseErrorKind::UnknownGateKind: return "unknown gate kind";
    case ParseErrorKind::Arity: return "arity violation";
    case ParseErrorKind::Cycle: return "cyclic dependency";
    case ParseErrorKind::InputCapExceeded: return "input cap exceeded";
    case ParseErrorKind::NoInputs: return "no primary inputs";
  }
  return "error";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line_number, const std::string& message)
    : std::runtime_error(line_number ? "line " + std::to_string(line_number) + ": " + std::string(to_string(kind)) +
                                           ": " + message
                                     : std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      line_number_(line_number) {}

std::optional<LineId> Circuit::find(std::string_view name) const {
  for (LineId l = 0; l < names_.size(); ++l)
    if (names_[l] == name) return l;
  return std::nullopt;
}

bool Circuit::is_output(LineId l) const { return std::find(outputs_.begin(), outputs_.end(), l) != outputs_.end(); }

std::size_t Circuit::input_position(LineId l) const {
  const std::int32_t pos = input_pos_.at(l);
  if (pos < 0) throw std::invalid_argument("line '" + names_.at(l) + "' is not a primary input");
  return static_cast<std::size_t>(pos);
}

Circuit Circuit::build(std::vector<std::string> names, std::vector<LineId> inputs, std::vector<LineId> outputs,
                       std::vector<Gate> gates, std::size_t input_cap) {
  Circuit c;
  c.names_ = std::move(names);
  c.inputs_ = std::move(inputs);
  c.outputs_ = std::move(outputs);
  c.gates_ = std::move(gates);
  c.finalize(input_cap, std::vector<std::size_t>(c.gates_.size(), 0));
  return c;
}

void Circuit::finalize(std::size_t input_cap, const std::vector<std::size_t>& src) {
  const std::size_t n = names_.size();
  auto line_ok = [n](LineId l) { return l < n; };

  if (inputs_.empty()) throw ParseError(ParseErrorKind::NoInputs, 0, "circuit declares no INPUT");
  if (inputs_.size() > input_cap)
    throw ParseError(ParseErrorKind::InputCapExceeded, 0,
                     std::to_string(inputs_.size()) + " inputs exceed the cap of " + std::to_string(input_cap));

  drivers_.assign(n, kNoDriver - 1);  // -2: undriven
  input_pos_.assign(n, -1);
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    const LineId l = inputs_[i];
    if (!line_ok(l)) throw ParseError(ParseErrorKind::UndeclaredLine, 0, "input id out of range");
    if (drivers_[l] != kNoDriver - 1)
      throw ParseError(ParseErrorKind::DuplicateDriver, 0, "'" + names_[l] + "' declared twice");
    drivers_[l] = kNoDriver;
    input_pos_[l] = static_cast<std::int32_t>(i);
  }
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const Gate& gate = gates_[g];
    if (!line_ok(gate.output)) throw ParseError(ParseErrorKind::UndeclaredLine, src[g], "gate output id out of range");
    if (drivers_[gate.output] != kNoDriver - 1)
      throw ParseError(ParseErrorKind::DuplicateDriver, src[g], "'" + names_[gate.output] + "' has more than one driver");
    drivers_[gate.output] = static_cast<std::int32_t>(g);
    const bool single = is_single_input(gate.kind);
    if ((single && gate.inputs.size() != 1) || (!single && gate.inputs.size() < 2))
      throw ParseError(ParseErrorKind::Arity, src[g],
                       std::string(to_string(gate.kind)) + " '" + names_[gate.output] + "' has " +
                           std::to_string(gate.inputs.size()) + " input(s)");
    for (LineId in : gate.inputs)
      if (!line_ok(in)) throw ParseError(ParseErrorKind::UndeclaredLine, src[g], "gate input id out of range");
  }
  for (LineId l = 0; l < n; ++l)
    if (drivers_[l] == kNoDriver - 1)
      throw ParseError(ParseErrorKind::UndeclaredLine, 0, "line '" + names_[l] + "' has no driver");
  for (LineId o : outputs_)
    if (!line_ok(o)) throw ParseError(ParseErrorKind::UndeclaredLine, 0, "output id out of range");

  fanouts_.assign(n, {});
  for (std::uint32_t g = 0; g < gates_.size(); ++g)
    for (LineId in : gates_[g].inputs) fanouts_[in].push_back(g);

  // Kahn's algorithm over gates with a FIFO ready queue.
  std::vector<std::uint32_t> pending(gates_.size());
  for (std::uint32_t g = 0; g < gates_.size(); ++g) {
    for (LineId in : gates_[g].inputs)
      if (drivers_[in] != kNoDriver) ++pending[g];
  }
  levels_.assign(n, 0);
  eval_order_.clear();
  std::vector<std::uint32_t> ready;
  for (std::uint32_t g = 0; g < gates_.size(); ++g)
    if (pending[g] == 0) ready.push_back(g);
  std::size_t head = 0;
  while (head < ready.size()) {
    const std::uint32_t g = ready[head++];
    eval_order_.push_back(g);
    std::uint32_t lvl = 0;
    for (LineId in : gates_[g].inputs) lvl = std::max(lvl, levels_[in]);
    levels_[gates_[g].output] = lvl + 1;
    for (std::uint32_t succ : fanouts_[gates_[g].output])
      if (--pending[succ] == 0) ready.push_back(succ);
  }
  if (eval_order_.size() != gates_.size()) {
    for (std::uint32_t g = 0; g < gates_.size(); ++g)
      if (pending[g] != 0)
        throw ParseError(ParseErrorKind::Cycle, src[g], "'" + names_[gates_[g].output] + "' depends on itself");
  }
}

Circuit parse_bench(std::string_view text, std::size_t input_cap) {
  struct PendingGate {
    std::string output;
    GateKind kind;
    std::vector<std::string> inputs;
    std::size_t src;
  };

  std::vector<std::string> names;
  std::unordered_map<std::string, LineId> ids;
  std::vector<std::size_t> def_src;  // source line per LineId
  std::vector<LineId> inputs;
  std::vector<std::pair<std::string, std::size_t>> output_names;
  std::vector<PendingGate> pending;

  auto define = [&](const std::string& name, std::size_t src) -> LineId {
    if (auto it = ids.find(name); it != ids.end())
      throw ParseError(ParseErrorKind::DuplicateDriver, src,
                       "'" + name + "' already defined on line " + std::to_string(def_src[it->second]));
    const auto id = static_cast<LineId>(names.size());
    ids.emplace(name, id);
    names.push_back(name);
    def_src.push_back(src);
    return id;
  };

  std::size_t src = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++src;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view stmt = trim(raw);
    if (stmt.empty()) continue;

    if (const auto eq = stmt.find('='); eq != std::string_view::npos) {
      const std::string_view lhs = trim(stmt.substr(0, eq));
      const auto call = split_call(trim(stmt.substr(eq + 1)));
      if (!valid_name(lhs) || !call) throw ParseError(ParseErrorKind::Syntax, src, "malformed gate statement");
      const auto kind = parse_gate_kind(call->first);
      if (!kind) throw ParseError(ParseErrorKind::UnknownGateKind, src, "'" + std::string(call->first) + "'");
      PendingGate g{std::string(lhs), *kind, {}, src};
      for (auto a : call->second) g.inputs.emplace_back(a);
      define(g.output, src);
      pending.push_back(std::move(g));
      continue;
    }

    const auto call = split_call(stmt);
    if (!call || call->second.size() != 1) throw ParseError(ParseErrorKind::Syntax, src, "unrecognized statement");
    const std::string keyword = upper(call->first);
    const std::string name(call->second.front());
    if (keyword == "INPUT") {
      inputs.push_back(define(name, src));
      if (inputs.size() > input_cap)
        throw ParseError(ParseErrorKind::InputCapExceeded, src,
                         "more than " + std::to_string(input_cap) + " primary inputs");
    } else if (keyword == "OUTPUT") {
      output_names.emplace_back(name, src);
    } else {
      throw ParseError(ParseErrorKind::Syntax, src, "unknown keyword '" + std::string(call->first) + "'");
    }
  }

  auto resolve = [&](const std::string& name, std::size_t at) {
    auto it = ids.find(name);
    if (it == ids.end()) throw ParseError(ParseErrorKind::UndeclaredLine, at, "'" + name + "' is never defined");
    return it->second;
  };

  std::vector<Gate> gates;
  std::vector<std::size_t> gate_src;
  for (const auto& g : pending) {
    Gate gate{ids.at(g.output), g.kind, {}};
    for (const auto& in : g.inputs) gate.inputs.push_back(resolve(in, g.src));
    gates.push_back(std::move(gate));
    gate_src.push_back(g.src);
  }
  std::vector<LineId> outputs;
  for (const auto& [name, at] : output_names) {
    const LineId id = resolve(name, at);
    if (std::find(outputs.begin(), outputs.end(), id) != outputs.end())
      throw ParseError(ParseErrorKind::Syntax, at, "'" + name + "' declared OUTPUT twice");
    outputs.push_back(id);
  }

  Circuit c;
  c.names_ = std::move(names);
  c.inputs_ = std::move(inputs);
  c.outputs_ = std::move(outputs);
  c.gates_ = std::move(gates);
  c.finalize(input_cap, gate_src);
  return c;
}

std::string to_bench(const Circuit& circuit) {
  std::ostringstream out;
  bool outputs_written = false;
  auto write_outputs = [&] {
    for (LineId o : circuit.outputs()) out << "OUTPUT(" << circuit.name(o) << ")\n";
    outputs_written = true;
  };
  for (LineId l = 0; l < circuit.num_lines(); ++l) {
    if (circuit.is_input(l)) {
      out << "INPUT(" << circuit.name(l) << ")\n";
      continue;
    }
    if (!outputs_written) write_outputs();
    const Gate& g = circuit.gates()[static_cast<std::size_t>(circuit.driver(l))];
    out << circuit.name(l) << " = " << to_string(g.kind) << "(";
    for (std::size_t i = 0; i < g.inputs.size(); ++i) out << (i ? ", " : "") << circuit.name(g.inputs[i]);
    out << ")\n";
  }
  if (!outputs_written) write_outputs();
  return out.str();
}

std::vector<bool> fanout_cone_mask(const Circuit& circuit, LineId l) {
  if (l >= circuit.num_lines()) throw std::out_of_range("fanout_cone: invalid line id " + std::to_string(l));
  std::vector<bool> seen(circuit.num_lines(), false);
  std::vector<LineId> stack{l};
  while (!stack.empty()) {
    const LineId cur = stack.back();
    stack.pop_back();
    for (std::uint32_t g : circuit.fanout(cur)) {
      const LineId out = circuit.gates()[g].output;
      if (!seen[out]) {
        seen[out] = true;
        stack.push_back(out);
      }
    }
  }
  return seen;
}

std::vector<LineId> fanout_cone(const Circuit& circuit, LineId l) {
  const auto mask = fanout_cone_mask(circuit, l);
  std::vector<LineId> cone;
  for (LineId i = 0; i < mask.size(); ++i)
    if (mask[i]) cone.push_back(i);
  return cone;
}

}  // namespace ndet
