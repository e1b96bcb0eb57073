#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ndet {

using LineId = std::uint32_t;

// Index into the 2^p input space. The first declared primary input is the
// most significant bit: input i sits at bit (p - 1 - i).
using VectorId = std::uint32_t;

inline constexpr std::size_t kDefaultInputCap = 20;

enum class GateKind : std::uint8_t { And, Nand, Or, Nor, Xor, Xnor, Not, Buf };

std::string_view to_string(GateKind kind);
std::optional<GateKind> parse_gate_kind(std::string_view name);

// Multi-input kinds require at least two inputs; NOT/BUF exactly one.
bool is_single_input(GateKind kind);

struct Gate {
  LineId output = 0;
  GateKind kind = GateKind::Buf;
  std::vector<LineId> inputs;

  bool operator==(const Gate&) const = default;
};

enum class ParseErrorKind {
  Syntax,
  DuplicateDriver,
  UndeclaredLine,
  UnknownGateKind,
  Arity,
  Cycle,
  InputCapExceeded,
  NoInputs,
};

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line_number, const std::string& message);

  ParseErrorKind kind() const { return kind_; }
  // 1-based source line of the offending statement, 0 when not tied to one.
  std::size_t line_number() const { return line_number_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_number_;
};

// Immutable, levelized combinational network. Lines are numbered in the
// order their defining statement (INPUT or gate assignment) appears.
class Circuit {
 public:
  static constexpr std::int32_t kNoDriver = -1;

  std::size_t num_lines() const { return names_.size(); }
  std::size_t num_inputs() const { return inputs_.size(); }
  std::size_t num_vectors() const { return std::size_t{1} << inputs_.size(); }

  const std::string& name(LineId l) const { return names_.at(l); }
  std::optional<LineId> find(std::string_view name) const;

  const std::vector<LineId>& inputs() const { return inputs_; }
  const std::vector<LineId>& outputs() const { return outputs_; }
  const std::vector<Gate>& gates() const { return gates_; }

  // Gate indices in an order where every gate follows its fan-in.
  const std::vector<std::uint32_t>& eval_order() const { return eval_order_; }

  std::uint32_t level(LineId l) const { return levels_.at(l); }
  // Gate index driving l, or kNoDriver for primary inputs.
  std::int32_t driver(LineId l) const { return drivers_.at(l); }
  bool is_input(LineId l) const { return driver(l) == kNoDriver; }
  bool is_output(LineId l) const;
  // Position of l among the primary inputs; l must be an input.
  std::size_t input_position(LineId l) const;

  // Gate indices reading l, one entry per reference (a gate reading l twice
  // appears twice).
  const std::vector<std::uint32_t>& fanout(LineId l) const { return fanouts_.at(l); }

  bool operator==(const Circuit& o) const {
    return names_ == o.names_ && inputs_ == o.inputs_ && outputs_ == o.outputs_ && gates_ == o.gates_;
  }

  // Builds from already-resolved parts; validates all structural invariants
  // and throws ParseError (line number 0) on violation.
  static Circuit build(std::vector<std::string> names, std::vector<LineId> inputs,
                       std::vector<LineId> outputs, std::vector<Gate> gates,
                       std::size_t input_cap = kDefaultInputCap);

 private:
  void finalize(std::size_t input_cap, const std::vector<std::size_t>& gate_source_lines);
  friend Circuit parse_bench(std::string_view text, std::size_t input_cap);

  std::vector<std::string> names_;
  std::vector<LineId> inputs_;
  std::vector<LineId> outputs_;
  std::vector<Gate> gates_;
  std::vector<std::uint32_t> eval_order_;
  std::vector<std::uint32_t> levels_;
  std::vector<std::int32_t> drivers_;
  std::vector<std::vector<std::uint32_t>> fanouts_;
  std::vector<std::int32_t> input_pos_;
};

// ISCAS ".bench" reader: INPUT(x), OUTPUT(x), x = KIND(a, b, ...), '#' comments.
Circuit parse_bench(std::string_view text, std::size_t input_cap = kDefaultInputCap);

// Writes statements back in line-id order so that parse_bench(to_bench(c)) == c.
std::string to_bench(const Circuit& circuit);

// Lines transitively driven by l, excluding l, in ascending id order.
std::vector<LineId> fanout_cone(const Circuit& circuit, LineId l);

// Same relation as a membership mask indexed by LineId.
std::vector<bool> fanout_cone_mask(const Circuit& circuit, LineId l);

}  // namespace ndet
