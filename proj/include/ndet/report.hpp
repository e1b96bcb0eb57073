#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ndet/avgcase.hpp"
#include "ndet/netlist.hpp"

namespace ndet {

inline constexpr std::string_view kToolName = "ndet";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

enum class Mode { Faults, Worst, Avg, CompareDefs, Simulate };
enum class Format { Csv, Json, Text };

std::string_view to_string(Mode m);
std::string_view to_string(Format f);

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitData = 3, kExitInternal = 4 };

struct RunConfig {
  Mode mode = Mode::Worst;
  std::string netlist;    // path, "-" for stdin
  std::string fixture;    // detection-set fixture path, replaces the netlist
  std::string snapshots;  // avg: load test sets instead of running the builder
  std::string dump_snapshots;
  bool collapse = true;
  std::size_t n_max = 10;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  Definition definition = Definition::One;
  std::vector<std::size_t> thresholds_le{1, 2, 3, 4, 5, 10};
  std::vector<std::size_t> thresholds_ge{100, 20, 11};
  std::size_t bin_width = 100;
  // Probability bins cover faults with n_min >= this; 0 means n_max + 1.
  std::size_t hard_min = 0;
  std::size_t input_cap = kDefaultInputCap;
  Format format = Format::Text;
  std::string out;  // empty for stdout
  // Not echoed: results do not depend on it.
  std::size_t workers = 0;
};

// Throws UsageError on a contract violation.
void validate(const RunConfig& config);

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A table cell: absent (blank in CSV, null in JSON), a number kept in its
// rendered decimal form, or free text.
struct Cell {
  enum class Kind { Blank, Number, Text };
  Kind kind = Kind::Blank;
  std::string text;

  static Cell blank() { return {}; }
  static Cell number(std::string rendered) { return {Kind::Number, std::move(rendered)}; }
  static Cell number(std::size_t v) { return {Kind::Number, std::to_string(v)}; }
  static Cell str(std::string s) { return {Kind::Text, std::move(s)}; }
  bool operator==(const Cell&) const = default;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::vector<std::pair<std::string, std::string>> config;  // echoed settings, in order
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<Table> tables;
};

// Row layouts shared by the emitters. Trailing cells after the first one
// that reaches the whole population are blank.
std::vector<Cell> coverage_row(const std::string& circuit, std::span<const Fraction> fractions);
std::vector<Cell> probability_row(const std::string& circuit, std::size_t faults, std::optional<int> definition,
                                  std::span<const std::size_t> counts);

Report build_report(const RunConfig& config, std::istream& stdin_stream);

std::string emit_table(const Report& report, Format format);

// Builds, renders and writes the report. Returns an ExitCode.
int run(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err);

// Command-line entry point; flags may also come from NDET_* environment variables.
int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ndet
