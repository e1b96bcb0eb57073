#include "ndet/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "ndet/detmap.hpp"
#include "ndet/faultmodels.hpp"
#include "ndet/worstcase.hpp"

namespace ndet {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string join(std::span<const std::size_t> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  return s;
}

std::string join_vectors(const std::vector<VectorId>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? " " : "") + std::to_string(values[i]);
  return s;
}

std::string read_source(const std::string& path, std::istream& stdin_stream) {
  if (path == "-") return {std::istreambuf_iterator<char>(stdin_stream), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string circuit_name(const std::string& path) {
  if (path == "-") return "stdin";
  return std::filesystem::path(path).stem().string();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << data;
  if (!out.flush()) throw DataError("cannot write '" + path + "'");
}

struct Input {
  std::shared_ptr<const Circuit> circuit;  // null in fixture mode
  std::string name;
  std::string fixture_text;
};

Input load_input(const RunConfig& config, std::istream& stdin_stream) {
  Input in;
  if (!config.fixture.empty()) {
    in.fixture_text = read_source(config.fixture, stdin_stream);
    in.name = circuit_name(config.fixture);
    return in;
  }
  const std::string path = config.netlist.empty() ? "-" : config.netlist;
  in.circuit = std::make_shared<const Circuit>(parse_bench(read_source(path, stdin_stream), config.input_cap));
  in.name = circuit_name(path);
  return in;
}

DetectionUniverse load_universe(const RunConfig& config, const Input& in) {
  if (!in.circuit) return load_fixture(in.fixture_text, in.name);
  return build_universe(in.circuit, config.collapse, in.name, config.workers);
}

Cell name_cell(const std::shared_ptr<const Circuit>& c, LineId l) {
  // Fixtures have no circuit; fall back to the 1-based line number.
  if (!c) return Cell::str(std::to_string(l + 1));
  if (l >= c->num_lines()) return Cell::blank();
  return Cell::str(c->name(l));
}

void add_universe_notes(Report& r, const DetectionUniverse& u) {
  r.notes.emplace_back("circuit", u.name);
  r.notes.emplace_back("inputs", std::to_string(u.num_inputs));
  r.notes.emplace_back("target_faults", std::to_string(u.targets.size()));
  r.notes.emplace_back("untargeted_faults", std::to_string(u.untargeted.size()));
  r.notes.emplace_back("dropped_targets", std::to_string(u.dropped_targets.size()));
  r.notes.emplace_back("dropped_untargeted", std::to_string(u.dropped_untargeted.size()));
}

Table n_min_table(const DetectionUniverse& u, const std::vector<NMin>& n_min) {
  Table t{"n_min", {"index", "fault", "victim", "aggressor", "tests", "n_min"}, {}};
  for (std::size_t g = 0; g < u.untargeted.size(); ++g) {
    const auto& e = u.untargeted[g];
    t.rows.push_back({Cell::number(g), Cell::str(e.label),
                      e.fault ? name_cell(u.circuit, e.fault->victim) : Cell::blank(),
                      e.fault ? name_cell(u.circuit, e.fault->aggressor) : Cell::blank(), Cell::number(e.tests.size()),
                      n_min[g] ? Cell::number(*n_min[g]) : Cell::blank()});
  }
  return t;
}

void worst_tables(Report& r, const RunConfig& config, const DetectionUniverse& u, const std::vector<NMin>& n_min) {
  Table cov{"worst_case_coverage", {"circuit", "faults"}, {}};
  for (std::size_t th : config.thresholds_le) cov.columns.push_back("n_min<=" + std::to_string(th));
  Table tail{"worst_case_tail", {"circuit", "faults"}, {}};
  for (std::size_t th : config.thresholds_ge) {
    tail.columns.push_back("n_min>=" + std::to_string(th));
    tail.columns.push_back("n_min>=" + std::to_string(th) + " %");
  }
  if (!n_min.empty()) {
    cov.rows.push_back(coverage_row(u.name, coverage_table(n_min, config.thresholds_le)));
    std::vector<Cell> row{Cell::str(u.name), Cell::number(n_min.size())};
    for (const auto& f : tail_table(n_min, config.thresholds_ge)) {
      row.push_back(Cell::number(f.count));
      row.push_back(Cell::number(format_percent(f)));
    }
    tail.rows.push_back(std::move(row));
  }

  const Histogram h = histogram(n_min, config.bin_width);
  Table hist{"n_min_histogram", {"bin_lower", "count"}, {}};
  for (const auto& b : h.bins) hist.rows.push_back({Cell::number(b.lower), Cell::number(b.count)});
  hist.rows.push_back({Cell::str("unbounded"), Cell::number(h.unbounded)});

  r.tables.push_back(std::move(cov));
  r.tables.push_back(std::move(tail));
  r.tables.push_back(std::move(hist));
  r.tables.push_back(n_min_table(u, n_min));
}

TrialEnsemble make_ensemble(const RunConfig& config, const DetectionUniverse& u, Definition def,
                            std::istream& stdin_stream) {
  if (!config.snapshots.empty()) {
    try {
      TrialEnsemble e = load_snapshots(read_source(config.snapshots, stdin_stream));
      e.definition = def;
      e.seed = config.seed;
      return e;
    } catch (const std::invalid_argument& ex) {
      throw DataError(ex.what());
    }
  }
  BuildOptions opt{config.n_max, config.trials, config.seed, def, config.workers};
  try {
    return procedure1_build(u, opt);
  } catch (const std::invalid_argument& ex) {
    throw DataError(ex.what());
  }
}

std::vector<std::size_t> hard_bins(const ProbabilityTable& table, std::span<const std::size_t> hard) {
  std::vector<Fraction> ps;
  for (std::size_t g : hard) ps.push_back(table.p(table.n_max, g));
  return probability_bins(ps);
}

std::vector<std::string> bin_columns() {
  std::vector<std::string> cols{"circuit", "faults", "def"};
  for (std::size_t e = 0; e < kProbabilityEdges; ++e) {
    const std::size_t tenths = kProbabilityEdges - 1 - e;
    cols.push_back("p>=" + std::to_string(tenths / 10) + "." + std::to_string(tenths % 10));
  }
  return cols;
}

void add_ensemble_notes(Report& r, const TrialEnsemble& e, const std::string& prefix) {
  r.notes.emplace_back(prefix + "trials", std::to_string(e.trials()));
  if (e.definition == Definition::Two) {
    r.notes.emplace_back(prefix + "definition2_counting", "greedy insertion order (lower bound)");
    r.notes.emplace_back(prefix + "definition1_fallbacks", std::to_string(e.fallbacks));
  }
}

std::size_t resolved_hard_min(const RunConfig& config, std::size_t n_max) {
  return config.hard_min ? config.hard_min : n_max + 1;
}

void avg_tables(Report& r, const RunConfig& config, const DetectionUniverse& u, const std::vector<NMin>& n_min,
                std::istream& stdin_stream) {
  const TrialEnsemble e = make_ensemble(config, u, config.definition, stdin_stream);
  if (!config.dump_snapshots.empty()) write_file(config.dump_snapshots, dump_snapshots(e));
  const ProbabilityTable pt = estimate_probabilities(e, u, config.workers);
  add_ensemble_notes(r, e, "");

  const auto hard = hard_faults(n_min, resolved_hard_min(config, e.n_max));
  r.notes.emplace_back("probability_n", std::to_string(e.n_max));
  r.notes.emplace_back("hard_fault_min_n_min", std::to_string(resolved_hard_min(config, e.n_max)));
  Table bins{"probability_bins", bin_columns(), {}};
  if (!hard.empty()) {
    const auto counts = hard_bins(pt, hard);
    bins.rows.push_back(probability_row(u.name, hard.size(), static_cast<int>(config.definition), counts));
  }

  Table probs{"detection_probabilities", {"index", "fault", "n_min"}, {}};
  for (std::size_t n = 1; n <= e.n_max; ++n) probs.columns.push_back("d" + std::to_string(n));
  for (std::size_t n = 1; n <= e.n_max; ++n) probs.columns.push_back("p" + std::to_string(n));
  for (std::size_t g = 0; g < u.untargeted.size(); ++g) {
    std::vector<Cell> row{Cell::number(g), Cell::str(u.untargeted[g].label),
                          n_min[g] ? Cell::number(*n_min[g]) : Cell::blank()};
    for (std::size_t n = 1; n <= e.n_max; ++n) row.push_back(Cell::number(std::size_t{pt.d(n, g)}));
    for (std::size_t n = 1; n <= e.n_max; ++n) row.push_back(Cell::number(format_probability(pt.p(n, g))));
    probs.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(bins));
  r.tables.push_back(std::move(probs));
}

void compare_tables(Report& r, const RunConfig& config, const DetectionUniverse& u, const std::vector<NMin>& n_min,
                    std::istream& stdin_stream) {
  if (!u.circuit) throw DataError("compare-defs needs a netlist: Definition 2 simulates the circuit");
  Table bins{"probability_bins_by_definition", bin_columns(), {}};
  Table probs{"detection_probabilities_by_definition", {"index", "fault", "n_min", "p_def1", "p_def2"}, {}};
  std::vector<ProbabilityTable> tables;
  const auto hard = hard_faults(n_min, resolved_hard_min(config, config.n_max));
  r.notes.emplace_back("probability_n", std::to_string(config.n_max));
  r.notes.emplace_back("hard_fault_min_n_min", std::to_string(resolved_hard_min(config, config.n_max)));
  for (Definition def : {Definition::One, Definition::Two}) {
    RunConfig c = config;
    c.snapshots.clear();
    const TrialEnsemble e = make_ensemble(c, u, def, stdin_stream);
    add_ensemble_notes(r, e, def == Definition::One ? "def1_" : "def2_");
    tables.push_back(estimate_probabilities(e, u, config.workers));
    if (!hard.empty())
      bins.rows.push_back(probability_row(u.name, hard.size(), static_cast<int>(def), hard_bins(tables.back(), hard)));
  }
  for (std::size_t g = 0; g < u.untargeted.size(); ++g) {
    probs.rows.push_back({Cell::number(g), Cell::str(u.untargeted[g].label),
                          n_min[g] ? Cell::number(*n_min[g]) : Cell::blank(),
                          Cell::number(format_probability(tables[0].p(config.n_max, g))),
                          Cell::number(format_probability(tables[1].p(config.n_max, g)))});
  }
  r.tables.push_back(std::move(bins));
  r.tables.push_back(std::move(probs));
}

void faults_tables(Report& r, const RunConfig& config, const Input& in) {
  Table f{"target_faults", {"index", "fault", "line", "value"}, {}};
  Table g{"untargeted_faults", {"index", "fault", "victim", "aggressor"}, {}};
  if (in.circuit) {
    const auto targets = enumerate_stuck_at(*in.circuit, config.collapse);
    const auto untargeted = enumerate_bridging(*in.circuit);
    for (std::size_t i = 0; i < targets.size(); ++i)
      f.rows.push_back({Cell::number(i), Cell::str(label(targets[i])), name_cell(in.circuit, targets[i].line),
                        Cell::number(std::size_t{targets[i].value})});
    for (std::size_t i = 0; i < untargeted.size(); ++i)
      g.rows.push_back({Cell::number(i), Cell::str(label(untargeted[i])), name_cell(in.circuit, untargeted[i].victim),
                        name_cell(in.circuit, untargeted[i].aggressor)});
    r.notes.emplace_back("circuit", in.name);
    r.notes.emplace_back("inputs", std::to_string(in.circuit->num_inputs()));
  } else {
    const DetectionUniverse u = load_fixture(in.fixture_text, in.name);
    add_universe_notes(r, u);
    for (std::size_t i = 0; i < u.targets.size(); ++i)
      f.rows.push_back({Cell::number(i), Cell::str(u.targets[i].label), name_cell(nullptr, u.targets[i].fault.line),
                        Cell::number(std::size_t{u.targets[i].fault.value})});
    for (std::size_t i = 0; i < u.untargeted.size(); ++i)
      g.rows.push_back({Cell::number(i), Cell::str(u.untargeted[i].label),
                        u.untargeted[i].fault ? name_cell(nullptr, u.untargeted[i].fault->victim) : Cell::blank(),
                        u.untargeted[i].fault ? name_cell(nullptr, u.untargeted[i].fault->aggressor) : Cell::blank()});
  }
  r.tables.push_back(std::move(f));
  r.tables.push_back(std::move(g));
}

void simulate_tables(Report& r, const RunConfig& config, const Input& in) {
  if (!in.circuit) throw DataError("simulate needs a netlist");
  const Circuit& c = *in.circuit;
  const ExhaustiveSimulator sim(c);
  Table tt{"truth_tables", {"line", "name", "driver", "ones", "bits"}, {}};
  for (LineId l = 0; l < c.num_lines(); ++l) {
    std::string bits;
    bits.reserve(c.num_vectors());
    for (std::size_t v = 0; v < c.num_vectors(); ++v) bits.push_back(sim.good(l).test(v) ? '1' : '0');
    const std::string driver =
        c.is_input(l) ? "INPUT" : std::string(to_string(c.gates()[static_cast<std::size_t>(c.driver(l))].kind));
    tt.rows.push_back({Cell::number(std::size_t{l} + 1), Cell::str(c.name(l)), Cell::str(driver),
                       Cell::number(sim.good(l).count()), Cell::str(bits)});
  }
  const DetectionUniverse u = build_universe(in.circuit, config.collapse, in.name, config.workers);
  add_universe_notes(r, u);
  Table ds{"detection_sets", {"model", "fault", "tests", "vectors"}, {}};
  for (const auto& e : u.targets)
    ds.rows.push_back({Cell::str("target"), Cell::str(e.label), Cell::number(e.tests.size()),
                       Cell::str(join_vectors(e.tests.vectors()))});
  for (const auto& e : u.untargeted)
    ds.rows.push_back({Cell::str("untargeted"), Cell::str(e.label), Cell::number(e.tests.size()),
                       Cell::str(join_vectors(e.tests.vectors()))});
  Table dropped{"undetectable_faults", {"model", "fault"}, {}};
  for (const auto& l : u.dropped_targets) dropped.rows.push_back({Cell::str("target"), Cell::str(l)});
  for (const auto& l : u.dropped_untargeted) dropped.rows.push_back({Cell::str("untargeted"), Cell::str(l)});
  r.tables.push_back(std::move(tt));
  r.tables.push_back(std::move(ds));
  r.tables.push_back(std::move(dropped));
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string emit_csv(const Report& r) {
  std::ostringstream out;
  out << "# " << kToolName << ' ' << kToolVersion << '\n';
  for (const auto& [k, v] : r.config) out << "# config " << k << '=' << v << '\n';
  for (const auto& [k, v] : r.notes) out << "# note " << k << '=' << v << '\n';
  for (const auto& t : r.tables) {
    out << "\n# table " << t.name << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_escape(t.columns[i]);
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i].text);
      out << '\n';
    }
  }
  return out.str();
}

ordered_json cell_json(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::Blank: return nullptr;
    case Cell::Kind::Text: return c.text;
    case Cell::Kind::Number:
      if (c.text.find('.') != std::string::npos) return std::stod(c.text);
      return std::stoull(c.text);
  }
  return nullptr;
}

std::string emit_json(const Report& r) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config"] = ordered_json::object();
  for (const auto& [k, v] : r.config) j["config"][k] = v;
  j["notes"] = ordered_json::object();
  for (const auto& [k, v] : r.notes) j["notes"][k] = v;
  j["tables"] = ordered_json::array();
  for (const auto& t : r.tables) {
    ordered_json jt;
    jt["name"] = t.name;
    jt["columns"] = t.columns;
    jt["rows"] = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json jr = ordered_json::array();
      for (const auto& c : row) jr.push_back(cell_json(c));
      jt["rows"].push_back(std::move(jr));
    }
    j["tables"].push_back(std::move(jt));
  }
  return j.dump(2) + "\n";
}

std::string emit_text(const Report& r) {
  std::ostringstream out;
  out << kToolName << ' ' << kToolVersion << '\n';
  std::size_t key_width = 0;
  for (const auto& [k, v] : r.config) key_width = std::max(key_width, k.size());
  for (const auto& [k, v] : r.notes) key_width = std::max(key_width, k.size());
  for (const auto& [k, v] : r.config) out << "  " << k << std::string(key_width - k.size() + 2, ' ') << v << '\n';
  for (const auto& [k, v] : r.notes) out << "  " << k << std::string(key_width - k.size() + 2, ' ') << v << '\n';
  for (const auto& t : r.tables) {
    out << "\n== " << t.name << " ==\n";
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
    for (const auto& row : t.rows)
      for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
        width[i] = std::max(width[i], row[i].text.size());
    auto line = [&](auto&& cell_text, std::size_t n) {
      std::string s;
      for (std::size_t i = 0; i < n; ++i) {
        const std::string txt = cell_text(i);
        s += txt;
        if (i + 1 < n) s += std::string(width[i] - txt.size() + 2, ' ');
      }
      while (!s.empty() && s.back() == ' ') s.pop_back();
      out << s << '\n';
    };
    line([&](std::size_t i) { return t.columns[i]; }, t.columns.size());
    for (const auto& row : t.rows) line([&](std::size_t i) { return row[i].text; }, row.size());
  }
  return out.str();
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Faults: return "faults";
    case Mode::Worst: return "worst";
    case Mode::Avg: return "avg";
    case Mode::CompareDefs: return "compare-defs";
    case Mode::Simulate: return "simulate";
  }
  return "?";
}

std::string_view to_string(Format f) {
  switch (f) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Text: return "text";
  }
  return "?";
}

void validate(const RunConfig& config) {
  if (config.n_max < 1) throw UsageError("--nmax must be at least 1");
  if (config.trials < 1) throw UsageError("--trials must be at least 1");
  if (config.bin_width < 1) throw UsageError("--bin-width must be at least 1");
  if (config.input_cap < 1 || config.input_cap > 30) throw UsageError("--input-cap must be in [1, 30]");
  if (config.thresholds_le.empty() || config.thresholds_ge.empty()) throw UsageError("threshold lists must be nonempty");
  for (std::size_t i = 1; i < config.thresholds_le.size(); ++i)
    if (config.thresholds_le[i] <= config.thresholds_le[i - 1])
      throw UsageError("--thresholds-le must be strictly ascending");
  for (std::size_t i = 1; i < config.thresholds_ge.size(); ++i)
    if (config.thresholds_ge[i] >= config.thresholds_ge[i - 1])
      throw UsageError("--thresholds-ge must be strictly descending");
  if (!config.netlist.empty() && !config.fixture.empty())
    throw UsageError("--netlist and --fixture are mutually exclusive");
  if (!config.snapshots.empty() && config.mode != Mode::Avg) throw UsageError("--snapshots applies to avg only");
  if (!config.dump_snapshots.empty() && config.mode != Mode::Avg)
    throw UsageError("--dump-snapshots applies to avg only");
  if (config.definition == Definition::Two && !config.fixture.empty() && config.mode == Mode::Avg &&
      config.snapshots.empty())
    throw UsageError("--definition 2 needs a netlist");
}

std::vector<Cell> coverage_row(const std::string& circuit, std::span<const Fraction> fractions) {
  std::vector<Cell> row{Cell::str(circuit), Cell::number(fractions.empty() ? 0 : fractions.front().total)};
  bool full = false;
  for (const auto& f : fractions) {
    row.push_back(full ? Cell::blank() : Cell::number(format_percent(f)));
    full = full || f.count == f.total;
  }
  return row;
}

std::vector<Cell> probability_row(const std::string& circuit, std::size_t faults, std::optional<int> definition,
                                  std::span<const std::size_t> counts) {
  std::vector<Cell> row{Cell::str(circuit), Cell::number(faults),
                        definition ? Cell::number(static_cast<std::size_t>(*definition)) : Cell::blank()};
  bool full = false;
  for (std::size_t c : counts) {
    row.push_back(full ? Cell::blank() : Cell::number(c));
    full = full || c == faults;
  }
  return row;
}

Report build_report(const RunConfig& config, std::istream& stdin_stream) {
  validate(config);
  Report r;
  r.config = {
      {"mode", std::string(to_string(config.mode))},
      {"netlist", config.fixture.empty() && config.netlist.empty() ? "-" : config.netlist},
      {"fixture", config.fixture},
      {"snapshots", config.snapshots},
      {"collapse", config.collapse ? "true" : "false"},
      {"nmax", std::to_string(config.n_max)},
      {"trials", std::to_string(config.trials)},
      {"seed", std::to_string(config.seed)},
      {"definition", std::to_string(static_cast<int>(config.definition))},
      {"thresholds_le", join(config.thresholds_le)},
      {"thresholds_ge", join(config.thresholds_ge)},
      {"bin_width", std::to_string(config.bin_width)},
      {"hard_min", std::to_string(config.hard_min)},
      {"input_cap", std::to_string(config.input_cap)},
      {"format", std::string(to_string(config.format))},
  };

  const Input in = load_input(config, stdin_stream);
  switch (config.mode) {
    case Mode::Faults: faults_tables(r, config, in); break;
    case Mode::Simulate: simulate_tables(r, config, in); break;
    case Mode::Worst:
    case Mode::Avg:
    case Mode::CompareDefs: {
      const DetectionUniverse u = load_universe(config, in);
      add_universe_notes(r, u);
      const auto n_min = worst_case(u, config.workers);
      if (config.mode == Mode::Worst)
        worst_tables(r, config, u, n_min);
      else if (config.mode == Mode::Avg)
        avg_tables(r, config, u, n_min, stdin_stream);
      else
        compare_tables(r, config, u, n_min, stdin_stream);
      break;
    }
  }
  return r;
}

std::string emit_table(const Report& report, Format format) {
  switch (format) {
    case Format::Csv: return emit_csv(report);
    case Format::Json: return emit_json(report);
    case Format::Text: return emit_text(report);
  }
  return {};
}

int run(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    const std::string bytes = emit_table(build_report(config, in), config.format);
    if (config.out.empty())
      out << bytes;
    else
      write_file(config.out, bytes);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "ndet: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "ndet: netlist error: " << e.what() << '\n';
    return kExitData;
  } catch (const FixtureError& e) {
    err << "ndet: fixture error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    err << "ndet: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "ndet: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace ndet
