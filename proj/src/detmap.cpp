#include "ndet/detmap.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>

#include "ndet/faultmodels.hpp"
#include "ndet/parallel.hpp"

namespace ndet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
std::optional<T> to_number(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> to_bit(std::string_view s) {
  if (s == "0") return false;
  if (s == "1") return true;
  return std::nullopt;
}

std::optional<LineId> to_line(std::string_view s) {
  const auto v = to_number<std::uint32_t>(s);
  if (!v || *v == 0) return std::nullopt;
  return *v - 1;
}

std::optional<StuckAtFault> parse_stuck_at_label(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  const auto line = to_line(s.substr(0, slash));
  const auto value = to_bit(s.substr(slash + 1));
  if (!line || !value) return std::nullopt;
  return StuckAtFault{*line, *value};
}

std::optional<BridgingFault> parse_bridging_label(std::string_view s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return std::nullopt;
  s = s.substr(1, s.size() - 2);
  std::vector<std::string_view> parts;
  for (std::size_t start = 0;;) {
    const auto comma = s.find(',', start);
    parts.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 4) return std::nullopt;
  const auto l1 = to_line(parts[0]);
  const auto a1 = to_bit(parts[1]);
  const auto l2 = to_line(parts[2]);
  const auto a2 = to_bit(parts[3]);
  if (!l1 || !a1 || !l2 || !a2) return std::nullopt;
  return BridgingFault{*l1, *a1, *l2, *a2};
}

}  // namespace

DetectionSet detection_set(const Circuit& circuit, const FaultInjection& fault) {
  return DetectionSet(ExhaustiveSimulator(circuit).detection(fault));
}

DetectionUniverse build_universe(std::shared_ptr<const Circuit> circuit, bool collapse, std::string name,
                                 std::size_t workers) {
  DetectionUniverse u;
  u.name = std::move(name);
  u.num_inputs = circuit->num_inputs();
  u.circuit = circuit;

  const ExhaustiveSimulator sim(*circuit);
  const auto targets = enumerate_stuck_at(*circuit, collapse);
  const auto untargeted = enumerate_bridging(*circuit);

  std::vector<DetectionSet> target_sets(targets.size());
  std::vector<DetectionSet> untargeted_sets(untargeted.size());
  parallel_for(targets.size() + untargeted.size(), workers, [&](std::size_t i) {
    if (i < targets.size())
      target_sets[i] = DetectionSet(sim.detection(targets[i]));
    else
      untargeted_sets[i - targets.size()] = DetectionSet(sim.detection(untargeted[i - targets.size()]));
  });

  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (target_sets[i].empty())
      u.dropped_targets.push_back(label(targets[i]));
    else
      u.targets.push_back({targets[i], label(targets[i]), std::move(target_sets[i])});
  }
  for (std::size_t i = 0; i < untargeted.size(); ++i) {
    if (untargeted_sets[i].empty())
      u.dropped_untargeted.push_back(label(untargeted[i]));
    else
      u.untargeted.push_back({untargeted[i], label(untargeted[i]), std::move(untargeted_sets[i])});
  }
  return u;
}

DetectionUniverse load_fixture(std::string_view text, std::string name) {
  struct Entry {
    std::string label;
    std::vector<VectorId> vectors;
    std::size_t src;
  };
  std::optional<std::size_t> declared_inputs;
  std::vector<Entry> entries;

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

    const auto words = split_ws(stmt);
    if (words.front() == "inputs") {
      if (words.size() != 2) throw FixtureError(src, "expected 'inputs <p>'");
      const auto p = to_number<std::size_t>(words[1]);
      if (!p || *p == 0 || *p > 30) throw FixtureError(src, "invalid input count");
      if (declared_inputs) throw FixtureError(src, "input count declared twice");
      declared_inputs = *p;
      continue;
    }
    if (words.front() != "fault") throw FixtureError(src, "unknown directive '" + std::string(words.front()) + "'");

    const auto colon = stmt.find(':');
    if (colon == std::string_view::npos) throw FixtureError(src, "missing ':' after fault label");
    const std::string_view lbl = trim(stmt.substr(5, colon - 5));
    if (lbl.empty() || split_ws(lbl).size() != 1) throw FixtureError(src, "malformed fault label");
    Entry e{std::string(lbl), {}, src};
    for (auto tok : split_ws(stmt.substr(colon + 1))) {
      const auto v = to_number<VectorId>(tok);
      if (!v) throw FixtureError(src, "invalid vector id '" + std::string(tok) + "'");
      e.vectors.push_back(*v);
    }
    entries.push_back(std::move(e));
  }

  std::size_t p = 1;
  if (declared_inputs) {
    p = *declared_inputs;
  } else {
    VectorId max_v = 0;
    for (const auto& e : entries)
      for (VectorId v : e.vectors) max_v = std::max(max_v, v);
    while ((std::size_t{1} << p) <= max_v) ++p;
  }

  DetectionUniverse u;
  u.name = std::move(name);
  u.num_inputs = p;
  for (auto& e : entries) {
    BitVec bits(u.num_vectors());
    for (VectorId v : e.vectors) {
      if (v >= u.num_vectors()) throw FixtureError(e.src, "vector " + std::to_string(v) + " outside the input space");
      if (bits.test(v)) throw FixtureError(e.src, "vector " + std::to_string(v) + " listed twice");
      bits.set(v);
    }
    DetectionSet set(std::move(bits));
    if (const auto sa = parse_stuck_at_label(e.label)) {
      if (set.empty())
        u.dropped_targets.push_back(e.label);
      else
        u.targets.push_back({*sa, e.label, std::move(set)});
    } else if (e.label.size() > 2 && e.label.front() == '(' && e.label.back() == ')') {
      if (set.empty())
        u.dropped_untargeted.push_back(e.label);
      else
        u.untargeted.push_back({parse_bridging_label(e.label), e.label, std::move(set)});
    } else {
      throw FixtureError(e.src, "label '" + e.label + "' is neither l/a nor parenthesized");
    }
  }
  return u;
}

std::string to_fixture(const DetectionUniverse& universe) {
  std::ostringstream out;
  out << "inputs " << universe.num_inputs << "\n";
  auto write = [&](const std::string& lbl, const DetectionSet& set) {
    out << "fault " << lbl << " :";
    for (VectorId v : set.vectors()) out << ' ' << v;
    out << '\n';
  };
  for (const auto& t : universe.targets) write(t.label, t.tests);
  for (const auto& g : universe.untargeted) write(g.label, g.tests);
  return out.str();
}

}  // namespace ndet
