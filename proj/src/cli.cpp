#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "ndet/report.hpp"

namespace ndet {

int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"n-detection test set analysis: worst-case n_min and Monte Carlo detection probabilities of "
               "four-way bridging faults under stuck-at n-detection test sets",
               "ndet"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  const std::map<std::string, Mode> modes{{"faults", Mode::Faults},
                                          {"worst", Mode::Worst},
                                          {"avg", Mode::Avg},
                                          {"compare-defs", Mode::CompareDefs},
                                          {"simulate", Mode::Simulate}};
  const std::map<std::string, std::string> help{
      {"faults", "List target stuck-at faults and untargeted bridging faults"},
      {"worst", "Worst-case n_min per bridging fault with coverage, tail and histogram tables"},
      {"avg", "Detection probabilities of bridging faults over random n-detection test sets"},
      {"compare-defs", "Run avg under both detection-counting definitions with the same seed"},
      {"simulate", "Dump fault-free truth tables and detection sets"}};
  for (const auto& [name, mode] : modes) {
    app.add_subcommand(name, help.at(name))->fallthrough()->callback([&config, m = mode] { config.mode = m; });
  }

  int definition = 1;
  const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}, {"text", Format::Text}};

  app.add_option("--netlist", config.netlist, "Combinational .bench netlist ('-' for stdin, the default)")
      ->envname("NDET_NETLIST");
  app.add_option("--fixture", config.fixture, "Detection-set fixture used instead of simulating a netlist")
      ->envname("NDET_FIXTURE");
  app.add_option("--snapshots", config.snapshots, "avg: load test-set snapshots instead of building them")
      ->envname("NDET_SNAPSHOTS");
  app.add_option("--dump-snapshots", config.dump_snapshots, "avg: write the built test-set snapshots here");
  app.add_flag("--collapse,!--no-collapse", config.collapse, "Collapse equivalent stuck-at faults (default on)")
      ->envname("NDET_COLLAPSE");
  app.add_option("--nmax", config.n_max, "Largest n for which test sets are built")
      ->envname("NDET_NMAX")
      ->capture_default_str();
  app.add_option("--trials", config.trials, "Random test sets per n (K)")->envname("NDET_TRIALS")->capture_default_str();
  app.add_option("--seed", config.seed, "Random seed")->envname("NDET_SEED")->capture_default_str();
  app.add_option("--definition", definition, "Detection counting definition for avg (1 or 2)")
      ->check(CLI::IsMember({1, 2}))
      ->envname("NDET_DEFINITION")
      ->capture_default_str();
  app.add_option("--thresholds-le", config.thresholds_le, "Ascending n_min thresholds for the coverage table")
      ->delimiter(',')
      ->envname("NDET_THRESHOLDS_LE");
  app.add_option("--thresholds-ge", config.thresholds_ge, "Descending n_min thresholds for the tail table")
      ->delimiter(',')
      ->envname("NDET_THRESHOLDS_GE");
  app.add_option("--bin-width", config.bin_width, "n_min histogram bin width")
      ->envname("NDET_BIN_WIDTH")
      ->capture_default_str();
  app.add_option("--hard-min", config.hard_min, "Probability bins cover faults with n_min >= this (0: nmax+1)")
      ->envname("NDET_HARD_MIN")
      ->capture_default_str();
  app.add_option("--input-cap", config.input_cap, "Largest accepted number of primary inputs")
      ->envname("NDET_INPUT_CAP")
      ->capture_default_str();
  std::string format = "text";
  app.add_option("--format", format, "Output format: csv, json or text")
      ->check(CLI::IsMember({"csv", "json", "text"}))
      ->envname("NDET_FORMAT");
  app.add_option("--out", config.out, "Output path (default stdout)")->envname("NDET_OUT");
  app.add_option("--jobs", config.workers, "Worker threads (0: one per hardware thread)")->envname("NDET_JOBS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  config.format = formats.at(format);
  config.definition = definition == 2 ? Definition::Two : Definition::One;
  return run(config, in, out, err);
}

}  // namespace ndet
