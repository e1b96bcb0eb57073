#include <gtest/gtest.h>

#include <random>

#include "ndet/netlist.hpp"
#include "oracles.hpp"

using namespace ndet;

namespace {

ParseError parse_failure(std::string_view text, std::size_t cap = kDefaultInputCap) {
  try {
    parse_bench(text, cap);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ParseError(ParseErrorKind::Syntax, 0, "");
}

}  // namespace

TEST(ParseBench, MinimalAndGate) {
  const Circuit c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nz = AND(a,b)");
  EXPECT_EQ(c.num_inputs(), 2u);
  EXPECT_EQ(c.gates().size(), 1u);
  EXPECT_EQ(c.num_vectors(), 4u);
  EXPECT_EQ(c.name(c.outputs()[0]), "z");
  EXPECT_EQ(c.gates()[0].kind, GateKind::And);
  EXPECT_EQ(c.level(*c.find("z")), 1u);
  EXPECT_EQ(c.level(*c.find("a")), 0u);
}

TEST(ParseBench, CommentsBlankLinesAndAliases) {
  const Circuit c = parse_bench(
      "# header\n\nINPUT(a)  # first\nINPUT(b)\nOUTPUT(y)\n  n = inv(a)\ny = BUFF(n)\nw = nand(n, b)\nOUTPUT(w)\n");
  EXPECT_EQ(c.gates()[0].kind, GateKind::Not);
  EXPECT_EQ(c.gates()[1].kind, GateKind::Buf);
  EXPECT_EQ(c.gates()[2].kind, GateKind::Nand);
  EXPECT_EQ(c.outputs().size(), 2u);
}

TEST(ParseBench, OutputOrderFollowsDeclaration) {
  const Circuit c = parse_bench("INPUT(b)\nINPUT(a)\nOUTPUT(y)\nOUTPUT(x)\nx = OR(a,b)\ny = AND(a,b)\n");
  EXPECT_EQ(c.name(c.inputs()[0]), "b");
  EXPECT_EQ(c.name(c.outputs()[0]), "y");
  EXPECT_EQ(c.name(c.outputs()[1]), "x");
}

TEST(ParseBench, UndeclaredLine) {
  const auto e = parse_failure("INPUT(b)\nOUTPUT(z)\nz = AND(a,b)");
  EXPECT_EQ(e.kind(), ParseErrorKind::UndeclaredLine);
  EXPECT_EQ(e.line_number(), 3u);
}

TEST(ParseBench, SelfCycle) {
  const auto e = parse_failure("INPUT(a)\nOUTPUT(z)\nz = AND(a,z)");
  EXPECT_EQ(e.kind(), ParseErrorKind::Cycle);
  EXPECT_EQ(e.line_number(), 3u);
}

TEST(ParseBench, LongerCycle) {
  const auto e = parse_failure("INPUT(a)\nOUTPUT(z)\nx = AND(a,y)\ny = OR(a,x)\nz = NOT(y)\n");
  EXPECT_EQ(e.kind(), ParseErrorKind::Cycle);
  EXPECT_EQ(e.line_number(), 3u);
}

TEST(ParseBench, DuplicateDriver) {
  const auto e = parse_failure("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nz = AND(a,b)\nz = OR(a,b)");
  EXPECT_EQ(e.kind(), ParseErrorKind::DuplicateDriver);
  EXPECT_EQ(e.line_number(), 5u);
  EXPECT_EQ(parse_failure("INPUT(a)\nINPUT(a)\n").kind(), ParseErrorKind::DuplicateDriver);
  EXPECT_EQ(parse_failure("INPUT(a)\na = NOT(a)\n").kind(), ParseErrorKind::DuplicateDriver);
}

TEST(ParseBench, UnknownGateKind) {
  const auto e = parse_failure("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nz = MUX(a,b)");
  EXPECT_EQ(e.kind(), ParseErrorKind::UnknownGateKind);
  EXPECT_EQ(e.line_number(), 4u);
}

TEST(ParseBench, Arity) {
  auto e = parse_failure("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nz = NOT(a,b)");
  EXPECT_EQ(e.kind(), ParseErrorKind::Arity);
  EXPECT_EQ(e.line_number(), 4u);
  e = parse_failure("INPUT(a)\nOUTPUT(z)\n\nz = AND(a)");
  EXPECT_EQ(e.kind(), ParseErrorKind::Arity);
  EXPECT_EQ(e.line_number(), 4u);
}

TEST(ParseBench, InputCap) {
  const auto e = parse_failure("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(z)\nz = AND(a,b,c)", 2);
  EXPECT_EQ(e.kind(), ParseErrorKind::InputCapExceeded);
  EXPECT_EQ(e.line_number(), 3u);
  EXPECT_NO_THROW(parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(z)\nz = AND(a,b,c)", 3));
}

TEST(ParseBench, SyntaxAndNoInputs) {
  EXPECT_EQ(parse_failure("INPUT(a)\nOUTPUT(z)\nz = AND(a,\n").kind(), ParseErrorKind::Syntax);
  EXPECT_EQ(parse_failure("INPUT(a)\nWIRE(q)\n").line_number(), 2u);
  EXPECT_EQ(parse_failure("").kind(), ParseErrorKind::NoInputs);
}

TEST(ParseBench, ErrorsAreDistinctKinds) {
  const ParseErrorKind kinds[] = {
      parse_failure("INPUT(a)\nINPUT(a)").kind(),
      parse_failure("INPUT(a)\nOUTPUT(z)\nz = AND(a,q)").kind(),
      parse_failure("INPUT(a)\nOUTPUT(z)\nz = FOO(a,a)").kind(),
      parse_failure("INPUT(a)\nOUTPUT(z)\nz = BUF(a,a)").kind(),
      parse_failure("INPUT(a)\nOUTPUT(z)\nz = AND(a,z)").kind(),
      parse_failure("INPUT(a)\nINPUT(b)", 1).kind(),
  };
  for (std::size_t i = 0; i < std::size(kinds); ++i)
    for (std::size_t j = i + 1; j < std::size(kinds); ++j) EXPECT_NE(kinds[i], kinds[j]);
}

TEST(Circuit, BuildValidates) {
  EXPECT_THROW(Circuit::build({"a", "z"}, {0}, {1}, {Gate{1, GateKind::And, {0}}}), ParseError);
  EXPECT_THROW(Circuit::build({"a", "z"}, {0}, {1}, {}), ParseError);
  EXPECT_THROW(Circuit::build({"a", "z"}, {0}, {1}, {Gate{1, GateKind::Not, {5}}}), ParseError);
}

TEST(FanoutCone, SimpleCases) {
  const Circuit c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nz = AND(a,b)");
  EXPECT_EQ(fanout_cone(c, *c.find("a")), std::vector<LineId>{*c.find("z")});
  EXPECT_TRUE(fanout_cone(c, *c.find("z")).empty());
  EXPECT_THROW(fanout_cone(c, 99), std::out_of_range);
}

TEST(FanoutCone, MatchesDfsOracleOnRandomCircuits) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 100; ++round) {
    const Circuit c = oracle::random_circuit(rng, 2 + rng() % 3, 10);
    for (LineId l = 0; l < c.num_lines(); ++l) {
      const auto cone = fanout_cone(c, l);
      const auto oracle = oracle::naive_cone(c, l);
      EXPECT_EQ(cone, std::vector<LineId>(oracle.begin(), oracle.end()));
      for (LineId m : cone) {
        const auto back = fanout_cone_mask(c, m);
        EXPECT_FALSE(back[l]) << "cycle between " << l << " and " << m;
      }
    }
  }
}

TEST(Circuit, LevelsAreTopological) {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 100; ++round) {
    const Circuit c = oracle::random_circuit(rng, 1 + rng() % 4, 1 + rng() % 12);
    for (const Gate& g : c.gates())
      for (LineId in : g.inputs) EXPECT_LT(c.level(in), c.level(g.output));
    std::vector<bool> done(c.num_lines(), false);
    for (LineId in : c.inputs()) done[in] = true;
    for (std::uint32_t gi : c.eval_order()) {
      for (LineId in : c.gates()[gi].inputs) EXPECT_TRUE(done[in]);
      done[c.gates()[gi].output] = true;
    }
  }
}

TEST(Circuit, RoundTrip) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 100; ++round) {
    const Circuit c = oracle::random_circuit(rng, 1 + rng() % 4, 1 + rng() % 12);
    const std::string text = to_bench(c);
    const Circuit back = parse_bench(text);
    EXPECT_EQ(back, c) << text;
    EXPECT_EQ(to_bench(back), text);
  }
  const std::string interleaved = "INPUT(a)\nOUTPUT(z)\nn = NOT(a)\nINPUT(b)\nz = XOR(n, b)\n";
  const Circuit c = parse_bench(interleaved);
  EXPECT_EQ(parse_bench(to_bench(c)), c);
}
