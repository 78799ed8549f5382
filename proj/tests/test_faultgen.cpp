#include "failclust/cluster.hpp"
#include "failclust/error.hpp"
#include "failclust/faultgen.hpp"
#include "failclust/harness.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <set>

using namespace failclust;

namespace {

// One input per path of the motivating coverage table, in table order.
const std::vector<TestInput> kMotivatingSuite = {
    {1, 2, 4}, {3, 2, 1}, {3, 2, 5}, {4, 1, 9}, {2, 6, 5},
    {5, 5, 1}, {2, 1, 7}, {1, 4, 3}, {9, 4, 2}, {5, 5, 8},
};

MicroProgram fixed() { return load_program(test::data_path("motivating_fixed.prog")); }

Mutation substitute(int statement, int operand, std::string var) {
  Mutation m;
  m.statement_id = statement;
  m.op = MutationOp::VariableSubstitution;
  m.operand = operand;
  m.variable = std::move(var);
  return m;
}

Mutation at(int statement, MutationOp op) {
  Mutation m;
  m.statement_id = statement;
  m.op = op;
  return m;
}

std::vector<Mutation> motivating_faults() { return {substitute(6, 0, "b"), substitute(9, 1, "c")}; }

}  // namespace

TEST(Mutation, ReproducesMotivatingFaults) {
  const auto v = make_version(fixed(), motivating_faults());
  EXPECT_EQ(v.program(), load_program(test::data_path("motivating_faulty.prog")));
  EXPECT_EQ(v.fault_type, FaultTypeClass::TypeA);
  EXPECT_EQ(v.nof(), 2);
}

TEST(Mutation, KindsMustMatchStatements) {
  const auto p = fixed();
  EXPECT_THROW(apply_mutation(p, at(2, MutationOp::ArithmeticOperatorSwap)), DomainError);
  EXPECT_THROW(apply_mutation(p, at(4, MutationOp::RelationalNegation)), DomainError);
  EXPECT_THROW(apply_mutation(p, at(5, MutationOp::RelationalNegation)), DomainError);
  EXPECT_THROW(apply_mutation(p, substitute(6, 0, "a")), DomainError);  // no change
  auto swap = at(4, MutationOp::ArithmeticOperatorSwap);
  swap.arith = ArithOp::Mul;
  EXPECT_THROW(apply_mutation(p, swap), DomainError);
  swap.arith = ArithOp::Add;
  EXPECT_EQ(interpret(apply_mutation(p, swap), TestInput{1, 2, 4}).output, 3);
}

TEST(Mutation, NegationAndElseDeletion) {
  const auto p = fixed();
  const auto neg = apply_mutation(p, at(2, MutationOp::RelationalNegation));
  EXPECT_EQ(neg.statement(2).rel, RelOp::Ge);
  const auto del = apply_mutation(p, at(2, MutationOp::ElseBranchDeletion));
  EXPECT_TRUE(del.statement(2).else_deleted);
  EXPECT_EQ(interpret(del, TestInput{3, 2, 5}).trace, (std::vector<int>{1, 2}));
  EXPECT_THROW(apply_mutation(del, at(2, MutationOp::ElseBranchDeletion)), DomainError);
}

TEST(Mutation, EnumerationIsApplicableAndComplete) {
  const auto p = fixed();
  const auto all = enumerate_mutations(p);
  for (const auto& m : motivating_faults()) EXPECT_NE(std::find(all.begin(), all.end(), m), all.end());
  std::set<std::string> seen;
  int last = 0;
  for (const auto& m : all) {
    EXPECT_NE(apply_mutation(p, m), p) << describe(m);
    EXPECT_TRUE(seen.insert(format_program(apply_mutation(p, m))).second) << describe(m);
    EXPECT_GE(m.statement_id, last);
    last = m.statement_id;
  }
  // Every IF of the program has an else branch to delete.
  EXPECT_EQ(std::count_if(all.begin(), all.end(),
                          [](const Mutation& m) { return m.op == MutationOp::ElseBranchDeletion; }),
            3);
}

TEST(Mutation, Classification) {
  EXPECT_EQ(classify({at(2, MutationOp::RelationalSwap)}), FaultTypeClass::TypeP);
  EXPECT_EQ(classify({at(2, MutationOp::RelationalSwap), substitute(6, 0, "b")}), FaultTypeClass::TypeH);
  EXPECT_EQ(classify(motivating_faults()), FaultTypeClass::TypeA);
  EXPECT_THROW(classify({}), DomainError);
  EXPECT_EQ(parse_type("TypeH"), FaultTypeClass::TypeH);
  EXPECT_THROW(parse_type("TypeX"), DomainError);
  EXPECT_THROW(make_version(fixed(), {substitute(6, 0, "b"), substitute(6, 1, "b")}), DomainError);
}

TEST(Oracle, LabelsMotivatingVersion) {
  const auto v = make_version(fixed(), motivating_faults());
  const auto lv = label_oracle(v, kMotivatingSuite);
  EXPECT_TRUE(lv.usable);
  EXPECT_EQ(lv.dropped_multi_cause, 0);
  EXPECT_EQ(lv.dropped_interaction, 0);
  EXPECT_EQ(lv.coverage, load_coverage(test::data_path("motivating.cov")));
  const auto want = load_oracle(test::data_path("motivating.oracle"));
  EXPECT_EQ(lv.oracle.test_ids(), want.test_ids());
  EXPECT_EQ(lv.oracle.faults(), want.faults());
}

TEST(Oracle, SinglePassingTestIsUnusable) {
  const auto v = make_version(fixed(), motivating_faults());
  const auto lv = label_oracle(v, {{1, 2, 4}});
  EXPECT_FALSE(lv.usable);
  EXPECT_EQ(lv.oracle.size(), 0);
  EXPECT_THROW(label_oracle(v, {}), DomainError);
}

TEST(Synthesize, MotivatingPairFromPool) {
  const auto v = synthesize_version(fixed(), motivating_faults(), 2, kMotivatingSuite, 5);
  EXPECT_EQ(v.mutations, motivating_faults());
  EXPECT_EQ(v.program(), load_program(test::data_path("motivating_faulty.prog")));
}

TEST(Synthesize, OneBugIsTheSingleMutation) {
  const auto pool = motivating_faults();
  const auto v = synthesize_version(fixed(), pool, 1, kMotivatingSuite, 9);
  ASSERT_EQ(v.nof(), 1);
  EXPECT_EQ(v.program(), apply_mutation(fixed(), v.mutations.front()));
}

TEST(Synthesize, NeedsDistinctStatements) {
  EXPECT_THROW(synthesize_version(fixed(), {substitute(6, 0, "b"), substitute(6, 1, "b")}, 2, kMotivatingSuite, 1),
               GenerationError);
  EXPECT_THROW(synthesize_version(fixed(), motivating_faults(), 2, kMotivatingSuite, 1, FaultTypeClass::TypeP),
               GenerationError);
}

TEST(SynthesizeProperty, EveryFaultIsTriggered) {
  int built = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto base = generate_program(seed);
    const auto suite = generate_suite(base, 150, seed);
    const auto pool = enumerate_mutations(base);
    for (int r = 2; r <= 4; ++r)
      for (auto type : {FaultTypeClass::TypeA, FaultTypeClass::TypeP, FaultTypeClass::TypeH}) {
        std::optional<FaultyVersion> drawn;
        try {
          drawn = synthesize_version(base, pool, r, suite, seed * 31 + r, type);
        } catch (const GenerationError&) {
          continue;
        }
        const auto& v = *drawn;
        ++built;
        ASSERT_EQ(v.fault_type, type);
        ASSERT_EQ(classify(v.mutations), type);
        const auto lv = label_oracle(v, suite);
        ASSERT_TRUE(lv.usable);
        std::set<int> faults(lv.oracle.faults().begin(), lv.oracle.faults().end());
        ASSERT_EQ(static_cast<int>(faults.size()), r);
      }
  }
  EXPECT_GT(built, 20);
}

TEST(Generate, ProgramsAreWellFormedAndSeeded) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto p = generate_program(seed);
    ASSERT_EQ(p, generate_program(seed));
    ASSERT_GE(p.num_statements(), 10);
    ASSERT_LE(p.num_statements(), 60);
    ASSERT_EQ(parse_program(format_program(p)), p);
    const auto suite = generate_suite(p, 20, seed);
    ASSERT_EQ(suite.size(), 20u);
    for (const auto& in : suite) ASSERT_FALSE(interpret(p, in).crashed);
  }
}

TEST(Synthetic, DeterministicAndValidated) {
  const auto a = sample_synthetic_spectrum(3, 4, 20, 15, 0.1, 8);
  const auto b = sample_synthetic_spectrum(3, 4, 20, 15, 0.1, 8);
  EXPECT_EQ(a.coverage, b.coverage);
  EXPECT_EQ(a.oracle.faults(), b.oracle.faults());
  EXPECT_EQ(a.oracle.r(), 3);
  EXPECT_EQ(a.coverage.failed_ids().size(), 12u);
  EXPECT_NE(a.coverage, sample_synthetic_spectrum(3, 4, 20, 15, 0.1, 9).coverage);
  EXPECT_THROW(sample_synthetic_spectrum(0, 4, 20, 15, 0.0, 1), DomainError);
  EXPECT_THROW(sample_synthetic_spectrum(5, 4, 20, 4, 0.0, 1), DomainError);
  EXPECT_THROW(sample_synthetic_spectrum(2, 4, 20, 15, 1.0, 1), DomainError);
}

TEST(Synthetic, ZeroNoiseTwoBlobsRecovered) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = sample_synthetic_spectrum(2, 3, 10, 12, 0.0, seed);
    const auto res = run_pipeline(v.coverage, v.oracle, RefId::GP19, {1.0, seed}, {});
    ASSERT_EQ(res.estimate.k, 2) << seed;
    ASSERT_EQ(res.report.value(Metric::JC), 1.0);
  }
}

TEST(Synthetic, SingleFailuresAreSingletons) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = sample_synthetic_spectrum(5, 1, 10, 60, 0.0, seed);
    const auto res = run_pipeline(v.coverage, v.oracle, RefId::GP19, {1.0, seed}, {});
    ASSERT_EQ(res.estimate.k, 5) << seed;
    ASSERT_EQ(res.report.category, Category::Equal);
  }
}
