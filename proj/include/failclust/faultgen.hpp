#pragma once

#include "failclust/coverage.hpp"
#include "failclust/eval.hpp"
#include "failclust/microlang.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace failclust {

enum class FaultKind { AF, PF };  // assignment fault, predicate fault

enum class MutationOp {
  // AF, on SET statements
  OperandConstantChange,
  ArithmeticOperatorSwap,
  VariableSubstitution,
  // PF, on IF statements
  RelationalNegation,
  RelationalSwap,
  ElseBranchDeletion,
};

FaultKind kind_of(MutationOp op);
std::string_view op_name(MutationOp op);

struct Mutation {
  int statement_id = 0;
  MutationOp op = MutationOp::ArithmeticOperatorSwap;
  int operand = 0;          // 0 = left operand, 1 = right operand
  std::int64_t delta = 0;   // OperandConstantChange
  std::string variable;     // VariableSubstitution: replacement variable
  ArithOp arith = ArithOp::Add;  // ArithmeticOperatorSwap: new operator
  RelOp rel = RelOp::Lt;         // RelationalSwap: new operator

  FaultKind kind() const { return kind_of(op); }
  friend bool operator==(const Mutation&, const Mutation&) = default;
};

/// Applies one mutation. Throws DomainError when the operator does not fit
/// the target statement (AF on SET, PF on IF) or changes nothing.
MicroProgram apply_mutation(const MicroProgram& p, const Mutation& m);

/// Every applicable single mutation of `p`, in statement order.
std::vector<Mutation> enumerate_mutations(const MicroProgram& p);

std::string describe(const Mutation& m);

enum class FaultTypeClass { TypeA, TypeP, TypeH };
std::string_view type_name(FaultTypeClass t);
FaultTypeClass parse_type(std::string_view name);
FaultTypeClass classify(const std::vector<Mutation>& mutations);

struct FaultyVersion {
  MicroProgram base;
  std::vector<Mutation> mutations;
  FaultTypeClass fault_type = FaultTypeClass::TypeA;

  int nof() const noexcept { return static_cast<int>(mutations.size()); }
  MicroProgram program() const;
  /// The 1-bug version holding only mutation `i`.
  MicroProgram single(int i) const;
};

FaultyVersion make_version(MicroProgram base, std::vector<Mutation> mutations);

using TestInput = std::vector<std::int64_t>;

/// Coverage and ground truth of a faulty version over a suite.
struct LabeledVersion {
  CoverageRecord coverage;     // passed tests + labeled failed tests, suite order
  OracleLabels oracle;         // fault id = index into the version's mutations
  int dropped_multi_cause = 0; // failed under several single mutations
  int dropped_interaction = 0; // failed under no single mutation
  bool usable = false;         // at least one labeled failure and one passed test
};

/// Verdicts compare the version against the base program; each failed test is
/// attributed to the unique 1-bug version that also fails on it.
LabeledVersion label_oracle(const FaultyVersion& v, const std::vector<TestInput>& suite);

/// Draws `r` mutations on distinct statements, rejecting versions where a
/// fault is never the sole cause of a failure. `want` additionally constrains
/// the fault-type class.
FaultyVersion synthesize_version(const MicroProgram& base, const std::vector<Mutation>& pool, int r,
                                 const std::vector<TestInput>& suite, std::uint64_t seed,
                                 std::optional<FaultTypeClass> want = {}, int max_attempts = 500);

struct ProgramShape {
  int min_statements = 10;
  int max_statements = 60;
  int max_depth = 3;
};

/// Random base program over inputs a b c with output z.
MicroProgram generate_program(std::uint64_t seed, const ProgramShape& shape = {});

/// `count` random inputs of `arity` integers in [lo, hi] on which `base` does not crash.
std::vector<TestInput> generate_suite(const MicroProgram& base, int count, std::uint64_t seed,
                                      std::int64_t lo = -10, std::int64_t hi = 20);

struct SyntheticVersion {
  CoverageRecord coverage;
  OracleLabels oracle;
};

/// Planted-fault spectrum sampler. Statement f is the faulty statement of
/// fault f. Every failure of fault f executes the same path: statement f,
/// none of the other faulty statements, and each remaining statement with
/// probability 1/2. All passed tests execute one passing path that avoids the
/// faulty statements and holds each remaining statement with probability 1/2.
/// Each coverage bit is then flipped with probability `noise`. Test order is
/// shuffled.
SyntheticVersion sample_synthetic_spectrum(int n_faults, int n_failed_per_fault, int n_passed,
                                           int n_statements, double noise, std::uint64_t seed);

}  // namespace failclust
