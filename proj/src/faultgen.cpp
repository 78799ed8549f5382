#include "failclust/faultgen.hpp"

#include "failclust/error.hpp"
#include "failclust/rng.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace failclust {

FaultKind kind_of(MutationOp op) {
  switch (op) {
    case MutationOp::OperandConstantChange:
    case MutationOp::ArithmeticOperatorSwap:
    case MutationOp::VariableSubstitution: return FaultKind::AF;
    case MutationOp::RelationalNegation:
    case MutationOp::RelationalSwap:
    case MutationOp::ElseBranchDeletion: return FaultKind::PF;
  }
  return FaultKind::AF;
}

std::string_view op_name(MutationOp op) {
  switch (op) {
    case MutationOp::OperandConstantChange: return "operand-constant-change";
    case MutationOp::ArithmeticOperatorSwap: return "arithmetic-operator-swap";
    case MutationOp::VariableSubstitution: return "variable-substitution";
    case MutationOp::RelationalNegation: return "relational-operator-negation";
    case MutationOp::RelationalSwap: return "relational-operator-swap";
    case MutationOp::ElseBranchDeletion: return "else-branch-deletion";
  }
  return "?";
}

namespace {

Operand& operand_of(Line& l, int which) {
  if (which == 0) return l.lhs;
  if (which == 1) return l.rhs;
  throw DomainError("operand index must be 0 or 1");
}

bool has_operand(const Line& l, int which) {
  return which == 0 || (which == 1 && (l.kind == LineKind::If || l.arith.has_value()));
}

Mutation mutation_at(int id, MutationOp op) {
  Mutation m;
  m.statement_id = id;
  m.op = op;
  return m;
}

std::set<std::string> variables(const MicroProgram& p) {
  std::set<std::string> vars;
  for (const auto& l : p.lines()) {
    for (const auto& v : l.inputs) vars.insert(v);
    if (l.kind == LineKind::Assign) vars.insert(l.target);
  }
  return vars;
}

}  // namespace

MicroProgram apply_mutation(const MicroProgram& p, const Mutation& m) {
  const Line& original = p.statement(m.statement_id);
  const LineKind want = m.kind() == FaultKind::AF ? LineKind::Assign : LineKind::If;
  if (original.kind != want)
    throw DomainError(std::string(op_name(m.op)) + " does not apply to statement " +
                      std::to_string(m.statement_id));
  Line l = original;
  switch (m.op) {
    case MutationOp::OperandConstantChange: {
      if (!has_operand(l, m.operand)) throw DomainError("statement has no such operand");
      Operand& o = operand_of(l, m.operand);
      if (!o.is_const) throw DomainError("operand is not a constant");
      o.value += m.delta;
      break;
    }
    case MutationOp::ArithmeticOperatorSwap:
      if (!l.arith) throw DomainError("assignment has no arithmetic operator");
      l.arith = m.arith;
      break;
    case MutationOp::VariableSubstitution: {
      if (!has_operand(l, m.operand)) throw DomainError("statement has no such operand");
      Operand& o = operand_of(l, m.operand);
      if (o.is_const) throw DomainError("operand is not a variable");
      o.var = m.variable;
      break;
    }
    case MutationOp::RelationalNegation: l.rel = negate(l.rel); break;
    case MutationOp::RelationalSwap: l.rel = m.rel; break;
    case MutationOp::ElseBranchDeletion:
      if (l.else_line < 0 || l.else_deleted) throw DomainError("conditional has no live else branch");
      l.else_deleted = true;
      break;
  }
  if (l == original) throw DomainError("mutation leaves statement " + std::to_string(m.statement_id) + " unchanged");
  return p.with_statement(m.statement_id, std::move(l));
}

std::vector<Mutation> enumerate_mutations(const MicroProgram& p) {
  const auto vars = variables(p);
  std::vector<Mutation> out;
  for (const auto& l : p.lines()) {
    if (l.kind == LineKind::Assign) {
      for (int which = 0; which < 2; ++which) {
        if (!has_operand(l, which)) continue;
        const Operand& o = which == 0 ? l.lhs : l.rhs;
        if (o.is_const) {
          for (std::int64_t d : {-1, 1}) {
            Mutation m = mutation_at(l.id, MutationOp::OperandConstantChange);
            m.operand = which;
            m.delta = d;
            out.push_back(m);
          }
        } else {
          for (const auto& v : vars) {
            if (v == o.var) continue;
            Mutation m = mutation_at(l.id, MutationOp::VariableSubstitution);
            m.operand = which;
            m.variable = v;
            out.push_back(m);
          }
        }
      }
      if (l.arith) {
        for (ArithOp op : {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div}) {
          if (op == *l.arith) continue;
          Mutation m = mutation_at(l.id, MutationOp::ArithmeticOperatorSwap);
          m.arith = op;
          out.push_back(m);
        }
      }
    } else if (l.kind == LineKind::If) {
      out.push_back(mutation_at(l.id, MutationOp::RelationalNegation));
      for (RelOp op : {RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge, RelOp::Eq, RelOp::Ne}) {
        if (op == l.rel || op == negate(l.rel)) continue;
        Mutation m = mutation_at(l.id, MutationOp::RelationalSwap);
        m.rel = op;
        out.push_back(m);
      }
      if (l.else_line >= 0 && !l.else_deleted) out.push_back(mutation_at(l.id, MutationOp::ElseBranchDeletion));
    }
  }
  return out;
}

std::string describe(const Mutation& m) {
  std::string s = "s" + std::to_string(m.statement_id) + " " + std::string(op_name(m.op));
  switch (m.op) {
    case MutationOp::OperandConstantChange:
      s += " operand " + std::to_string(m.operand) + (m.delta >= 0 ? " +" : " ") + std::to_string(m.delta);
      break;
    case MutationOp::ArithmeticOperatorSwap: s += " to " + std::string(symbol(m.arith)); break;
    case MutationOp::VariableSubstitution: s += " operand " + std::to_string(m.operand) + " to " + m.variable; break;
    case MutationOp::RelationalSwap: s += " to " + std::string(symbol(m.rel)); break;
    default: break;
  }
  return s;
}

std::string_view type_name(FaultTypeClass t) {
  switch (t) {
    case FaultTypeClass::TypeA: return "TypeA";
    case FaultTypeClass::TypeP: return "TypeP";
    case FaultTypeClass::TypeH: return "TypeH";
  }
  return "?";
}

FaultTypeClass parse_type(std::string_view name) {
  if (name == "TypeA") return FaultTypeClass::TypeA;
  if (name == "TypeP") return FaultTypeClass::TypeP;
  if (name == "TypeH") return FaultTypeClass::TypeH;
  throw DomainError("unknown fault type '" + std::string(name) + "'");
}

FaultTypeClass classify(const std::vector<Mutation>& mutations) {
  if (mutations.empty()) throw DomainError("a faulty version needs at least one mutation");
  const bool all_af = std::all_of(mutations.begin(), mutations.end(),
                                  [](const Mutation& m) { return m.kind() == FaultKind::AF; });
  const bool all_pf = std::all_of(mutations.begin(), mutations.end(),
                                  [](const Mutation& m) { return m.kind() == FaultKind::PF; });
  if (all_af) return FaultTypeClass::TypeA;
  if (all_pf) return FaultTypeClass::TypeP;
  return FaultTypeClass::TypeH;
}

MicroProgram FaultyVersion::program() const {
  MicroProgram p = base;
  for (const auto& m : mutations) p = apply_mutation(p, m);
  return p;
}

MicroProgram FaultyVersion::single(int i) const {
  return apply_mutation(base, mutations.at(static_cast<std::size_t>(i)));
}

FaultyVersion make_version(MicroProgram base, std::vector<Mutation> mutations) {
  std::set<int> targets;
  for (const auto& m : mutations)
    if (!targets.insert(m.statement_id).second)
      throw DomainError("two mutations target statement " + std::to_string(m.statement_id));
  const auto type = classify(mutations);
  FaultyVersion v{std::move(base), std::move(mutations), type};
  (void)v.program();  // validates every mutation
  return v;
}

LabeledVersion label_oracle(const FaultyVersion& v, const std::vector<TestInput>& suite) {
  if (suite.empty()) throw DomainError("empty test suite");
  const MicroProgram faulty = v.program();
  std::vector<MicroProgram> singles;
  for (int i = 0; i < v.nof(); ++i) singles.push_back(v.single(i));

  const auto n_stmt = faulty.num_statements();
  std::vector<std::vector<int>> traces;
  std::vector<Verdict> verdicts;
  std::vector<int> labels;  // -1 passed, -2 multi-cause, -3 interaction
  int multi = 0, interaction = 0;
  for (const auto& input : suite) {
    const RunResult expected = interpret(v.base, input);
    const RunResult got = interpret(faulty, input);
    traces.push_back(got.trace);
    if (got.same_outcome(expected)) {
      verdicts.push_back(Verdict::Pass);
      labels.push_back(-1);
      continue;
    }
    verdicts.push_back(Verdict::Fail);
    int cause = -1, causes = 0;
    for (int i = 0; i < v.nof(); ++i) {
      if (!interpret(singles[i], input).same_outcome(expected)) {
        cause = i;
        ++causes;
      }
    }
    if (causes == 1) {
      labels.push_back(cause);
    } else if (causes == 0) {
      labels.push_back(-3);
      ++interaction;
    } else {
      labels.push_back(-2);
      ++multi;
    }
  }

  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < suite.size(); ++t)
    if (labels[t] >= -1) keep.push_back(t);
  const bool kept_any = !keep.empty();
  if (!kept_any) {
    keep.resize(suite.size());
    for (std::size_t t = 0; t < suite.size(); ++t) keep[t] = t;
  }

  CoverageMatrix m = CoverageMatrix::Zero(n_stmt, static_cast<Eigen::Index>(keep.size()));
  std::vector<Verdict> kept_verdicts;
  TestIds failed_ids;
  std::vector<int> faults;
  bool any_pass = false;
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const std::size_t t = keep[c];
    for (int id : traces[t]) m(id - 1, static_cast<Eigen::Index>(c)) = true;
    kept_verdicts.push_back(verdicts[t]);
    if (verdicts[t] == Verdict::Pass) any_pass = true;
    if (labels[t] >= 0) {
      failed_ids.push_back(static_cast<int>(c));
      faults.push_back(labels[t]);
    }
  }
  LabeledVersion out{CoverageRecord(std::move(m), std::move(kept_verdicts)),
                     OracleLabels(failed_ids, faults, v.nof()), multi, interaction, false};
  out.usable = kept_any && any_pass && !failed_ids.empty();
  return out;
}

FaultyVersion synthesize_version(const MicroProgram& base, const std::vector<Mutation>& pool, int r,
                                 const std::vector<TestInput>& suite, std::uint64_t seed,
                                 std::optional<FaultTypeClass> want, int max_attempts) {
  if (r < 1) throw DomainError("r must be at least 1");
  std::vector<Mutation> candidates;
  for (const auto& m : pool) {
    if (want == FaultTypeClass::TypeA && m.kind() != FaultKind::AF) continue;
    if (want == FaultTypeClass::TypeP && m.kind() != FaultKind::PF) continue;
    candidates.push_back(m);
  }
  std::map<int, std::vector<Mutation>> by_statement;
  for (const auto& m : candidates) by_statement[m.statement_id].push_back(m);
  if (static_cast<int>(by_statement.size()) < r)
    throw GenerationError("pool has mutations on " + std::to_string(by_statement.size()) +
                          " distinct statements, fewer than r = " + std::to_string(r));

  std::vector<int> statements;
  for (const auto& [id, _] : by_statement) statements.push_back(id);
  std::mt19937_64 g(rng::mix(seed, 0x5eed));
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    rng::shuffle(statements, g);
    std::vector<int> chosen(statements.begin(), statements.begin() + r);
    std::sort(chosen.begin(), chosen.end());
    std::vector<Mutation> mutations;
    for (int id : chosen) {
      const auto& options = by_statement.at(id);
      mutations.push_back(options[rng::below(g, options.size())]);
    }
    if (want == FaultTypeClass::TypeH && classify(mutations) != FaultTypeClass::TypeH) continue;

    FaultyVersion v = make_version(base, std::move(mutations));
    const LabeledVersion labeled = label_oracle(v, suite);
    if (!labeled.usable) continue;
    std::vector<bool> triggered(static_cast<std::size_t>(r), false);
    for (int f : labeled.oracle.faults()) triggered[static_cast<std::size_t>(f)] = true;
    // Compacted ids equal mutation indices only when every fault is triggered.
    if (labeled.oracle.r() == r && std::all_of(triggered.begin(), triggered.end(), [](bool b) { return b; }))
      return v;
  }
  throw GenerationError("no valid " + std::to_string(r) + "-fault version after " +
                        std::to_string(max_attempts) + " attempts");
}

namespace {

struct ProgramBuilder {
  std::mt19937_64& g;
  const ProgramShape& shape;
  int remaining;
  std::vector<Line> lines;

  static constexpr std::array<const char*, 6> kReadable = {"a", "b", "c", "z", "t", "u"};
  static constexpr std::array<const char*, 3> kWritable = {"z", "t", "u"};

  Operand operand(double const_chance) {
    if (rng::chance(g, const_chance)) return Operand::constant(rng::between(g, -3, 5));
    return Operand::variable(kReadable[rng::below(g, kReadable.size())]);
  }

  void assignment() {
    Line l;
    l.kind = LineKind::Assign;
    l.target = rng::chance(g, 0.5) ? "z" : kWritable[rng::below(g, kWritable.size())];
    l.lhs = operand(0.1);
    if (rng::chance(g, 0.85)) {
      static constexpr std::array<ArithOp, 3> ops = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul};
      l.arith = ops[rng::below(g, ops.size())];
      l.rhs = operand(0.35);
    }
    lines.push_back(std::move(l));
    --remaining;
  }

  void block(int depth) {
    const long count = rng::between(g, 1, 4);
    for (long i = 0; i < count && remaining > 0; ++i) {
      if (depth < shape.max_depth && remaining >= 4 && rng::chance(g, 0.4)) {
        Line cond;
        cond.kind = LineKind::If;
        cond.lhs = Operand::variable(kReadable[rng::below(g, kReadable.size())]);
        cond.rel = static_cast<RelOp>(rng::below(g, 6));
        cond.rhs = operand(0.3);
        lines.push_back(std::move(cond));
        --remaining;
        block(depth + 1);
        if (remaining >= 2 && rng::chance(g, 0.6)) {
          Line e;
          e.kind = LineKind::Else;
          lines.push_back(std::move(e));
          --remaining;
          block(depth + 1);
        }
        Line end;
        end.kind = LineKind::End;
        lines.push_back(std::move(end));
      } else {
        assignment();
      }
    }
  }
};

}  // namespace

MicroProgram generate_program(std::uint64_t seed, const ProgramShape& shape) {
  if (shape.min_statements < 4 || shape.max_statements < shape.min_statements || shape.max_depth < 0)
    throw DomainError("invalid program shape");
  std::mt19937_64 g(rng::mix(seed, 0x9209));
  const int n = static_cast<int>(rng::between(g, shape.min_statements, shape.max_statements));
  ProgramBuilder b{g, shape, n - 3, {}};

  Line in;
  in.kind = LineKind::Input;
  in.inputs = {"a", "b", "c"};
  b.lines.push_back(in);
  Line init;
  init.kind = LineKind::Assign;
  init.target = "z";
  init.lhs = Operand::variable("a");
  init.arith = ArithOp::Add;
  init.rhs = Operand::variable("b");
  b.lines.push_back(init);
  while (b.remaining > 0) b.block(0);
  Line fold;
  fold.kind = LineKind::Assign;
  fold.target = "z";
  fold.lhs = Operand::variable("z");
  fold.arith = ArithOp::Add;
  fold.rhs = Operand::variable("t");
  b.lines.push_back(fold);
  Line out;
  out.kind = LineKind::Output;
  out.target = "z";
  b.lines.push_back(out);
  return MicroProgram(std::move(b.lines));
}

std::vector<TestInput> generate_suite(const MicroProgram& base, int count, std::uint64_t seed,
                                      std::int64_t lo, std::int64_t hi) {
  if (count < 1 || lo > hi) throw DomainError("invalid suite parameters");
  std::mt19937_64 g(rng::mix(seed, 0x5017e));
  std::vector<TestInput> suite;
  const long budget = 100L * count;
  for (long tries = 0; tries < budget && static_cast<int>(suite.size()) < count; ++tries) {
    TestInput in(static_cast<std::size_t>(base.arity()));
    for (auto& x : in) x = rng::between(g, lo, hi);
    if (!interpret(base, in).crashed) suite.push_back(std::move(in));
  }
  if (static_cast<int>(suite.size()) < count)
    throw GenerationError("base program crashes on too many random inputs");
  return suite;
}

SyntheticVersion sample_synthetic_spectrum(int n_faults, int n_failed_per_fault, int n_passed,
                                           int n_statements, double noise, std::uint64_t seed) {
  if (n_faults < 1 || n_failed_per_fault < 1 || n_passed < 1 || n_statements < 1)
    throw DomainError("all counts must be at least 1");
  if (n_statements < n_faults) throw DomainError("need at least one statement per fault");
  if (!(noise >= 0.0 && noise < 1.0)) throw DomainError("noise must lie in [0, 1)");

  std::mt19937_64 g(rng::mix(seed, 0x5ec7));
  const Eigen::Index J = n_statements;
  const int n_failed = n_faults * n_failed_per_fault;
  const int n_tests = n_failed + n_passed;

  std::vector<Eigen::Matrix<bool, Eigen::Dynamic, 1>> paths;
  for (int f = 0; f < n_faults; ++f) {
    Eigen::Matrix<bool, Eigen::Dynamic, 1> path(J);
    for (Eigen::Index s = 0; s < J; ++s) path(s) = s >= n_faults ? rng::chance(g, 0.5) : s == f;
    paths.push_back(std::move(path));
  }

  // Column layout before shuffling: failures grouped by fault, then passes.
  CoverageMatrix m(J, n_tests);
  std::vector<int> fault_of(static_cast<std::size_t>(n_tests), -1);
  for (int f = 0; f < n_faults; ++f)
    for (int i = 0; i < n_failed_per_fault; ++i) {
      const int c = f * n_failed_per_fault + i;
      m.col(c) = paths[static_cast<std::size_t>(f)];
      fault_of[static_cast<std::size_t>(c)] = f;
    }
  Eigen::Matrix<bool, Eigen::Dynamic, 1> passing(J);
  for (Eigen::Index s = 0; s < J; ++s) passing(s) = s >= n_faults && rng::chance(g, 0.5);
  for (int c = n_failed; c < n_tests; ++c) m.col(c) = passing;
  if (noise > 0.0)
    for (Eigen::Index c = 0; c < n_tests; ++c)
      for (Eigen::Index s = 0; s < J; ++s)
        if (rng::chance(g, noise)) m(s, c) = !m(s, c);

  std::vector<int> order(static_cast<std::size_t>(n_tests));
  for (int i = 0; i < n_tests; ++i) order[static_cast<std::size_t>(i)] = i;
  rng::shuffle(order, g);

  CoverageMatrix shuffled(J, n_tests);
  std::vector<Verdict> verdicts;
  TestIds failed_ids;
  std::vector<int> faults;
  for (int c = 0; c < n_tests; ++c) {
    const int src = order[static_cast<std::size_t>(c)];
    shuffled.col(c) = m.col(src);
    const int f = fault_of[static_cast<std::size_t>(src)];
    verdicts.push_back(f >= 0 ? Verdict::Fail : Verdict::Pass);
    if (f >= 0) {
      failed_ids.push_back(c);
      faults.push_back(f);
    }
  }
  return {CoverageRecord(std::move(shuffled), std::move(verdicts)), OracleLabels(failed_ids, faults, n_faults)};
}

}  // namespace failclust
