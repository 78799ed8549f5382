#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace failclust {

// A tiny branching language over 64-bit integers:
//
//   IN a b c          input binding
//   SET z = a * b     assignment: operand [op operand], op in + - * /
//   IF a < b          relational condition: < <= > >= == !=
//   ELSE
//   END
//   OUT z             the single output variable, last line
//
// "ELSE DELETED" marks an else branch removed by mutation: it is kept for
// stable statement ids but never executes.
//
// IN, SET, IF and ELSE lines are statements with 1-based ids in line order;
// END and OUT are structural and carry no id.

enum class ArithOp { Add, Sub, Mul, Div };
enum class RelOp { Lt, Le, Gt, Ge, Eq, Ne };

RelOp negate(RelOp op);
std::string_view symbol(ArithOp op);
std::string_view symbol(RelOp op);

struct Operand {
  bool is_const = false;
  std::int64_t value = 0;
  std::string var;

  static Operand constant(std::int64_t v) { return {true, v, {}}; }
  static Operand variable(std::string name) { return {false, 0, std::move(name)}; }
  friend bool operator==(const Operand&, const Operand&) = default;
};

enum class LineKind { Input, Assign, If, Else, End, Output };

struct Line {
  LineKind kind = LineKind::End;
  int id = 0;  // statement id, 0 for END/OUT

  std::vector<std::string> inputs;  // Input

  std::string target;  // Assign / Output
  Operand lhs;         // Assign, If
  std::optional<ArithOp> arith;
  Operand rhs;  // Assign (when arith), If
  RelOp rel = RelOp::Lt;
  bool else_deleted = false;  // If, Else

  // Resolved block structure (line indices), -1 when absent.
  int else_line = -1;  // If
  int end_line = -1;   // If, Else

  friend bool operator==(const Line&, const Line&) = default;
};

class MicroProgram {
 public:
  /// Validates nesting, a single leading IN and a single trailing OUT.
  explicit MicroProgram(std::vector<Line> lines);

  const std::vector<Line>& lines() const noexcept { return lines_; }
  int num_statements() const noexcept { return num_statements_; }
  int arity() const noexcept { return static_cast<int>(lines_.front().inputs.size()); }
  const std::string& output_var() const noexcept { return lines_.back().target; }

  /// Line index of statement `id` (1-based).
  int line_of(int id) const;
  const Line& statement(int id) const { return lines_.at(static_cast<std::size_t>(line_of(id))); }

  /// Copy with statement `id` replaced; the kind of the line must not change.
  MicroProgram with_statement(int id, Line line) const;

  friend bool operator==(const MicroProgram&, const MicroProgram&) = default;

 private:
  std::vector<Line> lines_;
  int num_statements_ = 0;
};

MicroProgram parse_program(std::string_view text);
MicroProgram load_program(const std::string& path);
std::string format_program(const MicroProgram& p);

struct RunResult {
  std::int64_t output = 0;
  bool crashed = false;     // division by zero
  std::vector<int> trace;   // executed statement ids, ascending

  bool same_outcome(const RunResult& o) const {
    return crashed == o.crashed && (crashed || output == o.output);
  }
};

RunResult interpret(const MicroProgram& p, std::span<const std::int64_t> input);

}  // namespace failclust
