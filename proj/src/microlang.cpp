#include "failclust/microlang.hpp"

#include "failclust/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace failclust {

RelOp negate(RelOp op) {
  switch (op) {
    case RelOp::Lt: return RelOp::Ge;
    case RelOp::Le: return RelOp::Gt;
    case RelOp::Gt: return RelOp::Le;
    case RelOp::Ge: return RelOp::Lt;
    case RelOp::Eq: return RelOp::Ne;
    case RelOp::Ne: return RelOp::Eq;
  }
  return op;
}

std::string_view symbol(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
  }
  return "?";
}

std::string_view symbol(RelOp op) {
  switch (op) {
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
    case RelOp::Eq: return "==";
    case RelOp::Ne: return "!=";
  }
  return "?";
}

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool is_identifier(std::string_view t) {
  if (t.empty() || !(std::islower(static_cast<unsigned char>(t[0])) || t[0] == '_')) return false;
  return std::all_of(t.begin(), t.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '_';
  });
}

Operand parse_operand(std::string_view t, std::size_t ln) {
  if (is_identifier(t)) return Operand::variable(std::string(t));
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError(ln, "expected a variable or integer, got '" + std::string(t) + "'");
  return Operand::constant(v);
}

std::optional<ArithOp> parse_arith(std::string_view t) {
  if (t == "+") return ArithOp::Add;
  if (t == "-") return ArithOp::Sub;
  if (t == "*") return ArithOp::Mul;
  if (t == "/") return ArithOp::Div;
  return std::nullopt;
}

std::optional<RelOp> parse_rel(std::string_view t) {
  if (t == "<") return RelOp::Lt;
  if (t == "<=") return RelOp::Le;
  if (t == ">") return RelOp::Gt;
  if (t == ">=") return RelOp::Ge;
  if (t == "==") return RelOp::Eq;
  if (t == "!=") return RelOp::Ne;
  return std::nullopt;
}

std::string operand_text(const Operand& o) { return o.is_const ? std::to_string(o.value) : o.var; }

// Structural validation shared by the constructor and with_statement().
int resolve(std::vector<Line>& lines) {
  if (lines.empty()) throw DomainError("empty program");
  if (lines.front().kind != LineKind::Input) throw DomainError("program must start with IN");
  if (lines.back().kind != LineKind::Output) throw DomainError("program must end with OUT");
  if (lines.front().inputs.empty()) throw DomainError("IN binds no variables");

  std::vector<int> open;  // indices of IF lines awaiting ELSE/END
  int next_id = 0;
  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    Line& l = lines[i];
    switch (l.kind) {
      case LineKind::Input:
        if (i != 0) throw DomainError("IN may only appear on the first line");
        l.id = ++next_id;
        break;
      case LineKind::Assign:
        l.id = ++next_id;
        break;
      case LineKind::If:
        l.id = ++next_id;
        l.else_line = -1;
        open.push_back(i);
        break;
      case LineKind::Else: {
        if (open.empty() || lines[open.back()].else_line >= 0)
          throw DomainError("ELSE without a matching IF");
        l.id = ++next_id;
        Line& head = lines[open.back()];
        head.else_line = i;
        head.else_deleted = l.else_deleted = head.else_deleted || l.else_deleted;
        break;
      }
      case LineKind::End: {
        if (open.empty()) throw DomainError("END without a matching IF");
        Line& head = lines[open.back()];
        head.end_line = i;
        if (head.else_line >= 0) lines[head.else_line].end_line = i;
        open.pop_back();
        l.id = 0;
        break;
      }
      case LineKind::Output:
        if (i + 1 != static_cast<int>(lines.size())) throw DomainError("OUT must be the last line");
        l.id = 0;
        break;
    }
  }
  if (!open.empty()) throw DomainError("IF without END");
  return next_id;
}

}  // namespace

MicroProgram::MicroProgram(std::vector<Line> lines) : lines_(std::move(lines)) {
  num_statements_ = resolve(lines_);
}

int MicroProgram::line_of(int id) const {
  for (int i = 0; i < static_cast<int>(lines_.size()); ++i)
    if (lines_[i].id == id && id != 0) return i;
  throw DomainError("no statement with id " + std::to_string(id));
}

MicroProgram MicroProgram::with_statement(int id, Line line) const {
  const int at = line_of(id);
  if (lines_[at].kind != line.kind) throw DomainError("replacement changes the statement kind");
  std::vector<Line> copy = lines_;
  copy[at] = std::move(line);
  return MicroProgram(std::move(copy));
}

MicroProgram parse_program(std::string_view text) {
  std::vector<Line> lines;
  std::size_t ln = 0;
  while (!text.empty()) {
    ++ln;
    const auto nl = text.find('\n');
    const auto raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const auto tk = tokens(raw);
    if (tk.empty() || tk[0].front() == '#') continue;

    Line l;
    const auto head = tk[0];
    if (head == "IN") {
      l.kind = LineKind::Input;
      if (tk.size() < 2) throw ParseError(ln, "IN needs at least one variable");
      for (std::size_t i = 1; i < tk.size(); ++i) {
        if (!is_identifier(tk[i])) throw ParseError(ln, "bad input name '" + std::string(tk[i]) + "'");
        l.inputs.emplace_back(tk[i]);
      }
    } else if (head == "SET") {
      l.kind = LineKind::Assign;
      if ((tk.size() != 4 && tk.size() != 6) || tk[2] != "=" || !is_identifier(tk[1]))
        throw ParseError(ln, "expected 'SET <var> = <operand> [<op> <operand>]'");
      l.target = std::string(tk[1]);
      l.lhs = parse_operand(tk[3], ln);
      if (tk.size() == 6) {
        l.arith = parse_arith(tk[4]);
        if (!l.arith) throw ParseError(ln, "unknown arithmetic operator '" + std::string(tk[4]) + "'");
        l.rhs = parse_operand(tk[5], ln);
      }
    } else if (head == "IF") {
      l.kind = LineKind::If;
      if (tk.size() != 4) throw ParseError(ln, "expected 'IF <operand> <relop> <operand>'");
      l.lhs = parse_operand(tk[1], ln);
      const auto rel = parse_rel(tk[2]);
      if (!rel) throw ParseError(ln, "unknown relational operator '" + std::string(tk[2]) + "'");
      l.rel = *rel;
      l.rhs = parse_operand(tk[3], ln);
    } else if (head == "ELSE" && (tk.size() == 1 || (tk.size() == 2 && tk[1] == "DELETED"))) {
      l.kind = LineKind::Else;
      l.else_deleted = tk.size() == 2;
    } else if (head == "END" && tk.size() == 1) {
      l.kind = LineKind::End;
    } else if (head == "OUT" && tk.size() == 2 && is_identifier(tk[1])) {
      l.kind = LineKind::Output;
      l.target = std::string(tk[1]);
    } else {
      throw ParseError(ln, "unrecognized statement '" + std::string(raw) + "'");
    }
    lines.push_back(std::move(l));
  }
  try {
    return MicroProgram(std::move(lines));
  } catch (const DomainError& e) {
    throw ParseError(ln, e.what());
  }
}

MicroProgram load_program(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open program file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_program(buf.str());
}

std::string format_program(const MicroProgram& p) {
  std::string out;
  int depth = 0;
  for (const Line& l : p.lines()) {
    if (l.kind == LineKind::Else || l.kind == LineKind::End) --depth;
    out.append(static_cast<std::size_t>(std::max(depth, 0)) * 2, ' ');
    switch (l.kind) {
      case LineKind::Input:
        out += "IN";
        for (const auto& v : l.inputs) out += " " + v;
        break;
      case LineKind::Assign:
        out += "SET " + l.target + " = " + operand_text(l.lhs);
        if (l.arith) out += " " + std::string(symbol(*l.arith)) + " " + operand_text(l.rhs);
        break;
      case LineKind::If:
        out += "IF " + operand_text(l.lhs) + " " + std::string(symbol(l.rel)) + " " +
               operand_text(l.rhs);
        break;
      case LineKind::Else: out += l.else_deleted ? "ELSE DELETED" : "ELSE"; break;
      case LineKind::End: out += "END"; break;
      case LineKind::Output: out += "OUT " + l.target; break;
    }
    out += '\n';
    if (l.kind == LineKind::If || l.kind == LineKind::Else) ++depth;
  }
  return out;
}

namespace {

class Machine {
 public:
  std::int64_t read(const Operand& o) const {
    if (o.is_const) return o.value;
    const auto it = vars_.find(o.var);
    return it == vars_.end() ? 0 : it->second;
  }
  void write(const std::string& name, std::int64_t v) { vars_[name] = v; }

 private:
  std::map<std::string, std::int64_t, std::less<>> vars_;
};

// Wrapping arithmetic; nullopt on division by zero.
std::optional<std::int64_t> apply(ArithOp op, std::int64_t a, std::int64_t b) {
  const auto ua = static_cast<std::uint64_t>(a);
  const auto ub = static_cast<std::uint64_t>(b);
  switch (op) {
    case ArithOp::Add: return static_cast<std::int64_t>(ua + ub);
    case ArithOp::Sub: return static_cast<std::int64_t>(ua - ub);
    case ArithOp::Mul: return static_cast<std::int64_t>(ua * ub);
    case ArithOp::Div:
      if (b == 0) return std::nullopt;
      if (a == std::numeric_limits<std::int64_t>::min() && b == -1) return a;
      return a / b;
  }
  return std::nullopt;
}

bool compare(RelOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case RelOp::Lt: return a < b;
    case RelOp::Le: return a <= b;
    case RelOp::Gt: return a > b;
    case RelOp::Ge: return a >= b;
    case RelOp::Eq: return a == b;
    case RelOp::Ne: return a != b;
  }
  return false;
}

}  // namespace

RunResult interpret(const MicroProgram& p, std::span<const std::int64_t> input) {
  if (static_cast<int>(input.size()) != p.arity())
    throw DomainError("program takes " + std::to_string(p.arity()) + " inputs, got " +
                      std::to_string(input.size()));
  Machine m;
  RunResult result;
  const auto& lines = p.lines();
  std::size_t pc = 0;
  while (pc < lines.size()) {
    const Line& l = lines[pc];
    switch (l.kind) {
      case LineKind::Input:
        result.trace.push_back(l.id);
        for (std::size_t i = 0; i < l.inputs.size(); ++i) m.write(l.inputs[i], input[i]);
        ++pc;
        break;
      case LineKind::Assign: {
        result.trace.push_back(l.id);
        std::int64_t value = m.read(l.lhs);
        if (l.arith) {
          const auto v = apply(*l.arith, value, m.read(l.rhs));
          if (!v) {
            result.crashed = true;
            std::sort(result.trace.begin(), result.trace.end());
            return result;
          }
          value = *v;
        }
        m.write(l.target, value);
        ++pc;
        break;
      }
      case LineKind::If:
        result.trace.push_back(l.id);
        if (compare(l.rel, m.read(l.lhs), m.read(l.rhs))) {
          ++pc;
        } else if (l.else_line >= 0 && !l.else_deleted) {
          result.trace.push_back(lines[static_cast<std::size_t>(l.else_line)].id);
          pc = static_cast<std::size_t>(l.else_line) + 1;
        } else {
          pc = static_cast<std::size_t>(l.end_line) + 1;
        }
        break;
      case LineKind::Else:
        // Reached only by falling out of the then-branch.
        pc = static_cast<std::size_t>(l.end_line) + 1;
        break;
      case LineKind::End:
        ++pc;
        break;
      case LineKind::Output:
        result.output = m.read(Operand::variable(l.target));
        ++pc;
        break;
    }
  }
  std::sort(result.trace.begin(), result.trace.end());
  return result;
}

}  // namespace failclust
