#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pastlab/rational.hpp"

namespace pastlab {

// Variable names are interned once; valuations and expressions carry ids.
using Symbol = std::uint32_t;

Symbol intern(std::string_view name);
const std::string& name_of(Symbol s);

struct AExpr;
struct BExpr;
struct Program;
using AExprPtr = std::shared_ptr<const AExpr>;
using BExprPtr = std::shared_ptr<const BExpr>;
using ProgramPtr = std::shared_ptr<const Program>;

enum class AOp { Add, Sub, Mul };

struct AExpr {
  enum class Kind { Lit, Var, Neg, Bin };
  Kind kind;
  Rational value{};  // Lit, never negative
  Symbol var = 0;  // Var
  AOp op = AOp::Add;
  AExprPtr lhs{}, rhs{};  // Neg uses lhs only
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct BExpr {
  enum class Kind { Const, Cmp, Not, And, Or };
  Kind kind;
  bool value = false;
  CmpOp cmp = CmpOp::Eq;
  AExprPtr left{}, right{};  // Cmp
  BExprPtr lhs{}, rhs{};  // Not uses lhs only
};

struct Program {
  enum class Kind { Empty, Skip, Exit, Assign, Seq, Prob, Nondet, While, If };
  Kind kind;
  Symbol var = 0;      // Assign
  AExprPtr expr{};     // Assign rhs, Prob weight
  BExprPtr guard{};    // While, If
  ProgramPtr first{};  // Seq head, choice/If left, While body
  ProgramPtr second{};  // Seq tail, choice/If right
};

namespace ast {

AExprPtr lit(const Rational& q);  // negative values become Neg(Lit)
AExprPtr var(Symbol s);
AExprPtr var(std::string_view name);
AExprPtr neg(AExprPtr e);
AExprPtr add(AExprPtr a, AExprPtr b);
AExprPtr sub(AExprPtr a, AExprPtr b);
AExprPtr mul(AExprPtr a, AExprPtr b);

BExprPtr truth(bool v);
BExprPtr cmp(CmpOp op, AExprPtr a, AExprPtr b);
BExprPtr not_(BExprPtr b);
BExprPtr and_(BExprPtr a, BExprPtr b);
BExprPtr or_(BExprPtr a, BExprPtr b);

ProgramPtr empty();
ProgramPtr skip();
ProgramPtr exit();
ProgramPtr assign(Symbol v, AExprPtr e);
ProgramPtr assign(std::string_view v, AExprPtr e);
ProgramPtr seq(ProgramPtr a, ProgramPtr b);
ProgramPtr seq(const std::vector<ProgramPtr>& parts);  // right-nested
ProgramPtr prob(ProgramPtr l, AExprPtr p, ProgramPtr r);
ProgramPtr nondet(ProgramPtr l, ProgramPtr r);
ProgramPtr loop(BExprPtr g, ProgramPtr body);
ProgramPtr branch(BExprPtr g, ProgramPtr then_part, ProgramPtr else_part);

}  // namespace ast

bool equal(const AExpr& a, const AExpr& b);
bool equal(const BExpr& a, const BExpr& b);
bool equal(const Program& a, const Program& b);
bool equal(const ProgramPtr& a, const ProgramPtr& b);

std::string print(const AExpr& e);
std::string print(const BExpr& b);
/// Single-line canonical form; parse(print(p)) is structurally equal to p.
std::string print(const Program& p);
std::string print(const ProgramPtr& p);
/// Multi-line indented form, same grammar.
std::string pretty(const ProgramPtr& p);

struct ParseError : std::runtime_error {
  int line;
  int column;
  std::set<std::string> expected;
  ParseError(int line, int column, std::set<std::string> expected, const std::string& found);
};

ProgramPtr parse_program(std::string_view text);
AExprPtr parse_aexpr(std::string_view text);
BExprPtr parse_bexpr(std::string_view text);

// Misc queries used across modules.
std::size_t program_size(const ProgramPtr& p);
void collect_variables(const ProgramPtr& p, std::set<Symbol>& out);
bool has_variables(const AExpr& e);

}  // namespace pastlab
