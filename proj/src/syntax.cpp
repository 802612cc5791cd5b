#include "pastlab/syntax.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace pastlab {

namespace {

struct Interner {
  std::mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string, Symbol> ids;
};

Interner& interner() {
  static Interner table;
  return table;
}

}  // namespace

Symbol intern(std::string_view name) {
  Interner& t = interner();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.ids.find(std::string(name));
  if (it != t.ids.end()) return it->second;
  Symbol s = static_cast<Symbol>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(std::string(name), s);
  return s;
}

const std::string& name_of(Symbol s) {
  Interner& t = interner();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.names.at(s);
}

// ---------------------------------------------------------------------------
// Builders

namespace ast {

namespace {
template <class T>
std::shared_ptr<const T> make(T&& node) {
  return std::make_shared<const T>(std::move(node));
}
}  // namespace

AExprPtr lit(const Rational& q) {
  if (sgn(q) < 0) return neg(lit(Rational(-q)));
  AExpr e{AExpr::Kind::Lit};
  e.value = q;
  e.value.canonicalize();
  return make(std::move(e));
}

AExprPtr var(Symbol s) {
  AExpr e{AExpr::Kind::Var};
  e.var = s;
  return make(std::move(e));
}

AExprPtr var(std::string_view name) { return var(intern(name)); }

AExprPtr neg(AExprPtr x) {
  AExpr e{AExpr::Kind::Neg};
  e.lhs = std::move(x);
  return make(std::move(e));
}

static AExprPtr bin(AOp op, AExprPtr a, AExprPtr b) {
  AExpr e{AExpr::Kind::Bin};
  e.op = op;
  e.lhs = std::move(a);
  e.rhs = std::move(b);
  return make(std::move(e));
}

AExprPtr add(AExprPtr a, AExprPtr b) { return bin(AOp::Add, std::move(a), std::move(b)); }
AExprPtr sub(AExprPtr a, AExprPtr b) { return bin(AOp::Sub, std::move(a), std::move(b)); }
AExprPtr mul(AExprPtr a, AExprPtr b) { return bin(AOp::Mul, std::move(a), std::move(b)); }

BExprPtr truth(bool v) {
  BExpr b{BExpr::Kind::Const};
  b.value = v;
  return make(std::move(b));
}

BExprPtr cmp(CmpOp op, AExprPtr l, AExprPtr r) {
  BExpr b{BExpr::Kind::Cmp};
  b.cmp = op;
  b.left = std::move(l);
  b.right = std::move(r);
  return make(std::move(b));
}

BExprPtr not_(BExprPtr x) {
  BExpr b{BExpr::Kind::Not};
  b.lhs = std::move(x);
  return make(std::move(b));
}

BExprPtr and_(BExprPtr l, BExprPtr r) {
  BExpr b{BExpr::Kind::And};
  b.lhs = std::move(l);
  b.rhs = std::move(r);
  return make(std::move(b));
}

BExprPtr or_(BExprPtr l, BExprPtr r) {
  BExpr b{BExpr::Kind::Or};
  b.lhs = std::move(l);
  b.rhs = std::move(r);
  return make(std::move(b));
}

ProgramPtr empty() {
  static const ProgramPtr node = std::make_shared<const Program>(Program{Program::Kind::Empty});
  return node;
}

ProgramPtr skip() {
  static const ProgramPtr node = std::make_shared<const Program>(Program{Program::Kind::Skip});
  return node;
}

ProgramPtr exit() {
  static const ProgramPtr node = std::make_shared<const Program>(Program{Program::Kind::Exit});
  return node;
}

ProgramPtr assign(Symbol v, AExprPtr e) {
  Program p{Program::Kind::Assign};
  p.var = v;
  p.expr = std::move(e);
  return make(std::move(p));
}

ProgramPtr assign(std::string_view v, AExprPtr e) { return assign(intern(v), std::move(e)); }

ProgramPtr seq(ProgramPtr a, ProgramPtr b) {
  Program p{Program::Kind::Seq};
  p.first = std::move(a);
  p.second = std::move(b);
  return make(std::move(p));
}

ProgramPtr seq(const std::vector<ProgramPtr>& parts) {
  if (parts.empty()) return empty();
  ProgramPtr acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = seq(parts[i], acc);
  return acc;
}

ProgramPtr prob(ProgramPtr l, AExprPtr w, ProgramPtr r) {
  Program p{Program::Kind::Prob};
  p.first = std::move(l);
  p.expr = std::move(w);
  p.second = std::move(r);
  return make(std::move(p));
}

ProgramPtr nondet(ProgramPtr l, ProgramPtr r) {
  Program p{Program::Kind::Nondet};
  p.first = std::move(l);
  p.second = std::move(r);
  return make(std::move(p));
}

ProgramPtr loop(BExprPtr g, ProgramPtr body) {
  Program p{Program::Kind::While};
  p.guard = std::move(g);
  p.first = std::move(body);
  return make(std::move(p));
}

ProgramPtr branch(BExprPtr g, ProgramPtr then_part, ProgramPtr else_part) {
  Program p{Program::Kind::If};
  p.guard = std::move(g);
  p.first = std::move(then_part);
  p.second = else_part ? std::move(else_part) : empty();
  return make(std::move(p));
}

}  // namespace ast

// ---------------------------------------------------------------------------
// Structural equality

bool equal(const AExpr& a, const AExpr& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case AExpr::Kind::Lit: return a.value == b.value;
    case AExpr::Kind::Var: return a.var == b.var;
    case AExpr::Kind::Neg: return equal(*a.lhs, *b.lhs);
    case AExpr::Kind::Bin:
      return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool equal(const BExpr& a, const BExpr& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BExpr::Kind::Const: return a.value == b.value;
    case BExpr::Kind::Cmp:
      return a.cmp == b.cmp && equal(*a.left, *b.left) && equal(*a.right, *b.right);
    case BExpr::Kind::Not: return equal(*a.lhs, *b.lhs);
    case BExpr::Kind::And:
    case BExpr::Kind::Or: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool equal(const Program& a, const Program& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Program::Kind::Empty:
    case Program::Kind::Skip:
    case Program::Kind::Exit: return true;
    case Program::Kind::Assign: return a.var == b.var && equal(*a.expr, *b.expr);
    case Program::Kind::Seq:
    case Program::Kind::Nondet: return equal(*a.first, *b.first) && equal(*a.second, *b.second);
    case Program::Kind::Prob:
      return equal(*a.expr, *b.expr) && equal(*a.first, *b.first) && equal(*a.second, *b.second);
    case Program::Kind::While: return equal(*a.guard, *b.guard) && equal(*a.first, *b.first);
    case Program::Kind::If:
      return equal(*a.guard, *b.guard) && equal(*a.first, *b.first) && equal(*a.second, *b.second);
  }
  return false;
}

bool equal(const ProgramPtr& a, const ProgramPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equal(*a, *b);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int aprec(const AExpr& e) {
  switch (e.kind) {
    case AExpr::Kind::Bin: return e.op == AOp::Mul ? 2 : 1;
    case AExpr::Kind::Neg: return 3;
    default: return 4;
  }
}

void print_a(std::ostream& os, const AExpr& e, int min_prec) {
  bool paren = aprec(e) < min_prec;
  if (paren) os << '(';
  switch (e.kind) {
    case AExpr::Kind::Lit: os << e.value.get_str(); break;
    case AExpr::Kind::Var: os << name_of(e.var); break;
    case AExpr::Kind::Neg:
      os << '-';
      print_a(os, *e.lhs, 4);
      break;
    case AExpr::Kind::Bin: {
      int p = aprec(e);
      print_a(os, *e.lhs, e.lhs->kind == AExpr::Kind::Neg ? 4 : p);
      os << (e.op == AOp::Add ? " + " : e.op == AOp::Sub ? " - " : " * ");
      print_a(os, *e.rhs, e.rhs->kind == AExpr::Kind::Neg ? 4 : p + 1);
      break;
    }
  }
  if (paren) os << ')';
}

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return " = ";
    case CmpOp::Ne: return " != ";
    case CmpOp::Lt: return " < ";
    case CmpOp::Le: return " <= ";
    case CmpOp::Gt: return " > ";
    case CmpOp::Ge: return " >= ";
  }
  return " ? ";
}

int bprec(const BExpr& b) {
  switch (b.kind) {
    case BExpr::Kind::Or: return 1;
    case BExpr::Kind::And: return 2;
    case BExpr::Kind::Not: return 3;
    default: return 4;
  }
}

void print_b(std::ostream& os, const BExpr& b, int min_prec) {
  bool paren = bprec(b) < min_prec;
  if (paren) os << '(';
  switch (b.kind) {
    case BExpr::Kind::Const: os << (b.value ? "true" : "false"); break;
    case BExpr::Kind::Cmp:
      print_a(os, *b.left, 1);
      os << cmp_text(b.cmp);
      print_a(os, *b.right, 1);
      break;
    case BExpr::Kind::Not:
      os << "not ";
      print_b(os, *b.lhs, 3);
      break;
    case BExpr::Kind::And:
    case BExpr::Kind::Or: {
      int p = bprec(b);
      print_b(os, *b.lhs, p);
      os << (b.kind == BExpr::Kind::And ? " and " : " or ");
      print_b(os, *b.rhs, p + 1);
      break;
    }
  }
  if (paren) os << ')';
}

struct Printer {
  std::ostream& os;
  bool multiline;
  int indent = 0;

  void newline() {
    if (!multiline) return;
    os << '\n';
    for (int i = 0; i < indent; ++i) os << "  ";
  }

  void block(const Program& p) {
    os << '{';
    if (multiline) {
      ++indent;
      newline();
      program(p);
      --indent;
      newline();
    } else {
      os << ' ';
      program(p);
      os << ' ';
    }
    os << '}';
  }

  void program(const Program& p) {
    if (p.kind != Program::Kind::Seq) {
      stmt(p);
      return;
    }
    if (p.first->kind == Program::Kind::Seq)
      block(*p.first);
    else
      stmt(*p.first);
    os << ';';
    if (multiline)
      newline();
    else
      os << ' ';
    program(*p.second);
  }

  void stmt(const Program& p) {
    switch (p.kind) {
      case Program::Kind::Empty: os << "⊥"; break;
      case Program::Kind::Skip: os << "skip"; break;
      case Program::Kind::Exit: os << "exit"; break;
      case Program::Kind::Assign:
        os << name_of(p.var) << " := ";
        print_a(os, *p.expr, 1);
        break;
      case Program::Kind::Seq: block(p); break;
      case Program::Kind::Prob:
        block(*p.first);
        os << " <";
        print_a(os, *p.expr, 1);
        os << "> ";
        block(*p.second);
        break;
      case Program::Kind::Nondet:
        block(*p.first);
        os << " [] ";
        block(*p.second);
        break;
      case Program::Kind::While:
        os << "while (";
        print_b(os, *p.guard, 1);
        os << ") ";
        block(*p.first);
        break;
      case Program::Kind::If:
        os << "if (";
        print_b(os, *p.guard, 1);
        os << ") ";
        block(*p.first);
        if (p.second->kind != Program::Kind::Empty) {
          os << " else ";
          block(*p.second);
        }
        break;
    }
  }
};

}  // namespace

std::string print(const AExpr& e) {
  std::ostringstream os;
  print_a(os, e, 1);
  return os.str();
}

std::string print(const BExpr& b) {
  std::ostringstream os;
  print_b(os, b, 1);
  return os.str();
}

std::string print(const Program& p) {
  std::ostringstream os;
  Printer{os, false}.program(p);
  return os.str();
}

std::string print(const ProgramPtr& p) { return print(*p); }

std::string pretty(const ProgramPtr& p) {
  std::ostringstream os;
  Printer{os, true}.program(*p);
  os << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Lexer and parser

ParseError::ParseError(int line_, int column_, std::set<std::string> expected_,
                       const std::string& found)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "line " << line_ << ", column " << column_ << ": ";
        if (expected_.empty()) {
          os << found;
        } else {
          os << "expected ";
          bool first = true;
          for (const auto& e : expected_) {
            os << (first ? "" : " or ") << e;
            first = false;
          }
          os << ", found " << found;
        }
        return os.str();
      }()),
      line(line_),
      column(column_),
      expected(std::move(expected_)) {}

namespace {

enum class Tok {
  Ident, Int, Skip, Exit, While, If, Else, True, False, Not, And, Or, Bottom,
  Assign, Semi, LBrace, RBrace, LParen, RParen, Box,
  Lt, Le, Gt, Ge, Eq, Ne, Plus, Minus, Star, Slash, End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Skip: return "'skip'";
    case Tok::Exit: return "'exit'";
    case Tok::While: return "'while'";
    case Tok::If: return "'if'";
    case Tok::Else: return "'else'";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::Not: return "'not'";
    case Tok::And: return "'and'";
    case Tok::Or: return "'or'";
    case Tok::Bottom: return "'⊥'";
    case Tok::Assign: return "':='";
    case Tok::Semi: return "';'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Box: return "'[]'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  static const std::unordered_map<std::string, Tok> keywords = {
      {"skip", Tok::Skip}, {"exit", Tok::Exit}, {"while", Tok::While}, {"if", Tok::If},
      {"else", Tok::Else}, {"true", Tok::True}, {"false", Tok::False}, {"not", Tok::Not},
      {"and", Tok::And},   {"or", Tok::Or}};
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      adv(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') adv(1);
      continue;
    }
    int l = line, cl = col;
    auto push = [&](Tok t, std::size_t n) {
      out.push_back({t, std::string(src.substr(i, n)), l, cl});
      adv(n);
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word(src.substr(i, j - i));
      auto it = keywords.find(word);
      push(it == keywords.end() ? Tok::Ident : it->second, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      push(Tok::Int, j - i);
      continue;
    }
    std::string_view rest = src.substr(i);
    if (rest.starts_with("⊥")) { push(Tok::Bottom, 3); continue; }
    if (rest.starts_with(":=")) { push(Tok::Assign, 2); continue; }
    if (rest.starts_with("[]")) { push(Tok::Box, 2); continue; }
    if (rest.starts_with("<=")) { push(Tok::Le, 2); continue; }
    if (rest.starts_with(">=")) { push(Tok::Ge, 2); continue; }
    if (rest.starts_with("!=")) { push(Tok::Ne, 2); continue; }
    switch (c) {
      case ';': push(Tok::Semi, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '>': push(Tok::Gt, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '-': push(Tok::Minus, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      case '/': push(Tok::Slash, 1); continue;
      default: break;
    }
    std::ostringstream found;
    if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
      found << "byte 0x" << std::hex << static_cast<int>(static_cast<unsigned char>(c));
    else
      found << "'" << c << "'";
    throw ParseError(l, cl, {}, "unexpected character " + found.str());
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  ProgramPtr whole_program() {
    ProgramPtr p = program();
    expect_end();
    return p;
  }

  AExprPtr whole_aexpr() {
    AExprPtr e = aexpr();
    expect_end();
    return e;
  }

  BExprPtr whole_bexpr() {
    BExprPtr b = bexpr();
    expect_end();
    return b;
  }

 private:
  static constexpr int kMaxDepth = 2000;

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) {
        const Token& t = p.peek();
        throw ParseError(t.line, t.column, {}, "nesting too deep");
      }
    }
    ~DepthGuard() { --p.depth_; }
  };

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }

  bool at(Tok t) const { return peek().kind == t; }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, std::move(expected), found);
  }

  Token expect(Tok t) {
    if (!at(t)) fail({describe(t)});
    return take();
  }

  void expect_end() {
    if (!at(Tok::End)) fail({describe(Tok::End)});
  }

  ProgramPtr program() {
    DepthGuard g(*this);
    std::vector<ProgramPtr> parts;
    parts.push_back(choice());
    while (at(Tok::Semi)) {
      take();
      if (at(Tok::End) || at(Tok::RBrace)) break;  // trailing ';'
      parts.push_back(choice());
    }
    return ast::seq(parts);
  }

  ProgramPtr choice() {
    DepthGuard g(*this);
    ProgramPtr left = simple();
    if (at(Tok::Lt)) {
      take();
      AExprPtr w = aexpr();
      expect(Tok::Gt);
      return ast::prob(left, w, choice());
    }
    if (at(Tok::Box)) {
      take();
      return ast::nondet(left, choice());
    }
    return left;
  }

  ProgramPtr braced() {
    expect(Tok::LBrace);
    ProgramPtr p = program();
    expect(Tok::RBrace);
    return p;
  }

  ProgramPtr simple() {
    DepthGuard g(*this);
    switch (peek().kind) {
      case Tok::Skip: take(); return ast::skip();
      case Tok::Exit: take(); return ast::exit();
      case Tok::Bottom: take(); return ast::empty();
      case Tok::Ident: {
        Token name = take();
        expect(Tok::Assign);
        return ast::assign(name.text, aexpr());
      }
      case Tok::While: {
        take();
        expect(Tok::LParen);
        BExprPtr guard = bexpr();
        expect(Tok::RParen);
        return ast::loop(guard, braced());
      }
      case Tok::If: return if_stmt();
      case Tok::LBrace: return braced();
      default:
        fail({"statement", describe(Tok::Ident), describe(Tok::Skip), describe(Tok::Exit),
              describe(Tok::While), describe(Tok::If), describe(Tok::LBrace)});
    }
  }

  ProgramPtr if_stmt() {
    DepthGuard g(*this);
    expect(Tok::If);
    expect(Tok::LParen);
    BExprPtr guard = bexpr();
    expect(Tok::RParen);
    ProgramPtr then_part = braced();
    ProgramPtr else_part = ast::empty();
    if (at(Tok::Else)) {
      take();
      else_part = at(Tok::If) ? if_stmt() : braced();
    }
    return ast::branch(guard, then_part, else_part);
  }

  // Boolean expressions -----------------------------------------------------

  BExprPtr bexpr() {
    DepthGuard g(*this);
    BExprPtr acc = bconj();
    while (at(Tok::Or)) {
      take();
      acc = ast::or_(acc, bconj());
    }
    return acc;
  }

  BExprPtr bconj() {
    BExprPtr acc = bneg();
    while (at(Tok::And)) {
      take();
      acc = ast::and_(acc, bneg());
    }
    return acc;
  }

  BExprPtr bneg() {
    DepthGuard g(*this);
    if (at(Tok::Not)) {
      take();
      return ast::not_(bneg());
    }
    return batom();
  }

  static bool boolean_token(Tok t) {
    switch (t) {
      case Tok::Lt: case Tok::Le: case Tok::Gt: case Tok::Ge: case Tok::Eq: case Tok::Ne:
      case Tok::And: case Tok::Or: case Tok::Not: case Tok::True: case Tok::False:
        return true;
      default:
        return false;
    }
  }

  // A '(' opens a boolean group iff the matching group contains a boolean token.
  bool paren_is_boolean() const {
    int depth = 0;
    for (std::size_t k = pos_; k < toks_.size(); ++k) {
      Tok t = toks_[k].kind;
      if (t == Tok::LParen) ++depth;
      else if (t == Tok::RParen) {
        if (--depth == 0) return false;
      } else if (t == Tok::End) {
        return false;
      } else if (boolean_token(t)) {
        return true;
      }
    }
    return false;
  }

  BExprPtr batom() {
    if (at(Tok::True)) { take(); return ast::truth(true); }
    if (at(Tok::False)) { take(); return ast::truth(false); }
    if (at(Tok::LParen) && paren_is_boolean()) {
      take();
      BExprPtr b = bexpr();
      expect(Tok::RParen);
      return b;
    }
    AExprPtr l = aexpr();
    CmpOp op;
    switch (peek().kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default:
        fail({describe(Tok::Eq), describe(Tok::Ne), describe(Tok::Lt), describe(Tok::Le),
              describe(Tok::Gt), describe(Tok::Ge)});
    }
    take();
    return ast::cmp(op, l, aexpr());
  }

  // Arithmetic --------------------------------------------------------------

  AExprPtr aexpr() {
    DepthGuard g(*this);
    AExprPtr acc = term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      bool plus = take().kind == Tok::Plus;
      AExprPtr r = term();
      acc = plus ? ast::add(acc, r) : ast::sub(acc, r);
    }
    return acc;
  }

  AExprPtr term() {
    AExprPtr acc = factor();
    while (at(Tok::Star)) {
      take();
      acc = ast::mul(acc, factor());
    }
    return acc;
  }

  AExprPtr factor() {
    DepthGuard g(*this);
    if (at(Tok::Minus)) {
      take();
      return ast::neg(factor());
    }
    if (at(Tok::Ident)) return ast::var(take().text);
    if (at(Tok::Int)) {
      Integer num(take().text, 10);
      if (!at(Tok::Slash)) return ast::lit(Rational(num));
      take();
      if (!at(Tok::Int)) fail({describe(Tok::Int)});
      Token dt = peek();
      Integer den(take().text, 10);
      if (den == 0) throw ParseError(dt.line, dt.column, {}, "zero denominator in literal");
      Rational q(num, den);
      q.canonicalize();
      return ast::lit(q);
    }
    if (at(Tok::LParen)) {
      take();
      AExprPtr e = aexpr();
      expect(Tok::RParen);
      return e;
    }
    fail({describe(Tok::Ident), describe(Tok::Int), describe(Tok::LParen), describe(Tok::Minus)});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

ProgramPtr parse_program(std::string_view text) { return Parser(text).whole_program(); }
AExprPtr parse_aexpr(std::string_view text) { return Parser(text).whole_aexpr(); }
BExprPtr parse_bexpr(std::string_view text) { return Parser(text).whole_bexpr(); }

// ---------------------------------------------------------------------------

std::size_t program_size(const ProgramPtr& p) {
  if (!p) return 0;
  return 1 + program_size(p->first) + program_size(p->second);
}

static void vars_a(const AExprPtr& e, std::set<Symbol>& out) {
  if (!e) return;
  if (e->kind == AExpr::Kind::Var) out.insert(e->var);
  vars_a(e->lhs, out);
  vars_a(e->rhs, out);
}

static void vars_b(const BExprPtr& b, std::set<Symbol>& out) {
  if (!b) return;
  vars_a(b->left, out);
  vars_a(b->right, out);
  vars_b(b->lhs, out);
  vars_b(b->rhs, out);
}

void collect_variables(const ProgramPtr& p, std::set<Symbol>& out) {
  if (!p) return;
  if (p->kind == Program::Kind::Assign) out.insert(p->var);
  vars_a(p->expr, out);
  vars_b(p->guard, out);
  collect_variables(p->first, out);
  collect_variables(p->second, out);
}

bool has_variables(const AExpr& e) {
  switch (e.kind) {
    case AExpr::Kind::Lit: return false;
    case AExpr::Kind::Var: return true;
    case AExpr::Kind::Neg: return has_variables(*e.lhs);
    case AExpr::Kind::Bin: return has_variables(*e.lhs) || has_variables(*e.rhs);
  }
  return true;
}

}  // namespace pastlab
