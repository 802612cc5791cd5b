#include "pastlab/ordinal.hpp"

#include <cctype>
#include <stdexcept>

namespace pastlab {

Ordinal::Ordinal() = default;

Ordinal Ordinal::from_natural(const Integer& n) {
  if (n < 0) throw std::domain_error("negative natural");
  Ordinal o;
  if (n > 0) o.terms_.push_back(Term{Ordinal(), n});
  return o;
}

Ordinal Ordinal::term(const Ordinal& exponent, const Integer& coefficient) {
  if (coefficient < 0) throw std::domain_error("negative coefficient");
  Ordinal o;
  if (coefficient > 0) o.terms_.push_back(Term{exponent, coefficient});
  return o;
}

Ordinal Ordinal::omega_pow(const Ordinal& exponent) { return term(exponent, 1); }

Ordinal Ordinal::omega() { return omega_pow(from_natural(1)); }

bool Ordinal::is_zero() const { return terms_.empty(); }

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

Integer Ordinal::finite_value() const {
  if (!is_finite()) throw std::domain_error("ordinal " + str() + " is infinite");
  return terms_.empty() ? Integer(0) : terms_[0].coefficient;
}

Ordinal Ordinal::successor() const { return natural_sum(*this, from_natural(1)); }

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (auto c = x.exponent <=> y.exponent; c != 0) return c;
    if (x.coefficient != y.coefficient)
      return x.coefficient < y.coefficient ? std::strong_ordering::less
                                           : std::strong_ordering::greater;
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

Ordinal natural_sum(const Ordinal& a, const Ordinal& b) {
  Ordinal out;
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    if (j == b.terms_.size()) {
      out.terms_.push_back(a.terms_[i++]);
    } else if (i == a.terms_.size()) {
      out.terms_.push_back(b.terms_[j++]);
    } else {
      auto c = a.terms_[i].exponent <=> b.terms_[j].exponent;
      if (c > 0) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        out.terms_.push_back(b.terms_[j++]);
      } else {
        out.terms_.push_back(
            Ordinal::Term{a.terms_[i].exponent,
                          Integer(a.terms_[i].coefficient + b.terms_[j].coefficient)});
        ++i;
        ++j;
      }
    }
  }
  return out;
}

std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  if (*this == omega()) return "w";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) s += " + ";
    const Term& t = terms_[i];
    if (t.exponent.is_zero())
      s += t.coefficient.get_str();
    else
      s += "w^(" + t.exponent.str() + ")*" + t.coefficient.get_str();
  }
  return s;
}

namespace {

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view s) : s_(s) {}

  Ordinal whole() {
    Ordinal o = ordinal(0);
    skip_ws();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return o;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("ordinal: " + what + " at offset " + std::to_string(i_));
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Integer integer() {
    skip_ws();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected an integer");
    return Integer(std::string(s_.substr(start, i_ - start)), 10);
  }

  Ordinal ordinal(int depth) {
    if (depth > 200) fail("nesting too deep");
    std::vector<Ordinal::Term> terms;
    do {
      skip_ws();
      Ordinal::Term t;
      if (eat('w')) {
        t.exponent = Ordinal::from_natural(1);
        if (eat('^')) {
          if (!eat('(')) fail("expected '('");
          t.exponent = ordinal(depth + 1);
          if (!eat(')')) fail("expected ')'");
        }
        t.coefficient = eat('*') ? integer() : Integer(1);
        if (t.coefficient == 0) fail("zero coefficient");
      } else {
        t.exponent = Ordinal();
        t.coefficient = integer();
        if (t.coefficient == 0) {
          if (!terms.empty()) fail("zero term");
          skip_ws();
          if (i_ < s_.size() && s_[i_] == '+') fail("zero term");
          return Ordinal();
        }
      }
      if (!terms.empty() && !(t.exponent < terms.back().exponent))
        fail("exponents must be strictly decreasing");
      terms.push_back(std::move(t));
    } while (eat('+'));
    Ordinal o;
    for (const auto& t : terms) o = natural_sum(o, Ordinal::term(t.exponent, t.coefficient));
    return o;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text) { return OrdinalParser(text).whole(); }

}  // namespace pastlab
