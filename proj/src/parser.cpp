// Recursive-descent parser for field expressions.
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <variant>

#include "holo/error.hpp"
#include "holo/field.hpp"

namespace holo {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Semi, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  cplx value{};  // Number
  bool integral = false;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (i_ >= s_.size()) {
        out.push_back({Tok::End, i_, "", {}, false});
        return out;
      }
      char c = s_[i_];
      std::size_t start = i_;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number());
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
        out.push_back({Tok::Ident, start, s_.substr(start, i_ - start), {}, false});
      } else {
        Tok k;
        switch (c) {
          case '+': k = Tok::Plus; break;
          case '-': k = Tok::Minus; break;
          case '*': k = Tok::Star; break;
          case '/': k = Tok::Slash; break;
          case '^': k = Tok::Caret; break;
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case ';': k = Tok::Semi; break;
          default:
            throw SyntaxError(start, "number, z, i, operator or parenthesis",
                              std::string("unexpected character '") + c + "'");
        }
        ++i_;
        out.push_back({k, start, std::string(1, c), {}, false});
      }
    }
  }

 private:
  std::size_t digits() {
    std::size_t n = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_, ++n;
    return n;
  }

  // decimal [exponent]
  double decimal(std::size_t start, bool* integral) {
    std::size_t n = digits();
    *integral = true;
    if (i_ < s_.size() && s_[i_] == '.') {
      ++i_;
      n += digits();
      *integral = false;
    }
    if (n == 0) throw SyntaxError(start, "digit", "malformed number");
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t save = i_;
      ++i_;
      if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
      if (digits() == 0) {
        i_ = save;
      } else {
        *integral = false;
      }
    }
    return std::strtod(s_.substr(start, i_ - start).c_str(), nullptr);
  }

  Token number() {
    std::size_t start = i_;
    bool integral = false;
    double v = decimal(start, &integral);
    // a rational literal like 3/2 binds tighter than the i suffix
    if (i_ + 1 < s_.size() && s_[i_] == '/' &&
        (std::isdigit(static_cast<unsigned char>(s_[i_ + 1])) || s_[i_ + 1] == '.')) {
      ++i_;
      bool dummy = false;
      double den = decimal(i_, &dummy);
      if (den == 0.0) throw SyntaxError(start, "nonzero denominator", "division by zero in literal");
      v /= den;
      integral = false;
    }
    cplx value(v, 0.0);
    if (i_ < s_.size() && s_[i_] == 'i' &&
        !(i_ + 1 < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_ + 1])))) {
      ++i_;
      value = cplx(0.0, v);
      integral = false;
    }
    return {Tok::Number, start, s_.substr(start, i_ - start), value, integral};
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

// Value of a subexpression: a rational function N/D, or one of the
// constructor-only kinds which may not take part in arithmetic.
struct Rational {
  CPoly num, den;
};
struct ConjVal {
  CPoly p;
};
struct MoebVal {
  cplx A, B, C, D;
};
struct EssVal {
  int n, m;
};
using Value = std::variant<Rational, ConjVal, MoebVal, EssVal>;

constexpr int kIntermediateDegree = 64;

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(Lexer(text).run()) {}

  Value parse() {
    Value v = expr();
    if (peek().kind != Tok::End) fail("operator or end of input");
    return v;
  }

 private:
  const Token& peek() const { return toks_[k_]; }
  const Token& next() { return toks_[k_++]; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.pos, expected, "expected " + expected + " but found " + got);
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(what);
    ++k_;
  }

  static Rational& rat(Value& v, std::size_t pos) {
    if (auto* r = std::get_if<Rational>(&v)) return *r;
    (void)pos;
    throw Error(ErrorCode::NotRecognizedForm,
                "conj(...), moebius(...) and essential(...) must form the whole expression");
  }

  static void check_size(const Rational& r) {
    if (r.num.degree() > kIntermediateDegree || r.den.degree() > kIntermediateDegree)
      throw Error(ErrorCode::NotRecognizedForm, "expression degree exceeds the supported range");
  }

  static Rational make(CPoly n, CPoly d) {
    Rational r{std::move(n), std::move(d)};
    check_size(r);
    return r;
  }

  Value expr() {
    Value lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = next();
      Value rhs = term();
      Rational& a = rat(lhs, op.pos);
      Rational& b = rat(rhs, op.pos);
      const bool plus = op.kind == Tok::Plus;
      if (a.den == b.den) {
        lhs = make(plus ? a.num + b.num : a.num - b.num, a.den);
      } else {
        CPoly x = a.num * b.den, y = b.num * a.den;
        lhs = make(plus ? x + y : x - y, a.den * b.den);
      }
    }
    return lhs;
  }

  bool starts_factor(Tok k) const { return k == Tok::LParen || k == Tok::Ident; }

  Value term() {
    Value lhs = unary();
    while (true) {
      Tok k = peek().kind;
      bool implicit = starts_factor(k);
      if (k != Tok::Star && k != Tok::Slash && !implicit) break;
      std::size_t pos = peek().pos;
      if (!implicit) ++k_;
      Value rhs = unary();
      Rational& a = rat(lhs, pos);
      Rational& b = rat(rhs, pos);
      if (k == Tok::Slash) {
        if (b.num.is_zero()) throw Error(ErrorCode::DegenerateField, "division by zero");
        lhs = make(a.num * b.den, a.den * b.num);
      } else {
        lhs = make(a.num * b.num, a.den * b.den);
      }
    }
    return lhs;
  }

  Value unary() {
    if (peek().kind == Tok::Minus) {
      std::size_t pos = next().pos;
      Value v = unary();
      Rational& r = rat(v, pos);
      return make(-r.num, r.den);
    }
    if (peek().kind == Tok::Plus) {
      next();
      return unary();
    }
    return power();
  }

  int exponent() {
    bool neg = false;
    bool paren = false;
    if (peek().kind == Tok::LParen) {
      paren = true;
      next();
    }
    if (peek().kind == Tok::Minus) {
      neg = true;
      next();
    }
    const Token& t = peek();
    if (t.kind != Tok::Number || !t.integral) fail("integer exponent");
    next();
    if (paren) expect(Tok::RParen, "')'");
    double v = t.value.real();
    if (v > kMaxDegree) throw Error(ErrorCode::NotRecognizedForm, "exponent exceeds 16");
    return neg ? -static_cast<int>(v) : static_cast<int>(v);
  }

  Value power() {
    Value base = primary();
    if (peek().kind == Tok::Caret) {
      std::size_t pos = next().pos;
      int e = exponent();
      Rational& r = rat(base, pos);
      if (e >= 0) return make(r.num.pow(e), r.den.pow(e));
      if (r.num.is_zero()) throw Error(ErrorCode::DegenerateField, "division by zero");
      return make(r.den.pow(-e), r.num.pow(-e));
    }
    return base;
  }

  cplx constant_arg() {
    std::size_t pos = peek().pos;
    Value v = expr();
    Rational& r = rat(v, pos);
    if (r.num.degree() > 0 || r.den.degree() > 0)
      throw Error(ErrorCode::NotRecognizedForm, "constructor arguments must be constants");
    return r.num.is_zero() ? cplx{} : r.num.coeff(0) / r.den.coeff(0);
  }

  int integer_arg() {
    const Token& t = peek();
    if (t.kind != Tok::Number || !t.integral) fail("integer");
    next();
    return static_cast<int>(t.value.real());
  }

  Value primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        next();
        return make(CPoly::constant(t.value), CPoly::constant(1.0));
      case Tok::LParen: {
        next();
        Value v = expr();
        expect(Tok::RParen, "')'");
        return v;
      }
      case Tok::Ident: {
        std::string id = t.text;
        next();
        if (id == "z") return make(CPoly{0.0, 1.0}, CPoly::constant(1.0));
        if (id == "i") return make(CPoly::constant(cplx(0.0, 1.0)), CPoly::constant(1.0));
        if (id == "conj") {
          expect(Tok::LParen, "'('");
          std::size_t pos = peek().pos;
          Value v = expr();
          expect(Tok::RParen, "')'");
          Rational& r = rat(v, pos);
          if (r.den.degree() != 0)
            throw Error(ErrorCode::NotRecognizedForm, "conj(...) requires a polynomial argument");
          return ConjVal{(1.0 / r.den.coeff(0)) * r.num};
        }
        if (id == "moebius") {
          expect(Tok::LParen, "'('");
          cplx a = constant_arg();
          expect(Tok::Semi, "';'");
          cplx b = constant_arg();
          expect(Tok::Semi, "';'");
          cplx c = constant_arg();
          expect(Tok::Semi, "';'");
          cplx d = constant_arg();
          expect(Tok::RParen, "')'");
          return MoebVal{a, b, c, d};
        }
        if (id == "essential") {
          expect(Tok::LParen, "'('");
          int n = integer_arg();
          expect(Tok::Semi, "';'");
          int m = integer_arg();
          expect(Tok::RParen, "')'");
          return EssVal{n, m};
        }
        k_--;
        fail("z, i, conj, moebius or essential");
      }
      default:
        fail("number, z, i, '(' or function name");
    }
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
};

}  // namespace

Field parse_field(const std::string& text) {
  Value v = Parser(text).parse();
  if (auto* c = std::get_if<ConjVal>(&v)) return Field::conjugate(c->p);
  if (auto* m = std::get_if<MoebVal>(&v)) return Field::moebius(m->A, m->B, m->C, m->D);
  if (auto* e = std::get_if<EssVal>(&v)) return Field::essential(e->n, e->m);
  const Rational& r = std::get<Rational>(v);
  if (r.num.is_zero()) throw Error(ErrorCode::DegenerateField, "zero field");
  if (r.den.degree() == 0) return Field::polynomial((1.0 / r.den.coeff(0)) * r.num);
  if (r.num.degree() == 0) return Field::inverse((1.0 / r.num.coeff(0)) * r.den);
  throw Error(ErrorCode::NotRecognizedForm,
              "expression is not a polynomial, 1/polynomial, conj(polynomial), moebius or "
              "essential field");
}

}  // namespace holo
