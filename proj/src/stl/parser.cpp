// Recursive-descent parser for the STL text syntax.
//
//   formula  := implies
//   implies  := or ("->" implies)?
//   or       := and ("or" and)*
//   and      := unary ("and" unary)*
//   unary    := "not" unary | ("G"|"F") interval? "(" formula ")" | primary
//   primary  := "true" | "false" | "(" formula ")" ("U" interval "(" formula ")")? | pred
//   pred     := affine ("<"|"<="|">"|">=") number
//   affine   := ["-"] term (("+"|"-") term)*
//   term     := number "*" ident | ident | number
//   interval := "[" int "," (int | "inf") "]"

#include <cctype>
#include <charconv>
#include <cmath>

#include "alstl/stl.hpp"

namespace alstl::stl {

namespace {

enum class Tok { Ident, Number, LParen, RParen, LBracket, RBracket, Comma, Plus, Minus, Star, Arrow, Lt, Le, Gt, Ge, End };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, {}, i_});
        return out;
      }
      const std::size_t start = i_;
      const char c = src_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) ++i_;
        out.push_back({Tok::Ident, src_.substr(start, i_ - start), start});
      } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i_ + 1 < src_.size() &&
                                                                  std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
        out.push_back(lex_number());
      } else {
        ++i_;
        switch (c) {
          case '(': out.push_back({Tok::LParen, src_.substr(start, 1), start}); break;
          case ')': out.push_back({Tok::RParen, src_.substr(start, 1), start}); break;
          case '[': out.push_back({Tok::LBracket, src_.substr(start, 1), start}); break;
          case ']': out.push_back({Tok::RBracket, src_.substr(start, 1), start}); break;
          case ',': out.push_back({Tok::Comma, src_.substr(start, 1), start}); break;
          case '+': out.push_back({Tok::Plus, src_.substr(start, 1), start}); break;
          case '*': out.push_back({Tok::Star, src_.substr(start, 1), start}); break;
          case '-':
            if (i_ < src_.size() && src_[i_] == '>') {
              ++i_;
              out.push_back({Tok::Arrow, src_.substr(start, 2), start});
            } else {
              out.push_back({Tok::Minus, src_.substr(start, 1), start});
            }
            break;
          case '<':
            if (i_ < src_.size() && src_[i_] == '=') {
              ++i_;
              out.push_back({Tok::Le, src_.substr(start, 2), start});
            } else {
              out.push_back({Tok::Lt, src_.substr(start, 1), start});
            }
            break;
          case '>':
            if (i_ < src_.size() && src_[i_] == '=') {
              ++i_;
              out.push_back({Tok::Ge, src_.substr(start, 2), start});
            } else {
              out.push_back({Tok::Gt, src_.substr(start, 1), start});
            }
            break;
          default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
      }
    }
  }

 private:
  void skip_space() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
  }

  Token lex_number() {
    const std::size_t start = i_;
    while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
    if (i_ < src_.size() && src_[i_] == '.') {
      ++i_;
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
    }
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
      if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
        i_ = j;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
      }
    }
    Token t{Tok::Number, src_.substr(start, i_ - start), start};
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (res.ec != std::errc{}) throw ParseError("malformed number '" + std::string(t.text) + "'", start);
    return t;
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

bool is_keyword(std::string_view s) {
  return s == "true" || s == "false" || s == "not" || s == "and" || s == "or" || s == "G" || s == "F" ||
         s == "U" || s == "inf";
}

class Parser {
 public:
  Parser(std::string_view src, const Schema& schema) : tokens_(Lexer(src).run()), schema_(schema) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_implies();
    if (peek().kind != Tok::End) fail("unexpected '" + std::string(peek().text) + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(k_ + ahead, tokens_.size() - 1)];
  }
  const Token& take() { return tokens_[k_ < tokens_.size() - 1 ? k_++ : k_]; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      fail(std::string("expected ") + what + (peek().kind == Tok::End ? " at end of input"
                                                                         : ", found '" + std::string(peek().text) + "'"));
    }
    take();
  }

  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (peek().kind == Tok::Arrow) {
      take();
      return make_implies(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (at_word("or")) {
      take();
      lhs = make_or(std::move(lhs), parse_and());
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_unary();
    while (at_word("and")) {
      take();
      lhs = make_and(std::move(lhs), parse_unary());
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    if (at_word("not")) {
      take();
      return make_not(parse_unary());
    }
    if (at_word("G") || at_word("F")) {
      const bool always = peek().text == "G";
      take();
      Interval w = peek().kind == Tok::LBracket ? parse_interval() : Interval::unbounded();
      expect(Tok::LParen, "'('");
      FormulaPtr arg = parse_implies();
      expect(Tok::RParen, "')'");
      return always ? make_always(w, std::move(arg)) : make_eventually(w, std::move(arg));
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    if (at_word("true")) {
      take();
      return make_true();
    }
    if (at_word("false")) {
      take();
      return make_false();
    }
    if (peek().kind == Tok::LParen) {
      take();
      FormulaPtr inner = parse_implies();
      expect(Tok::RParen, "')'");
      if (at_word("U")) {
        take();
        if (peek().kind != Tok::LBracket) fail("'U' requires an interval");
        Interval w = parse_interval();
        expect(Tok::LParen, "'('");
        FormulaPtr rhs = parse_implies();
        expect(Tok::RParen, "')'");
        return make_until(w, std::move(inner), std::move(rhs));
      }
      return inner;
    }
    return parse_predicate();
  }

  std::size_t parse_timestep() {
    const Token& t = peek();
    if (t.kind != Tok::Number) fail("expected integer timestep");
    if (t.number < 0 || std::floor(t.number) != t.number) fail("interval bound must be a non-negative integer");
    take();
    return static_cast<std::size_t>(t.number);
  }

  Interval parse_interval() {
    const std::size_t open = peek().pos;
    expect(Tok::LBracket, "'['");
    Interval w;
    w.lo = parse_timestep();
    expect(Tok::Comma, "','");
    if (at_word("inf")) {
      take();
    } else {
      w.hi = parse_timestep();
    }
    expect(Tok::RBracket, "']'");
    if (w.hi && *w.hi < w.lo) {
      throw ParseError("interval lower bound " + std::to_string(w.lo) + " exceeds upper bound " +
                           std::to_string(*w.hi),
                       open);
    }
    return w;
  }

  double parse_signed_number() {
    double sign = 1.0;
    if (peek().kind == Tok::Minus) {
      take();
      sign = -1.0;
    }
    if (peek().kind != Tok::Number) fail("expected number");
    return sign * take().number;
  }

  void parse_term(double sign, Predicate& p) {
    if (peek().kind == Tok::Number) {
      const double c = take().number;
      if (peek().kind == Tok::Star) {
        take();
        p.terms.push_back({sign * c, parse_channel()});
      } else {
        p.offset += sign * c;
      }
      return;
    }
    if (peek().kind == Tok::Ident) {
      p.terms.push_back({sign, parse_channel()});
      return;
    }
    fail(peek().kind == Tok::End ? "unexpected end of input" : "unexpected '" + std::string(peek().text) + "'");
  }

  std::string parse_channel() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail("expected channel name");
    if (!schema_.empty() && !find_channel(schema_, t.text)) throw UnknownChannelError(std::string(t.text));
    take();
    return std::string(t.text);
  }

  FormulaPtr parse_predicate() {
    Predicate p;
    double sign = 1.0;
    if (peek().kind == Tok::Minus) {
      take();
      sign = -1.0;
    }
    parse_term(sign, p);
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      sign = take().kind == Tok::Plus ? 1.0 : -1.0;
      parse_term(sign, p);
    }
    switch (peek().kind) {
      case Tok::Lt: p.cmp = Comparison::Less; break;
      case Tok::Le: p.cmp = Comparison::LessEqual; break;
      case Tok::Gt: p.cmp = Comparison::Greater; break;
      case Tok::Ge: p.cmp = Comparison::GreaterEqual; break;
      default: fail("expected comparison operator");
    }
    take();
    p.threshold = parse_signed_number();
    return make_pred(std::move(p));
  }

  std::vector<Token> tokens_;
  const Schema& schema_;
  std::size_t k_ = 0;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const Schema& schema) { return Parser(text, schema).parse(); }

FormulaPtr parse_formula(std::string_view text) {
  static const Schema kNoSchema;
  return Parser(text, kNoSchema).parse();
}

}  // namespace alstl::stl
