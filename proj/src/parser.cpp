#include "stlcbf/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include "stlcbf/errors.hpp"

namespace stlcbf {

namespace {

struct Token {
  enum class Type { Ident, Number, Punct, End };
  Type type = Type::End;
  std::string text;
  double number = 0.0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.type = Token::Type::End;
      tok_.text = "<end of input>";
      return;
    }
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        take();
      tok_.type = Token::Type::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        ((c == '+' || c == '-') && pos_ + 1 < src_.size() &&
         (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) ||
          src_[pos_ + 1] == '.'))) {
      size_t start = pos_;
      if (c == '+' || c == '-') take();
      while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '.'))
        take();
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        take();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) take();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          take();
      }
      tok_.text = src_.substr(start, pos_ - start);
      double value = 0.0;
      auto res = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), value);
      if (res.ec == std::errc::result_out_of_range) {
        // overflows read as +-inf so interval checks can name them unbounded
        value = tok_.text[0] == '-' ? -HUGE_VAL : HUGE_VAL;
      } else if (res.ec != std::errc{} ||
                 res.ptr != tok_.text.data() + tok_.text.size()) {
        throw ParseError("malformed number '" + tok_.text + "'", tok_.line, tok_.col);
      }
      tok_.type = Token::Type::Number;
      tok_.number = value;
      return;
    }
    if (c == '&' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '&') {
      take();
      take();
      tok_.type = Token::Type::Punct;
      tok_.text = "&&";
      return;
    }
    take();
    tok_.type = Token::Type::Punct;
    tok_.text = std::string(1, c);
  }

  void take() {
    ++pos_;
    ++col_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Formula parse() {
    Formula f = parse_conj();
    const Token& t = lex_.peek();
    if (t.type != Token::Type::End)
      throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.col);
    return f;
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& msg) {
    throw ParseError(msg + " (got '" + t.text + "')", t.line, t.col);
  }

  bool is_punct(const std::string& s) const {
    return lex_.peek().type == Token::Type::Punct && lex_.peek().text == s;
  }

  bool is_ident(const std::string& s) const {
    return lex_.peek().type == Token::Type::Ident && lex_.peek().text == s;
  }

  void expect_punct(const std::string& s) {
    if (!is_punct(s)) fail(lex_.peek(), "expected '" + s + "'");
    lex_.next();
  }

  double expect_number() {
    if (lex_.peek().type != Token::Type::Number) fail(lex_.peek(), "expected a number");
    return lex_.next().number;
  }

  std::string expect_ident() {
    if (lex_.peek().type != Token::Type::Ident) fail(lex_.peek(), "expected an identifier");
    return lex_.next().text;
  }

  Formula parse_conj() {
    Formula f = parse_unary();
    while (is_punct("&&")) {
      lex_.next();
      Formula rhs = parse_unary();
      f = Formula::conj(std::move(f), std::move(rhs));  // may throw FragmentError
    }
    return f;
  }

  Formula parse_unary() {
    const Token& t = lex_.peek();
    if (t.type == Token::Type::Ident) {
      if (t.text == "true") {
        lex_.next();
        return Formula::boolean_true();
      }
      if (t.text == "F" || t.text == "G") return parse_fg();
      if (t.text == "ball" || t.text == "clear" || t.text == "half")
        return Formula::pred(parse_pred());
      if (t.text == "U")
        throw FragmentError("until operator requires a parenthesized left operand");
      fail(t, "expected a formula");
    }
    if (is_punct("!")) {
      Token bang = lex_.next();
      const Token& after = lex_.peek();
      if (after.type == Token::Type::Ident && (after.text == "F" || after.text == "G"))
        throw FragmentError("negation of temporal operator " + after.text +
                            " is outside the fragment; negation applies only to predicates");
      if (is_punct("("))
        throw FragmentError(
            "negation of a parenthesized formula is outside the fragment; "
            "negation applies only to predicates");
      if (after.type != Token::Type::Ident ||
          (after.text != "ball" && after.text != "clear" && after.text != "half"))
        fail(bang, "expected a predicate after '!'");
      return Formula::not_pred(parse_pred());
    }
    if (is_punct("(")) {
      lex_.next();
      Formula inner = parse_conj();
      expect_punct(")");
      if (is_ident("U")) {
        Token u = lex_.next();
        if (!inner.is_psi())
          throw FragmentError("left operand of U contains a temporal operator");
        Interval iv = parse_interval(u);
        expect_punct("(");
        Formula rhs = parse_conj();
        expect_punct(")");
        if (!rhs.is_psi())
          throw FragmentError("right operand of U contains a temporal operator");
        return Formula::until(iv, std::move(inner), std::move(rhs));
      }
      return inner;
    }
    fail(t, "expected a formula");
  }

  Formula parse_fg() {
    Token op = lex_.next();  // F or G
    Interval iv = parse_interval(op);
    expect_punct("(");
    Formula body = parse_conj();
    expect_punct(")");
    if (!body.is_psi())
      throw FragmentError("nested temporal operator inside " + op.text +
                          "[...] is outside the fragment");
    return op.text == "F" ? Formula::eventually(iv, std::move(body))
                          : Formula::always(iv, std::move(body));
  }

  Interval parse_interval(const Token& op) {
    expect_punct("[");
    double a = expect_number();
    expect_punct(",");
    double b = expect_number();
    expect_punct("]");
    if (!std::isfinite(a) || !std::isfinite(b))
      throw ParseError("unbounded interval on " + op.text, op.line, op.col);
    if (a < 0.0 || a > b)
      throw ParseError("invalid interval [" + format_number(a) + "," + format_number(b) +
                           "]: need 0 <= a <= b",
                       op.line, op.col);
    return Interval(a, b);
  }

  Predicate parse_pred() {
    Token name = lex_.next();
    expect_punct("(");
    if (name.text == "ball") {
      Eigen::Vector2d c = parse_vec2();
      expect_punct(",");
      double eps = expect_number();
      expect_punct(")");
      if (!(eps > 0.0))
        throw ParseError("ball tolerance must be positive", name.line, name.col);
      return Predicate::ball(c, eps);
    }
    if (name.text == "clear") {
      std::string id = expect_ident();
      expect_punct(",");
      double d = expect_number();
      expect_punct(")");
      if (!(d > 0.0))
        throw ParseError("clearance distance must be positive", name.line, name.col);
      return Predicate::clearance(std::move(id), d);
    }
    // half
    Eigen::Vector2d n = parse_vec2();
    expect_punct(",");
    double off = expect_number();
    expect_punct(")");
    if (std::abs(n.norm() - 1.0) > 1e-9)
      throw ParseError("halfspace normal must be a unit vector", name.line, name.col);
    return Predicate::halfspace(n, off);
  }

  Eigen::Vector2d parse_vec2() {
    const Token& open = lex_.peek();
    expect_punct("[");
    std::vector<double> vals;
    vals.push_back(expect_number());
    while (is_punct(",")) {
      lex_.next();
      vals.push_back(expect_number());
    }
    expect_punct("]");
    if (vals.size() != 2)
      throw ParseError("expected a 2-d vector, got " + std::to_string(vals.size()) +
                           " components",
                       open.line, open.col);
    return Eigen::Vector2d(vals[0], vals[1]);
  }

  Lexer lex_;
};

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).parse(); }

}  // namespace stlcbf
