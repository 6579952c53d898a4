#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>

#include "einsteinprobe/expr.hpp"

namespace ep {

namespace {

struct Token {
  enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Type type;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_.pos = pos_;
    if (pos_ >= text_.size()) {
      current_.type = Token::Type::End;
      current_.text = "<end of input>";
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '+': single(Token::Type::Plus); return;
      case '-': single(Token::Type::Minus); return;
      case '*': single(Token::Type::Star); return;
      case '/': single(Token::Type::Slash); return;
      case '^': single(Token::Type::Caret); return;
      case '(': single(Token::Type::LParen); return;
      case ')': single(Token::Type::RParen); return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      current_.type = Token::Type::Ident;
      current_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  void single(Token::Type t) {
    current_.type = t;
    current_.text = std::string(1, text_[pos_]);
    ++pos_;
  }

  void lex_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // "2e" is the number 2 followed by ident "e"
      }
    }
    std::string s(text_.substr(start, pos_ - start));
    if (s == ".") throw ParseError("malformed number", start);
    current_.type = Token::Type::Number;
    current_.text = s;
    current_.number = std::strtod(s.c_str(), nullptr);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

std::optional<UnaryOp> function_by_name(const std::string& name) {
  static const std::pair<const char*, UnaryOp> table[] = {
      {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},   {"tan", UnaryOp::Tan},
      {"sinh", UnaryOp::Sinh}, {"cosh", UnaryOp::Cosh}, {"tanh", UnaryOp::Tanh},
      {"exp", UnaryOp::Exp},   {"log", UnaryOp::Log},   {"sqrt", UnaryOp::Sqrt},
  };
  for (const auto& [n, op] : table)
    if (name == n) return op;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, const NameScope& names) : lex_(text), names_(names) {}

  Expr parse() {
    Expr e = expr();
    const Token& t = lex_.peek();
    if (t.type != Token::Type::End)
      throw ParseError("unexpected token '" + t.text + "'", t.pos);
    return e;
  }

 private:
  Expr expr() {
    Expr e = term();
    while (true) {
      const Token& t = lex_.peek();
      if (t.type == Token::Type::Plus) {
        lex_.take();
        e = Expr::binary(BinaryOp::Add, e, term());
      } else if (t.type == Token::Type::Minus) {
        lex_.take();
        e = Expr::binary(BinaryOp::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = factor();
    while (true) {
      const Token& t = lex_.peek();
      if (t.type == Token::Type::Star) {
        lex_.take();
        e = Expr::binary(BinaryOp::Mul, e, factor());
      } else if (t.type == Token::Type::Slash) {
        lex_.take();
        e = Expr::binary(BinaryOp::Div, e, factor());
      } else {
        return e;
      }
    }
  }

  Expr factor() {
    Expr e = base();
    if (lex_.peek().type == Token::Type::Caret) {
      Token caret = lex_.take();
      Expr exponent = base();
      if (!exponent.is_constant())
        throw ParseError("exponent must be a constant", caret.pos);
      e = Expr::binary(BinaryOp::Pow, e, exponent);
    }
    return e;
  }

  Expr base() {
    Token t = lex_.take();
    switch (t.type) {
      case Token::Type::Number:
        return Expr::constant(t.number);
      case Token::Type::Minus:
        return Expr::unary(UnaryOp::Neg, base());
      case Token::Type::LParen: {
        Expr e = expr();
        expect(Token::Type::RParen, ")");
        return e;
      }
      case Token::Type::Ident:
        return resolve_ident(t);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.pos);
    }
  }

  // identifiers resolve to coordinates first, then parameters, then functions
  Expr resolve_ident(const Token& t) {
    auto cit = std::find(names_.coords.begin(), names_.coords.end(), t.text);
    if (cit != names_.coords.end())
      return Expr::coord(static_cast<int>(cit - names_.coords.begin()));
    if (std::find(names_.params.begin(), names_.params.end(), t.text) != names_.params.end())
      return Expr::param(t.text);
    if (auto op = function_by_name(t.text)) {
      expect(Token::Type::LParen, "(");
      Expr arg = expr();
      expect(Token::Type::RParen, ")");
      return Expr::unary(*op, arg);
    }
    throw ParseError("unknown identifier '" + t.text + "'", t.pos);
  }

  void expect(Token::Type type, const char* what) {
    const Token& t = lex_.peek();
    if (t.type != type)
      throw ParseError(std::string("expected '") + what + "', found '" + t.text + "'", t.pos);
    lex_.take();
  }

  Lexer lex_;
  const NameScope& names_;
};

}  // namespace

Expr parse_expression(std::string_view text, const NameScope& names) {
  return Parser(text, names).parse();
}

}  // namespace ep
