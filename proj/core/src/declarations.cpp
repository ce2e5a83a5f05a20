#include "dragen/declarations.hpp"

#include <cctype>
#include <cstddef>
#include <string>
#include <utility>

#include "dragen/error.hpp"

namespace dragen {

std::string_view to_string(GroundKind kind) {
  switch (kind) {
    case GroundKind::Int: return "Int";
    case GroundKind::Double: return "Double";
    case GroundKind::Char: return "Char";
    case GroundKind::Unit: return "Unit";
  }
  return "Unit";
}

std::optional<GroundKind> ground_kind_from_name(std::string_view name) {
  if (name == "Int") return GroundKind::Int;
  if (name == "Double") return GroundKind::Double;
  if (name == "Char") return GroundKind::Char;
  if (name == "Unit") return GroundKind::Unit;
  return std::nullopt;
}

namespace {

enum class TokenKind { Data, Upper, Lower, Equals, Bar, LParen, RParen, End };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::string_view describe(TokenKind kind) {
  switch (kind) {
    case TokenKind::Data: return "'data'";
    case TokenKind::Upper: return "type or constructor name";
    case TokenKind::Lower: return "type variable";
    case TokenKind::Equals: return "'='";
    case TokenKind::Bar: return "'|'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::End: return "end of input";
  }
  return "token";
}

// Bytes >= 0x80 are accepted inside identifiers so primes such as "Tree″"
// survive.
bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_trivia();
    if (pos_ >= src_.size()) return {TokenKind::End, "", line_, column_};
    const std::size_t line = line_;
    const std::size_t column = column_;
    const unsigned char c = static_cast<unsigned char>(src_[pos_]);
    switch (c) {
      case '=': advance(); return {TokenKind::Equals, "=", line, column};
      case '|': advance(); return {TokenKind::Bar, "|", line, column};
      case '(': advance(); return {TokenKind::LParen, "(", line, column};
      case ')': advance(); return {TokenKind::RParen, ")", line, column};
      default: break;
    }
    if (!std::isalpha(c) && c != '_') {
      throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'",
                       line, column);
    }
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) advance();
    std::string text(src_.substr(start, pos_ - start));
    if (text == "data") return {TokenKind::Data, std::move(text), line, column};
    const TokenKind kind = std::isupper(c) ? TokenKind::Upper : TokenKind::Lower;
    return {kind, std::move(text), line, column};
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++column_;  // count code points, not continuation bytes
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { current_ = lexer_.next(); }

  std::vector<TypeDecl> parse() {
    std::vector<TypeDecl> decls;
    while (current_.kind != TokenKind::End) {
      expect(TokenKind::Data);
      decls.push_back(parse_decl());
    }
    return decls;
  }

 private:
  TypeDecl parse_decl() {
    TypeDecl decl;
    decl.name = expect(TokenKind::Upper).text;
    while (current_.kind == TokenKind::Lower) decl.params.push_back(take().text);
    expect(TokenKind::Equals);
    decl.constructors.push_back(parse_constructor());
    while (current_.kind == TokenKind::Bar) {
      take();
      decl.constructors.push_back(parse_constructor());
    }
    if (current_.kind != TokenKind::Data && current_.kind != TokenKind::End) {
      fail("expected '|', 'data' or end of input");
    }
    return decl;
  }

  ConstructorDecl parse_constructor() {
    ConstructorDecl ctor;
    ctor.name = expect(TokenKind::Upper).text;
    while (starts_field()) ctor.fields.push_back(parse_field());
    return ctor;
  }

  bool starts_field() const {
    return current_.kind == TokenKind::Upper || current_.kind == TokenKind::Lower ||
           current_.kind == TokenKind::LParen;
  }

  TypeExpr parse_field() {
    if (current_.kind == TokenKind::Upper) return TypeExpr{take().text, false, {}};
    if (current_.kind == TokenKind::Lower) return TypeExpr{take().text, true, {}};
    expect(TokenKind::LParen);
    TypeExpr expr{expect(TokenKind::Upper).text, false, {}};
    while (starts_field()) expr.args.push_back(parse_field());
    expect(TokenKind::RParen);
    return expr;
  }

  Token take() {
    Token t = std::move(current_);
    current_ = lexer_.next();
    return t;
  }

  Token expect(TokenKind kind) {
    if (current_.kind != kind) {
      fail("expected " + std::string(describe(kind)) + ", found " +
           (current_.kind == TokenKind::End ? std::string("end of input")
                                            : "'" + current_.text + "'"));
    }
    return take();
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, current_.line, current_.column);
  }

  Lexer lexer_;
  Token current_{TokenKind::End, "", 1, 1};
};

void print_field(const TypeExpr& expr, std::string& out) {
  if (expr.args.empty()) {
    out += expr.name;
    return;
  }
  out += '(';
  out += expr.name;
  for (const TypeExpr& arg : expr.args) {
    out += ' ';
    print_field(arg, out);
  }
  out += ')';
}

}  // namespace

std::vector<TypeDecl> parse_declarations(std::string_view source) {
  return Parser(source).parse();
}

std::string print_type_expr(const TypeExpr& expr) {
  std::string out;
  print_field(expr, out);
  return out;
}

std::string print_declarations(std::span<const TypeDecl> decls) {
  std::string out;
  for (const TypeDecl& decl : decls) {
    out += "data ";
    out += decl.name;
    for (const std::string& param : decl.params) {
      out += ' ';
      out += param;
    }
    out += " =";
    for (std::size_t i = 0; i < decl.constructors.size(); ++i) {
      out += i == 0 ? " " : " | ";
      out += decl.constructors[i].name;
      for (const TypeExpr& field : decl.constructors[i].fields) {
        out += ' ';
        print_field(field, out);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace dragen
