// Recursive-descent parser for the guard grammar:
//
//   guard   := orExpr
//   orExpr  := andExpr { "or" andExpr }
//   andExpr := unary { "and" unary }
//   unary   := "not" unary | "(" guard ")" | atom
//   atom    := "true" | "false" | ident relop literal
//   relop   := "=" | "!=" | "<" | "<=" | ">" | ">="
//   literal := integer | enumLiteral

#include <cctype>
#include <charconv>

#include "sct/error.hpp"
#include "sct/guard.hpp"

namespace sct {

namespace {

enum class Tok { ident, integer, relop, lparen, rparen, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      out.push_back({Tok::ident, s.substr(i, j - i), i});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < s.size() &&
                std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::integer, s.substr(i, j - i), i});
      i = j;
    } else if (c == '(') {
      out.push_back({Tok::lparen, "(", i++});
    } else if (c == ')') {
      out.push_back({Tok::rparen, ")", i++});
    } else if (c == '=') {
      out.push_back({Tok::relop, "=", i++});
    } else if (c == '!' && i + 1 < s.size() && s[i + 1] == '=') {
      out.push_back({Tok::relop, "!=", i});
      i += 2;
    } else if (c == '<' || c == '>') {
      if (i + 1 < s.size() && s[i + 1] == '=') {
        out.push_back({Tok::relop, std::string{c, '='}, i});
        i += 2;
      } else {
        out.push_back({Tok::relop, std::string{c}, i++});
      }
    } else {
      throw GuardSyntaxError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

RelOp relop_of(const std::string& t) {
  if (t == "=") return RelOp::eq;
  if (t == "!=") return RelOp::ne;
  if (t == "<") return RelOp::lt;
  if (t == "<=") return RelOp::le;
  if (t == ">") return RelOp::gt;
  return RelOp::ge;
}

bool is_keyword(const Token& t, const char* kw) {
  return t.kind == Tok::ident && lower(t.text) == kw;
}

class Parser {
 public:
  Parser(const std::string& text, const DeclSet& decls)
      : toks_(tokenize(text)), decls_(decls) {}

  Guard parse() {
    auto g = or_expr();
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
    return g;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    if (peek().kind == Tok::end) throw GuardSyntaxError("unexpected end of input", peek().pos);
    throw GuardSyntaxError(msg, peek().pos);
  }

  Guard or_expr() {
    auto g = and_expr();
    while (is_keyword(peek(), "or")) {
      next();
      g = make_or(g, and_expr());
    }
    return g;
  }

  Guard and_expr() {
    auto g = unary();
    while (is_keyword(peek(), "and")) {
      next();
      g = make_and(g, unary());
    }
    return g;
  }

  Guard unary() {
    if (is_keyword(peek(), "not")) {
      next();
      return make_not(unary());
    }
    if (peek().kind == Tok::lparen) {
      next();
      auto g = or_expr();
      if (peek().kind != Tok::rparen) fail("expected ')'");
      next();
      return g;
    }
    return atom();
  }

  Guard atom() {
    if (is_keyword(peek(), "true")) {
      next();
      return make_const(true);
    }
    if (is_keyword(peek(), "false")) {
      next();
      return make_const(false);
    }
    if (peek().kind != Tok::ident || is_keyword(peek(), "and") ||
        is_keyword(peek(), "or"))
      fail("expected comparison");
    const Token var = next();
    if (peek().kind != Tok::relop) fail("expected relational operator");
    const RelOp op = relop_of(next().text);
    if (peek().kind != Tok::ident && peek().kind != Tok::integer)
      fail("expected literal");
    const Token lit = next();

    const VarDecl* d = find_decl(decls_, var.text);
    if (!d) throw UndeclaredVariable(var.text);
    if (d->sort.is_enum()) {
      if (op != RelOp::eq && op != RelOp::ne)
        throw SortMismatch("ordering comparison on enumeration variable '" +
                           var.text + "'");
      if (!value_in_sort(Value{lit.text}, d->sort))
        throw SortMismatch("'" + lit.text + "' is not a literal of the sort of '" +
                           var.text + "'");
      return make_cmp(var.text, op, lit.text);
    }
    if (lit.kind != Tok::integer)
      throw SortMismatch("integer variable '" + var.text +
                         "' compared with literal '" + lit.text + "'");
    std::int64_t n = 0;
    auto [p, ec] = std::from_chars(lit.text.data(), lit.text.data() + lit.text.size(), n);
    if (ec != std::errc{}) throw GuardSyntaxError("integer out of range", lit.pos);
    return make_cmp(var.text, op, n);
  }

  std::vector<Token> toks_;
  const DeclSet& decls_;
  std::size_t pos_ = 0;
};

}  // namespace

Guard parse_guard(const std::string& text, const DeclSet& decls) {
  return Parser(text, decls).parse();
}

}  // namespace sct
