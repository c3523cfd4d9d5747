#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

#include "jpit/circuit.hpp"
#include "jpit/errors.hpp"

namespace jpit {
namespace {

struct Token {
  enum Kind { LParen, RParen, Atom, String, End } kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip();
    Token t{Token::End, "", line_, col_};
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    if (c == '(') {
      advance();
      t.kind = Token::LParen;
    } else if (c == ')') {
      advance();
      t.kind = Token::RParen;
    } else if (c == '"') {
      advance();
      t.kind = Token::String;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        t.text += s_[pos_];
        advance();
      }
      if (pos_ >= s_.size()) throw ParseError("unterminated string", t.line, t.col);
      advance();
    } else {
      t.kind = Token::Atom;
      while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
             s_[pos_] != '(' && s_[pos_] != ')' && s_[pos_] != '"' && s_[pos_] != ';') {
        t.text += s_[pos_];
        advance();
      }
    }
    return t;
  }

  Token peek() {
    auto save = std::tuple(pos_, line_, col_);
    Token t = next();
    std::tie(pos_, line_, col_) = save;
    return t;
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {  // comment to end of line
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  throw ParseError(msg, t.line, t.col);
}

bool parse_uint(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

class Parser {
 public:
  Parser(std::string_view text, std::optional<PrimeField> field)
      : lex_(text), field_(std::move(field)) {}

  Circuit run() {
    expect(Token::LParen, "expected (vars N)");
    Token kw = lex_.next();
    if (kw.kind != Token::Atom || kw.text != "vars") fail(kw, "expected 'vars'");
    std::uint64_t n = read_uint("variable count");
    expect(Token::RParen, "expected ) after variable count");

    Token t = lex_.peek();
    if (t.kind == Token::LParen) {
      lex_.next();
      Token k2 = lex_.peek();
      if (k2.kind == Token::Atom && k2.text == "field") {
        lex_.next();
        Token pt = lex_.peek();
        std::uint64_t p = read_uint("field modulus");
        if (!is_prime(p) || p >= kMaxModulus) fail(pt, "field modulus must be a prime below 2^62");
        if (field_ && field_->modulus() != p) {
          fail(pt, "header field " + std::to_string(p) + " disagrees with requested field " +
                       std::to_string(field_->modulus()));
        }
        if (!field_) field_.emplace(p);
        expect(Token::RParen, "expected ) after field modulus");
        header_done(n);
        NodeId r = form();
        circuit_->set_root(r);
      } else {
        header_done(n);
        NodeId r = compound();
        circuit_->set_root(r);
      }
    } else {
      header_done(n);
      NodeId r = form();
      circuit_->set_root(r);
    }
    Token end = lex_.next();
    if (end.kind != Token::End) fail(end, "trailing input after circuit");
    return std::move(*circuit_);
  }

 private:
  void header_done(std::uint64_t n) {
    if (!field_) field_.emplace(select_prime(1));
    circuit_.emplace(*field_, static_cast<std::size_t>(n));
  }

  void expect(Token::Kind k, const std::string& msg) {
    Token t = lex_.next();
    if (t.kind != k) fail(t, msg);
  }

  std::uint64_t read_uint(const std::string& what) {
    Token t = lex_.next();
    std::uint64_t v;
    if (t.kind != Token::Atom || !parse_uint(t.text, v)) fail(t, "expected " + what);
    return v;
  }

  std::uint64_t read_exponent() {
    Token t = lex_.peek();
    std::uint64_t e = read_uint("exponent");
    if (e < 1) fail(t, "exponent must be at least 1");
    return e;
  }

  NodeId form() {
    Token t = lex_.next();
    if (t.kind == Token::LParen) return compound();
    if (t.kind != Token::Atom) fail(t, "expected a form");
    return atom(t);
  }

  NodeId atom(const Token& t) {
    const std::string& s = t.text;
    if (s.size() >= 2 && s[0] == 'x') {
      std::uint64_t k;
      if (!parse_uint(std::string_view(s).substr(1), k)) fail(t, "bad variable '" + s + "'");
      if (k < 1 || k > circuit_->nvars()) {
        fail(t, "variable " + s + " outside declared range 1.." +
                    std::to_string(circuit_->nvars()));
      }
      return circuit_->input(static_cast<std::size_t>(k - 1));
    }
    bool neg = !s.empty() && s[0] == '-';
    std::uint64_t v;
    if (!parse_uint(std::string_view(s).substr(neg ? 1 : 0), v)) {
      fail(t, "unexpected token '" + s + "'");
    }
    std::uint64_t r = v % field_->modulus();
    return circuit_->constant(neg ? field_->neg(r) : r);
  }

  // After '(' has been consumed.
  NodeId compound() {
    Token op = lex_.next();
    if (op.kind != Token::Atom) fail(op, "expected an operator");
    NodeId id;
    if (op.text == "+" || op.text == "*") {
      std::vector<NodeId> ch;
      while (lex_.peek().kind != Token::RParen) {
        if (lex_.peek().kind == Token::End) fail(lex_.peek(), "unexpected end of input");
        ch.push_back(form());
      }
      if (ch.empty()) fail(op, "'" + op.text + "' needs at least one operand");
      id = op.text == "+" ? circuit_->add(std::move(ch)) : circuit_->mul(std::move(ch));
    } else if (op.text == "pow") {
      NodeId base = form();
      std::uint64_t e = read_exponent();
      id = circuit_->pow(base, e);
    } else if (op.text == "pp") {
      std::vector<std::pair<NodeId, std::uint64_t>> fs;
      while (lex_.peek().kind == Token::LParen) {
        lex_.next();
        NodeId b = form();
        std::uint64_t e = read_exponent();
        expect(Token::RParen, "expected ) after power-product factor");
        fs.emplace_back(b, e);
      }
      if (fs.empty()) fail(op, "'pp' needs at least one (form E) factor");
      id = circuit_->powprod(std::move(fs));
    } else if (op.text == "leaf") {
      Token s = lex_.next();
      if (s.kind != Token::String) fail(s, "expected quoted sparse polynomial");
      try {
        id = circuit_->leaf(parse_sparse_poly(s.text, *field_, circuit_->nvars()));
      } catch (const ParseError& e) {
        // Re-anchor to the string's position in the file.
        throw ParseError(e.message(), s.line, s.col + e.column());
      }
    } else {
      fail(op, "unknown operator '" + op.text + "'");
    }
    expect(Token::RParen, "expected )");
    return id;
  }

  Lexer lex_;
  std::optional<PrimeField> field_;
  std::optional<Circuit> circuit_;
};

void write_form(std::ostream& out, const Circuit& c, NodeId id) {
  std::visit(overloaded{
                 [&](const Input& g) { out << 'x' << g.var + 1; },
                 [&](const Const& g) { out << c.field().to_signed(g.value); },
                 [&](const Add& g) {
                   out << "(+";
                   for (NodeId ch : g.children) {
                     out << ' ';
                     write_form(out, c, ch);
                   }
                   out << ')';
                 },
                 [&](const Mul& g) {
                   out << "(*";
                   for (NodeId ch : g.children) {
                     out << ' ';
                     write_form(out, c, ch);
                   }
                   out << ')';
                 },
                 [&](const PowProd& g) {
                   if (g.factors.size() == 1) {
                     out << "(pow ";
                     write_form(out, c, g.factors[0].first);
                     out << ' ' << g.factors[0].second << ')';
                     return;
                   }
                   out << "(pp";
                   for (auto& [ch, e] : g.factors) {
                     out << " (";
                     write_form(out, c, ch);
                     out << ' ' << e << ')';
                   }
                   out << ')';
                 },
                 [&](const Leaf& g) { out << "(leaf \"" << g.poly.to_string() << "\")"; },
             },
             c.node(id));
}

}  // namespace

Circuit parse_circuit(std::string_view text, const PrimeField& field) {
  return Parser(text, field).run();
}

Circuit parse_circuit(std::string_view text) {
  return Parser(text, std::nullopt).run();
}

// Shared subcircuits are written out once per use; the text format has no
// binding construct.
std::string serialize_circuit(const Circuit& c) {
  std::ostringstream out;
  out << "(vars " << c.nvars() << ")\n(field " << c.field().modulus() << ")\n";
  write_form(out, c, c.root());
  out << '\n';
  return out.str();
}

// Terms `c*x1^e1*x2^e2` joined by + or -. Factors within a term are integers
// or powers of variables; a leading integer without '*' is not accepted.
SparsePoly parse_sparse_poly(std::string_view text, const PrimeField& field,
                             std::size_t nvars) {
  std::size_t pos = 0;
  auto col = [&]() { return pos + 1; };
  auto skip = [&]() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto digits = [&](std::uint64_t& v) {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) return false;
    auto [p, ec] = std::from_chars(text.data() + start, text.data() + pos, v);
    if (ec != std::errc()) throw ParseError("integer out of range", 1, start + 1);
    return true;
  };

  std::vector<Term> terms;
  skip();
  if (pos == text.size()) throw ParseError("empty polynomial", 1, col());
  bool first = true;
  while (true) {
    skip();
    if (pos == text.size()) break;
    bool neg = false;
    if (text[pos] == '+' || text[pos] == '-') {
      neg = text[pos] == '-';
      ++pos;
      skip();
    } else if (!first) {
      throw ParseError("expected + or - between terms", 1, col());
    }
    first = false;
    std::uint64_t coeff = 1;
    std::vector<std::uint32_t> exps(nvars, 0);
    while (true) {
      skip();
      if (pos < text.size() && text[pos] == 'x') {
        std::size_t at = col();
        ++pos;
        std::uint64_t k;
        if (!digits(k)) throw ParseError("expected variable index after x", 1, at);
        if (k < 1 || k > nvars) {
          throw ParseError("variable x" + std::to_string(k) + " outside declared range 1.." +
                               std::to_string(nvars),
                           1, at);
        }
        std::uint64_t e = 1;
        skip();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          skip();
          std::size_t eat = col();
          if (!digits(e)) throw ParseError("expected exponent after ^", 1, eat);
          if (e < 1) throw ParseError("exponent must be at least 1", 1, eat);
        }
        std::uint64_t total = exps[k - 1] + e;
        if (total > UINT32_MAX) throw ParseError("exponent too large", 1, at);
        exps[k - 1] = static_cast<std::uint32_t>(total);
      } else {
        std::uint64_t v;
        std::size_t at = col();
        if (!digits(v)) throw ParseError("expected coefficient or variable", 1, at);
        coeff = field.mul(coeff, v % field.modulus());
      }
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    if (neg) coeff = field.neg(coeff);
    terms.push_back({Monomial(std::move(exps)), coeff});
  }
  return SparsePoly::from_terms(field, nvars, std::move(terms));
}

}  // namespace jpit
