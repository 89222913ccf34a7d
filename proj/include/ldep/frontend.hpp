#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldep/lde.hpp"
#include "ldep/nested.hpp"

namespace ldep {

namespace detail {

enum class Tok { Ident, Int, Punct, PlusPlus, Filler, End };

struct Token {
  Tok kind;
  std::string text;
  int64_t value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::End, "", 0, line_, col_};
      return;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
      std::string text(src_.substr(start, pos_ - start));
      int64_t v = 0;
      for (char d : text) v = checked_add(checked_mul(v, 10), d - '0');
      tok_ = {Tok::Int, std::move(text), v, tok_.line, tok_.col};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        bump();
      tok_ = {Tok::Ident, std::string(src_.substr(start, pos_ - start)), 0, tok_.line, tok_.col};
      return;
    }
    if (c == '.') {
      size_t start = pos_;
      while (pos_ < src_.size() && src_[pos_] == '.') bump();
      tok_ = {Tok::Filler, std::string(src_.substr(start, pos_ - start)), 0, tok_.line, tok_.col};
      return;
    }
    if (c == '+' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '+') {
      bump();
      bump();
      tok_ = {Tok::PlusPlus, "++", 0, tok_.line, tok_.col};
      return;
    }
    static constexpr std::string_view punct = "(){}[];:=<>*+-,/%&|!";
    if (punct.find(c) != std::string_view::npos) {
      bump();
      tok_ = {Tok::Punct, std::string(1, c), 0, tok_.line, tok_.col};
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

}  // namespace detail

/// Parses the textual LDE form "a*x + b*y = c" (spaces and '*' optional,
/// implicit unit coefficients allowed).
inline Lde parse_lde_text(std::string_view text) {
  detail::Lexer lex(text);
  auto expect_punct = [&](char c) {
    auto t = lex.next();
    if (t.kind != detail::Tok::Punct || t.text[0] != c)
      throw SyntaxError(std::string("expected '") + c + "' in LDE", t.line, t.col);
  };
  auto parse_term = [&](char var) -> int64_t {
    int64_t sign = 1;
    while (lex.peek().kind == detail::Tok::Punct &&
           (lex.peek().text == "+" || lex.peek().text == "-")) {
      if (lex.next().text == "-") sign = checked_neg(sign);
    }
    int64_t coeff = 1;
    if (lex.peek().kind == detail::Tok::Int) {
      coeff = lex.next().value;
      if (lex.peek().kind == detail::Tok::Punct && lex.peek().text == "*") lex.next();
    }
    auto t = lex.next();
    if (t.kind != detail::Tok::Ident || t.text != std::string(1, var))
      throw SyntaxError(std::string("expected variable '") + var + "'", t.line, t.col);
    return checked_mul(sign, coeff);
  };
  int64_t a = parse_term('x');
  int64_t b = parse_term('y');
  expect_punct('=');
  int64_t sign = 1;
  while (lex.peek().kind == detail::Tok::Punct &&
         (lex.peek().text == "+" || lex.peek().text == "-")) {
    if (lex.next().text == "-") sign = checked_neg(sign);
  }
  auto t = lex.next();
  if (t.kind != detail::Tok::Int)
    throw SyntaxError("expected integer constant", t.line, t.col);
  int64_t c = checked_mul(sign, t.value);
  auto end = lex.next();
  if (end.kind != detail::Tok::End)
    throw SyntaxError("trailing input after LDE", end.line, end.col);
  return Lde(a, b, c);
}

/// Parses the textual range form "lo:hi".
inline IterRange parse_range_text(std::string_view text) {
  detail::Lexer lex(text);
  auto parse_int = [&]() -> int64_t {
    int64_t sign = 1;
    if (lex.peek().kind == detail::Tok::Punct && lex.peek().text == "-") {
      lex.next();
      sign = -1;
    }
    auto t = lex.next();
    if (t.kind != detail::Tok::Int)
      throw SyntaxError("expected integer in range", t.line, t.col);
    return checked_mul(sign, t.value);
  };
  int64_t lo = parse_int();
  auto colon = lex.next();
  if (colon.kind != detail::Tok::Punct || colon.text != ":")
    throw SyntaxError("expected ':' in range", colon.line, colon.col);
  int64_t hi = parse_int();
  auto end = lex.next();
  if (end.kind != detail::Tok::End)
    throw SyntaxError("trailing input after range", end.line, end.col);
  if (lo > hi) throw SyntaxError("range lo exceeds hi", 1, 1);
  return IterRange(lo, hi);
}

namespace detail {

class LoopParser {
public:
  explicit LoopParser(std::string_view src) : lex_(src) {}

  LoopNest parse() {
    parse_for_headers();
    parse_body();
    auto t = lex_.next();
    if (t.kind != Tok::End) throw SyntaxError("trailing input after loop", t.line, t.col);
    return std::move(nest_);
  }

private:
  [[noreturn]] void unsupported(const std::string& what, const Token& t) {
    throw UnsupportedFeatureError(what, t.line, t.col);
  }

  Token expect_punct(char c, const char* where) {
    auto t = lex_.next();
    if (t.kind != Tok::Punct || t.text[0] != c)
      throw SyntaxError(std::string("expected '") + c + "' in " + where, t.line, t.col);
    return t;
  }

  Token expect_ident(const char* where) {
    auto t = lex_.next();
    if (t.kind != Tok::Ident)
      throw SyntaxError(std::string("expected identifier in ") + where, t.line, t.col);
    return t;
  }

  int64_t expect_int_literal(const char* where) {
    bool neg = false;
    while (lex_.peek().kind == Tok::Punct &&
           (lex_.peek().text == "-" || lex_.peek().text == "+")) {
      if (lex_.next().text == "-") neg = !neg;
    }
    auto t = lex_.next();
    if (t.kind == Tok::Ident)
      unsupported("symbolic bound '" + t.text + "' (integer literal required)", t);
    if (t.kind != Tok::Int)
      throw SyntaxError(std::string("expected integer literal in ") + where, t.line, t.col);
    return neg ? checked_neg(t.value) : t.value;
  }

  void parse_for_headers() {
    for (;;) {
      auto t = lex_.peek();
      if (t.kind == Tok::Punct && t.text == "{") {
        lex_.next();
        ++open_braces_;
        continue;
      }
      if (t.kind != Tok::Ident || t.text != "for") break;
      lex_.next();
      expect_punct('(', "for header");
      Token var = expect_ident("for header");
      expect_punct('=', "for header");
      int64_t lo = expect_int_literal("for header");
      expect_punct(';', "for header");
      Token var2 = expect_ident("for header");
      if (var2.text != var.text)
        throw SyntaxError("loop condition tests a different variable", var2.line, var2.col);
      auto cmp = lex_.next();
      if (cmp.kind != Tok::Punct || cmp.text != "<") {
        if (cmp.kind == Tok::Punct && (cmp.text == ">" || cmp.text == "="))
          unsupported("only '<' loop conditions are supported", cmp);
        throw SyntaxError("expected '<' in for header", cmp.line, cmp.col);
      }
      int64_t ub = expect_int_literal("for header");
      expect_punct(';', "for header");
      parse_step(var.text);
      expect_punct(')', "for header");
      if (lo > ub - 1)
        throw SyntaxError("empty loop range", var.line, var.col);
      if (var_index_.count(var.text))
        throw SyntaxError("duplicate loop variable '" + var.text + "'", var.line, var.col);
      var_index_[var.text] = static_cast<int>(nest_.loops.size());
      nest_.loops.push_back(Loop{var.text, IterRange(lo, ub - 1)});
    }
    if (nest_.loops.empty()) {
      auto t = lex_.peek();
      throw SyntaxError("expected 'for'", t.line, t.col);
    }
  }

  void parse_step(const std::string& var) {
    auto t = lex_.next();
    if (t.kind == Tok::PlusPlus) {  // ++i
      auto v = expect_ident("for step");
      if (v.text != var) throw SyntaxError("step increments a different variable", v.line, v.col);
      return;
    }
    if (t.kind == Tok::Ident && t.text == var) {  // i++ or something else
      auto op = lex_.next();
      if (op.kind == Tok::PlusPlus) return;
      unsupported("only unit step 'i++' is supported", op);
    }
    throw SyntaxError("expected loop step", t.line, t.col);
  }

  void parse_body() {
    // Statements up to the closing braces of the nest.
    for (;;) {
      auto t = lex_.peek();
      if (t.kind == Tok::End) break;
      if (t.kind == Tok::Punct && t.text == "}") {
        if (open_braces_ == 0)
          throw SyntaxError("unmatched '}'", t.line, t.col);
        lex_.next();
        --open_braces_;
        continue;
      }
      if (t.kind == Tok::Ident && t.text == "for")
        unsupported("statements and loops mixed at one level (imperfect nest)", t);
      if (t.kind == Tok::Ident && (t.text == "if" || t.text == "while" || t.text == "else" ||
                                   t.text == "switch" || t.text == "do"))
        unsupported("conditional or nested control flow in loop body", t);
      parse_statement();
    }
    if (open_braces_ != 0) {
      auto t = lex_.peek();
      throw SyntaxError("missing '}'", t.line, t.col);
    }
  }

  void parse_statement() {
    bool seen_assign = false;
    bool any_access = false;
    std::vector<ArrayAccess> accesses;
    // optional label
    {
      auto t = lex_.peek();
      if (t.kind == Tok::Ident && t.text != "for") {
        Token first = lex_.next();
        if (lex_.peek().kind == Tok::Punct && lex_.peek().text == ":") {
          lex_.next();  // drop the label
        } else {
          handle_ident(first, !seen_assign, accesses, any_access);
        }
      }
    }
    for (;;) {
      auto t = lex_.peek();
      if (t.kind == Tok::End) throw SyntaxError("unterminated statement", t.line, t.col);
      if (t.kind == Tok::Punct && t.text == ";") {
        lex_.next();
        break;
      }
      if (t.kind == Tok::Punct && t.text == "}")
        throw SyntaxError("unterminated statement", t.line, t.col);
      if (t.kind == Tok::Punct && t.text == "=") {
        lex_.next();
        if (seen_assign) unsupported("chained assignment", t);
        seen_assign = true;
        continue;
      }
      if (t.kind == Tok::Ident) {
        if (t.text == "if" || t.text == "while" || t.text == "for")
          unsupported("control flow inside statement", t);
        handle_ident(lex_.next(), !seen_assign, accesses, any_access);
        continue;
      }
      lex_.next();  // filler, numbers, arithmetic between accesses
    }
    if (!seen_assign) {
      auto t = lex_.peek();
      throw SyntaxError("statement without '='", t.line, t.col);
    }
    if (any_access) {
      for (auto& a : accesses) {
        a.stmt = stmt_count_;
        nest_.accesses.push_back(std::move(a));
      }
      ++stmt_count_;
    }
  }

  void handle_ident(const Token& name, bool lhs, std::vector<ArrayAccess>& accesses,
                    bool& any_access) {
    if (lex_.peek().kind != Tok::Punct || lex_.peek().text != "[") return;  // scalar
    std::vector<AffineExpr> subs;
    while (lex_.peek().kind == Tok::Punct && lex_.peek().text == "[") {
      lex_.next();
      subs.push_back(parse_affine());
      expect_punct(']', "subscript");
    }
    int array = intern_array(name, static_cast<int>(subs.size()));
    accesses.push_back(ArrayAccess{array, lhs, 0, std::move(subs)});
    any_access = true;
  }

  AffineExpr parse_affine() {
    AffineExpr expr;
    bool first = true;
    for (;;) {
      auto t = lex_.peek();
      int64_t sign = 1;
      if (t.kind == Tok::Punct && (t.text == "+" || t.text == "-")) {
        if (lex_.next().text == "-") sign = -1;
      } else if (!first) {
        break;  // no operator: subscript ends at ']'
      }
      first = false;
      auto term = lex_.next();
      if (term.kind == Tok::Int) {
        int64_t coeff = checked_mul(sign, term.value);
        // optional '*' var or adjacent var ("2i")
        if (lex_.peek().kind == Tok::Punct && lex_.peek().text == "*") {
          lex_.next();
          auto v = lex_.next();
          if (v.kind != Tok::Ident)
            unsupported("non-affine subscript expression", v);
          add_term(expr, coeff, v);
        } else if (lex_.peek().kind == Tok::Ident) {
          add_term(expr, coeff, lex_.next());
        } else {
          expr.constant = checked_add(expr.constant, coeff);
        }
      } else if (term.kind == Tok::Ident) {
        if (lex_.peek().kind == Tok::Punct && lex_.peek().text == "*") {
          auto star = lex_.next();
          auto rhs = lex_.next();
          if (rhs.kind != Tok::Int) unsupported("non-affine subscript expression", star);
          add_term(expr, checked_mul(sign, rhs.value), term);
        } else {
          add_term(expr, sign, term);
        }
      } else {
        throw SyntaxError("malformed subscript expression", term.line, term.col);
      }
      auto nxt = lex_.peek();
      if (nxt.kind == Tok::Punct && (nxt.text == "/" || nxt.text == "%"))
        unsupported("non-affine subscript expression", nxt);
      if (nxt.kind == Tok::Punct && nxt.text == "]") break;
    }
    return expr;
  }

  void add_term(AffineExpr& expr, int64_t coeff, const Token& var) {
    auto it = var_index_.find(var.text);
    if (it == var_index_.end())
      unsupported("symbolic subscript '" + var.text + "' (not a loop variable)", var);
    for (auto& t : expr.terms) {
      if (t.var == it->second) {
        t.coeff = checked_add(t.coeff, coeff);
        return;
      }
    }
    expr.terms.push_back({coeff, it->second});
  }

  int intern_array(const Token& name, int dims) {
    auto it = array_index_.find(name.text);
    if (it != array_index_.end()) {
      if (nest_.arrays[static_cast<size_t>(it->second)].dims != dims)
        throw SyntaxError("array '" + name.text + "' used with inconsistent dimensionality",
                          name.line, name.col);
      return it->second;
    }
    int id = static_cast<int>(nest_.arrays.size());
    array_index_[name.text] = id;
    nest_.arrays.push_back(ArrayDecl{name.text, dims});
    return id;
  }

  Lexer lex_;
  LoopNest nest_;
  std::map<std::string, int> var_index_;
  std::map<std::string, int> array_index_;
  int stmt_count_ = 0;
  int open_braces_ = 0;
};

}  // namespace detail

/// Parses the loop-source notation into a LoopNest. Upper bounds are strict
/// ('i < 8' covers [lo, 7]); steps must be unit.
inline LoopNest parse_loop(std::string_view source) {
  return detail::LoopParser(source).parse();
}

namespace detail {

inline std::string affine_text(const AffineExpr& e, const LoopNest& nest) {
  std::string s;
  for (const auto& t : e.terms) {
    int64_t coeff = t.coeff;
    if (!s.empty()) {
      s += coeff < 0 ? " - " : " + ";
      coeff = checked_abs(coeff);
    } else if (coeff == -1) {
      s += "-";
      coeff = 1;
    }
    if (checked_abs(coeff) != 1) s += std::to_string(coeff) + "*";
    s += nest.loops[static_cast<size_t>(t.var)].var;
  }
  if (e.constant != 0 || e.terms.empty()) {
    if (s.empty())
      s = std::to_string(e.constant);
    else
      s += (e.constant < 0 ? " - " : " + ") + std::to_string(checked_abs(e.constant));
  }
  return s;
}

inline std::string access_text(const ArrayAccess& a, const LoopNest& nest) {
  std::string s = nest.arrays[static_cast<size_t>(a.array)].name;
  for (const auto& e : a.subscripts) s += "[" + affine_text(e, nest) + "]";
  return s;
}

}  // namespace detail

/// Canonical source form; parse(print_loop(nest)) reproduces the nest.
inline std::string print_loop(const LoopNest& nest) {
  std::string out;
  for (const Loop& l : nest.loops) {
    out += "for(" + l.var + " = " + std::to_string(l.range.lo) + " ; " + l.var + " < " +
           std::to_string(l.range.hi + 1) + " ; " + l.var + "++) {\n";
  }
  int max_stmt = -1;
  for (const auto& a : nest.accesses) max_stmt = std::max(max_stmt, a.stmt);
  for (int s = 0; s <= max_stmt; ++s) {
    std::string lhs, rhs;
    for (const auto& a : nest.accesses) {
      if (a.stmt != s) continue;
      std::string text = detail::access_text(a, nest);
      if (a.is_write) {
        lhs = std::move(text);
      } else {
        if (!rhs.empty()) rhs += " + ";
        rhs += text;
      }
    }
    if (lhs.empty()) lhs = "t" + std::to_string(s);
    if (rhs.empty()) rhs = "t" + std::to_string(s);
    out += "  " + lhs + " = " + rhs + ";\n";
  }
  for (size_t i = 0; i < nest.loops.size(); ++i) out += "}\n";
  return out;
}

/// One LDE extracted from an access pair of a single loop.
struct ExtractedLde {
  Lde lde;
  int write_access;  // index into nest.accesses; always a write
  int other_access;
  bool write_write;
};

/// Access pairs that do not form a two-variable LDE, with the reason.
struct SkippedPair {
  int access1;
  int access2;
  std::string reason;
};

struct LdeExtraction {
  std::vector<ExtractedLde> ldes;
  std::vector<SkippedPair> skipped;
};

/// LDE per (write, read-or-write) access pair of a single loop over 1-D
/// arrays. Read-read pairs never create dependence and are not emitted.
inline LdeExtraction extract_ldes(const LoopNest& nest) {
  if (nest.loops.size() != 1)
    throw Error("frontend/not_single_loop", "extract_ldes requires a single non-nested loop");
  LdeExtraction out;
  for (size_t ai = 0; ai < nest.arrays.size(); ++ai) {
    if (!nest.array_written(static_cast<int>(ai))) continue;
    if (nest.arrays[ai].dims != 1)
      throw Error("frontend/not_single_loop",
                  "array '" + nest.arrays[ai].name + "' is multi-dimensional; use nest analysis");
    std::vector<int> idx;
    for (size_t i = 0; i < nest.accesses.size(); ++i)
      if (nest.accesses[i].array == static_cast<int>(ai)) idx.push_back(static_cast<int>(i));
    for (size_t i = 0; i < idx.size(); ++i) {
      for (size_t j = i + 1; j < idx.size(); ++j) {
        const ArrayAccess& a1 = nest.accesses[static_cast<size_t>(idx[i])];
        const ArrayAccess& a2 = nest.accesses[static_cast<size_t>(idx[j])];
        if (!a1.is_write && !a2.is_write) continue;
        const bool first_writes = a1.is_write;
        const ArrayAccess& w = first_writes ? a1 : a2;
        const ArrayAccess& o = first_writes ? a2 : a1;
        const AffineExpr& we = w.subscripts[0];
        const AffineExpr& oe = o.subscripts[0];
        int wi = first_writes ? idx[i] : idx[j];
        int oi = first_writes ? idx[j] : idx[i];
        if (we.is_constant() || oe.is_constant()) {
          std::string reason =
              we.is_constant() && oe.is_constant()
                  ? (we.constant == oe.constant ? "constant subscripts always alias"
                                                : "constant subscripts never alias")
                  : "constant-vs-variable subscript; not a two-variable dependence";
          out.skipped.push_back(SkippedPair{wi, oi, std::move(reason)});
          continue;
        }
        out.ldes.push_back(ExtractedLde{
            build_lde(we.terms[0].coeff, we.constant, oe.terms[0].coeff, oe.constant), wi, oi,
            a1.is_write && a2.is_write});
      }
    }
  }
  return out;
}

}  // namespace ldep
