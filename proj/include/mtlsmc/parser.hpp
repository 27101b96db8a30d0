#ifndef MTLSMC_PARSER_HPP
#define MTLSMC_PARSER_HPP

// Recursive-descent parser for the concrete formula syntax:
//
//   formula := disj
//   disj    := conj ("|" conj)*
//   conj    := unary ("&" unary)*
//   unary   := "!" unary | "F" ival unary | "G" ival unary
//            | primary ("U" ival unary)?
//   primary := ident | "true" | "false" | "(" disj ")"
//   ival    := ("[" | "(") num "," (num | "inf") (")" | "]")

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "mtlsmc/formula.hpp"

namespace mtlsmc {

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = disj();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input", {"'&'", "'|'", "end of input"});
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError(msg, pos_, std::move(expected));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string_view peek_ident() {
    skip_ws();
    std::size_t end = pos_;
    if (end < text_.size() && ident_start(text_[end])) {
      while (end < text_.size() && ident_char(text_[end])) ++end;
    }
    return text_.substr(pos_, end - pos_);
  }

  bool accept_keyword(std::string_view kw) {
    if (peek_ident() == kw) {
      pos_ += kw.size();
      return true;
    }
    return false;
  }

  Formula disj() {
    Formula f = conj();
    while (accept('|')) f = Formula::disj(std::move(f), conj());
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (accept('&')) f = Formula::conj(std::move(f), unary());
    return f;
  }

  Formula unary() {
    if (accept('!')) return Formula::negate(unary());
    if (accept_keyword("F")) {
      Interval w = window();
      return Formula::diamond(w, unary());
    }
    if (accept_keyword("G")) {
      Interval w = window();
      return Formula::box(w, unary());
    }
    Formula lhs = primary();
    if (accept_keyword("U")) {
      Interval w = window();
      return Formula::until(w, std::move(lhs), unary());
    }
    return lhs;
  }

  Formula primary() {
    static const std::vector<std::string> kExpected{"identifier", "'true'", "'false'", "'('", "'!'", "'F'", "'G'"};
    skip_ws();
    if (accept('(')) {
      Formula f = disj();
      if (!accept(')')) fail("unclosed parenthesis", {"')'"});
      return f;
    }
    const std::string_view id = peek_ident();
    if (id.empty()) fail(pos_ == text_.size() ? "unexpected end of input" : "unexpected character", kExpected);
    if (id == "U") fail("'U' needs a left operand", kExpected);
    if (id == "F" || id == "G") fail("temporal operator in operand position", kExpected);
    pos_ += id.size();
    if (id == "true") return Formula::top();
    if (id == "false") return Formula::bot();
    return Formula::atom(std::string(id));
  }

  double number(bool allow_inf) {
    skip_ws();
    const std::size_t start = pos_;
    if (allow_inf && peek_ident() == "inf") {
      pos_ += 3;
      return kInf;
    }
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      const bool exp_sign = (c == '+' || c == '-') && pos_ > start && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E');
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' || exp_sign) {
        ++pos_;
      } else {
        break;
      }
    }
    std::vector<std::string> expected{"number"};
    if (allow_inf) expected.emplace_back("'inf'");
    if (pos_ == start) fail("expected a window bound", expected);
    auto v = parse_number(text_.substr(start, pos_ - start));
    if (!v) {
      pos_ = start;
      fail("malformed number", expected);
    }
    return *v;
  }

  Interval window() {
    skip_ws();
    const std::size_t start = pos_;
    bool lo_closed = false;
    if (accept('[')) {
      lo_closed = true;
    } else if (!accept('(')) {
      fail("expected a time window", {"'['", "'('"});
    }
    const double lo = number(false);
    if (!accept(',')) fail("expected ','", {"','"});
    const double hi = number(true);
    bool hi_closed = false;
    if (accept(']')) {
      hi_closed = true;
    } else if (!accept(')')) {
      fail("expected window close", {"']'", "')'"});
    }
    auto w = Interval::try_make(lo, lo_closed, hi, hi_closed);
    if (!w) {
      pos_ = start;
      fail("empty or malformed time window", {"nonempty window"});
    }
    return *w;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a formula. Throws ParseError with the byte offset of the problem
/// and the set of tokens that would have been accepted there.
inline Formula parse(std::string_view text) { return detail::FormulaParser(text).parse(); }

}  // namespace mtlsmc

#endif  // MTLSMC_PARSER_HPP
