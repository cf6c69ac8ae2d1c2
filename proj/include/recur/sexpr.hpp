// S-expression data model, reader, and printer. The shared substrate for the
// Lisp interpreter, the TM->Lisp compiler, and the problem calculus.
#ifndef RECUR_SEXPR_HPP
#define RECUR_SEXPR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace recur::sexpr {

using BigUint = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Words
// ---------------------------------------------------------------------------

enum class WordKind { Symbol, Number, True, Nil };

// Characters that can never appear in a symbol: they would collide with the
// reader's token syntax and break print/read round-trips.
inline bool symbol_char_ok(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  if (std::isspace(u)) return false;
  return c != '(' && c != ')' && c != '\'' && c != '.' && c != ';';
}

class Word {
public:
  static Word symbol(std::string text) {
    if (text.empty()) throw std::invalid_argument("symbol text is empty");
    bool all_digits = true;
    for (char c : text) {
      if (!symbol_char_ok(c))
        throw std::invalid_argument("invalid character in symbol: " + text);
      if (!std::isdigit(static_cast<unsigned char>(c))) all_digits = false;
    }
    if (all_digits)
      throw std::invalid_argument("symbol text spells a number: " + text);
    if (text == "t" || text == "nil")
      throw std::invalid_argument("'" + text + "' is reserved");
    Word w;
    w.kind_ = WordKind::Symbol;
    w.text_ = std::move(text);
    return w;
  }

  static Word number(BigUint value) {
    if (value < 0) throw std::invalid_argument("negative number word");
    Word w;
    w.kind_ = WordKind::Number;
    w.value_ = std::move(value);
    return w;
  }

  static Word truth() {
    Word w;
    w.kind_ = WordKind::True;
    return w;
  }

  static Word nil() {
    Word w;
    w.kind_ = WordKind::Nil;
    return w;
  }

  // The reader's word rule: digit runs are numbers, "t" and "nil" are
  // canonicalized, everything else is a symbol. Also used when tape symbols
  // cross into the Lisp world.
  static Word from_token(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty word token");
    if (text == "t") return truth();
    if (text == "nil") return nil();
    bool all_digits = true;
    for (char c : text)
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        all_digits = false;
        break;
      }
    if (all_digits) return number(BigUint(std::string(text)));
    return symbol(std::string(text));
  }

  WordKind kind() const { return kind_; }
  bool is_symbol() const { return kind_ == WordKind::Symbol; }
  bool is_number() const { return kind_ == WordKind::Number; }
  bool is_true() const { return kind_ == WordKind::True; }
  bool is_nil() const { return kind_ == WordKind::Nil; }

  const std::string& text() const { return text_; }
  const BigUint& value() const { return value_; }

  std::string to_string() const {
    switch (kind_) {
      case WordKind::Symbol: return text_;
      case WordKind::Number: return value_.str();
      case WordKind::True: return "t";
      case WordKind::Nil: return "nil";
    }
    return {};
  }

  friend bool operator==(const Word& a, const Word& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case WordKind::Symbol: return a.text_ == b.text_;
      case WordKind::Number: return a.value_ == b.value_;
      default: return true;
    }
  }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

private:
  Word() = default;
  WordKind kind_ = WordKind::Nil;
  std::string text_;
  BigUint value_;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

class SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

// An expression is either a word or an ordered pair of expressions.
// Immutable after construction; share freely.
class SExpr {
public:
  static SExprPtr atom(Word w) {
    return std::shared_ptr<const SExpr>(new SExpr(std::move(w)));
  }
  static SExprPtr cons(SExprPtr left, SExprPtr right) {
    if (!left || !right) throw std::invalid_argument("cons of null expression");
    return std::shared_ptr<const SExpr>(
        new SExpr(std::move(left), std::move(right)));
  }

  bool is_atom() const { return std::holds_alternative<Word>(repr_); }
  bool is_pair() const { return !is_atom(); }

  const Word& word() const {
    if (!is_atom()) throw std::logic_error("word() on a pair");
    return std::get<Word>(repr_);
  }
  const SExprPtr& left() const { return pair_ref().first; }
  const SExprPtr& right() const { return pair_ref().second; }

private:
  explicit SExpr(Word w) : repr_(std::move(w)) {}
  SExpr(SExprPtr l, SExprPtr r)
      : repr_(std::pair<SExprPtr, SExprPtr>(std::move(l), std::move(r))) {}

  const std::pair<SExprPtr, SExprPtr>& pair_ref() const {
    if (is_atom()) throw std::logic_error("branch access on an atom");
    return std::get<std::pair<SExprPtr, SExprPtr>>(repr_);
  }

  std::variant<Word, std::pair<SExprPtr, SExprPtr>> repr_;
};

// Shorthand constructors.
inline SExprPtr nil() { return SExpr::atom(Word::nil()); }
inline SExprPtr truth() { return SExpr::atom(Word::truth()); }
inline SExprPtr sym(std::string_view s) {
  return SExpr::atom(Word::symbol(std::string(s)));
}
inline SExprPtr num(BigUint n) { return SExpr::atom(Word::number(std::move(n))); }
inline SExprPtr num(unsigned long long n) { return num(BigUint(n)); }

// Proper list from a vector of elements.
inline SExprPtr list(const std::vector<SExprPtr>& items) {
  SExprPtr acc = nil();
  for (auto it = items.rbegin(); it != items.rend(); ++it)
    acc = SExpr::cons(*it, acc);
  return acc;
}

// ---------------------------------------------------------------------------
// cons / car / cdr / atom?
// ---------------------------------------------------------------------------

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline SExprPtr cons(SExprPtr x, SExprPtr y) {
  return SExpr::cons(std::move(x), std::move(y));
}

inline const SExprPtr& car(const SExprPtr& x) {
  if (!x || x->is_atom()) throw DomainError("not a pair");
  return x->left();
}

inline const SExprPtr& cdr(const SExprPtr& x) {
  if (!x || x->is_atom()) throw DomainError("not a pair");
  return x->right();
}

inline bool is_atom(const SExprPtr& x) { return x && x->is_atom(); }

inline bool is_nil(const SExprPtr& x) {
  return x && x->is_atom() && x->word().is_nil();
}

// Deep structural equality. Iterative so degenerate trees cannot overflow
// the call stack.
inline bool equal(const SExprPtr& a, const SExprPtr& b) {
  std::vector<std::pair<const SExpr*, const SExpr*>> work{{a.get(), b.get()}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    if (x == y) continue;
    if (!x || !y) return false;
    if (x->is_atom() != y->is_atom()) return false;
    if (x->is_atom()) {
      if (!(x->word() == y->word())) return false;
    } else {
      work.emplace_back(x->left().get(), y->left().get());
      work.emplace_back(x->right().get(), y->right().get());
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
  ParseError(std::string msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        reason(std::move(msg)),
        position(pos) {}
  std::string reason;
  std::size_t position;
};

// Raised when the input is a syntactically valid prefix that stops short
// (unclosed list, dangling quote). The REPL uses this to ask for more input.
struct IncompleteInput : ParseError {
  using ParseError::ParseError;
};

namespace detail {

enum class TokKind { LParen, RParen, Quote, Dot, Word, End };

struct Token {
  TokKind kind;
  std::string_view text;
  std::size_t pos;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_blank();
    if (i_ >= src_.size()) return {TokKind::End, {}, i_};
    std::size_t start = i_;
    char c = src_[i_];
    switch (c) {
      case '(': ++i_; return {TokKind::LParen, src_.substr(start, 1), start};
      case ')': ++i_; return {TokKind::RParen, src_.substr(start, 1), start};
      case '\'': ++i_; return {TokKind::Quote, src_.substr(start, 1), start};
      case '.': ++i_; return {TokKind::Dot, src_.substr(start, 1), start};
      default: break;
    }
    while (i_ < src_.size() && symbol_char_ok(src_[i_])) ++i_;
    return {TokKind::Word, src_.substr(start, i_ - start), start};
  }

  std::size_t offset() const { return i_; }

private:
  void skip_blank() {
    while (i_ < src_.size()) {
      unsigned char u = static_cast<unsigned char>(src_[i_]);
      if (std::isspace(u)) {
        ++i_;
      } else if (src_[i_] == ';') {
        while (i_ < src_.size() && src_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

// One parser frame per unclosed "(" or pending quote. An explicit stack keeps
// the reader total on any input, including pathologically deep nesting.
struct Frame {
  enum class Kind { List, Quote } kind;
  std::size_t open_pos;
  std::vector<SExprPtr> items;
  bool dotted = false;
  SExprPtr tail;
};

class Parser {
public:
  explicit Parser(std::string_view src) : lex_(src) {}

  // Parses exactly one expression; afterwards offset() points past it.
  SExprPtr parse_one() {
    std::vector<Frame> stack;
    while (true) {
      Token t = lex_.next();
      switch (t.kind) {
        case TokKind::End:
          if (stack.empty()) throw ParseError("empty input", t.pos);
          throw IncompleteInput("unexpected end of input", t.pos);
        case TokKind::LParen:
          stack.push_back({Frame::Kind::List, t.pos, {}, false, nullptr});
          break;
        case TokKind::Quote:
          stack.push_back({Frame::Kind::Quote, t.pos, {}, false, nullptr});
          break;
        case TokKind::Dot: {
          if (stack.empty() || stack.back().kind != Frame::Kind::List)
            throw ParseError("dot outside a list", t.pos);
          Frame& f = stack.back();
          if (f.items.empty()) throw ParseError("dot before any element", t.pos);
          if (f.dotted) throw ParseError("second dot in list", t.pos);
          f.dotted = true;
          break;
        }
        case TokKind::RParen: {
          if (stack.empty()) throw ParseError("unbalanced ')'", t.pos);
          if (stack.back().kind != Frame::Kind::List)
            throw ParseError("expected expression after quote", t.pos);
          Frame f = std::move(stack.back());
          stack.pop_back();
          if (f.dotted && !f.tail)
            throw ParseError("dot without tail expression", t.pos);
          SExprPtr e = f.tail ? f.tail : nil();
          for (auto it = f.items.rbegin(); it != f.items.rend(); ++it)
            e = SExpr::cons(*it, e);
          if (auto done = complete(stack, std::move(e), t.pos)) return done;
          break;
        }
        case TokKind::Word: {
          SExprPtr e = SExpr::atom(Word::from_token(t.text));
          if (auto done = complete(stack, std::move(e), t.pos)) return done;
          break;
        }
      }
    }
  }

  bool at_end() {
    Token t = lex_.next();
    return t.kind == TokKind::End;
  }

  std::size_t offset() const { return lex_.offset(); }

private:
  // Attach a finished expression to the enclosing frame; returns it when
  // there is none.
  static SExprPtr complete(std::vector<Frame>& stack, SExprPtr e,
                           std::size_t pos) {
    while (!stack.empty() && stack.back().kind == Frame::Kind::Quote) {
      stack.pop_back();
      e = SExpr::cons(sym("quote"), SExpr::cons(std::move(e), nil()));
    }
    if (stack.empty()) return e;
    Frame& f = stack.back();
    if (f.dotted) {
      if (f.tail) throw ParseError("more than one expression after dot", pos);
      f.tail = std::move(e);
    } else {
      f.items.push_back(std::move(e));
    }
    return nullptr;
  }

  Lexer lex_;
};

}  // namespace detail

// Reads one complete expression; anything but trailing blank is an error.
inline SExprPtr read(std::string_view text) {
  detail::Parser p(text);
  SExprPtr e = p.parse_one();
  if (!p.at_end()) throw ParseError("trailing garbage", p.offset());
  return e;
}

// Reads one expression and reports how many bytes were consumed.
inline SExprPtr read_one(std::string_view text, std::size_t& consumed) {
  detail::Parser p(text);
  SExprPtr e = p.parse_one();
  consumed = p.offset();
  return e;
}

// Reads a whole program: zero or more expressions.
inline std::vector<SExprPtr> read_all(std::string_view text) {
  std::vector<SExprPtr> out;
  std::size_t at = 0;
  while (true) {
    if (detail::Parser(text.substr(at)).at_end()) break;
    detail::Parser p(text.substr(at));
    try {
      out.push_back(p.parse_one());
    } catch (const IncompleteInput& e) {
      throw IncompleteInput(e.reason, at + e.position);
    } catch (const ParseError& e) {
      throw ParseError(e.reason, at + e.position);
    }
    at += p.offset();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

// Canonical form: list sugar where possible, " . " for improper tails, no
// quote sugar. read(print(e)) is structurally equal to e.
inline std::string print(const SExprPtr& e) {
  if (!e) throw std::invalid_argument("print of null expression");
  std::string out;
  struct Task {
    enum class Op { Expr, ListTail, Text } op;
    const SExpr* node;
    const char* text;
  };
  std::vector<Task> work{{Task::Op::Expr, e.get(), nullptr}};
  while (!work.empty()) {
    Task t = work.back();
    work.pop_back();
    switch (t.op) {
      case Task::Op::Text:
        out += t.text;
        break;
      case Task::Op::Expr:
        if (t.node->is_atom()) {
          out += t.node->word().to_string();
        } else {
          out += '(';
          work.push_back({Task::Op::ListTail, t.node->right().get(), nullptr});
          work.push_back({Task::Op::Expr, t.node->left().get(), nullptr});
        }
        break;
      case Task::Op::ListTail:
        if (t.node->is_atom()) {
          if (t.node->word().is_nil()) {
            out += ')';
          } else {
            out += " . ";
            out += t.node->word().to_string();
            out += ')';
          }
        } else {
          out += ' ';
          work.push_back({Task::Op::ListTail, t.node->right().get(), nullptr});
          work.push_back({Task::Op::Expr, t.node->left().get(), nullptr});
        }
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// List helpers shared by the interpreter and the bridges
// ---------------------------------------------------------------------------

// Flattens a proper list; empty result for nil. Throws DomainError on an
// improper list.
inline std::vector<SExprPtr> list_items(const SExprPtr& e) {
  std::vector<SExprPtr> out;
  const SExpr* p = e.get();
  while (p && !p->is_atom()) {
    out.push_back(p->left());
    p = p->right().get();
  }
  if (!p || !p->word().is_nil())
    throw DomainError("expected a proper list: " + print(e));
  return out;
}

inline bool is_proper_list(const SExprPtr& e) {
  const SExpr* p = e.get();
  while (p && !p->is_atom()) p = p->right().get();
  return p && p->word().is_nil();
}

}  // namespace recur::sexpr

#endif  // RECUR_SEXPR_HPP
