// Lambda-calculus engine: the priming variable grammar, alpha-conversion,
// capture-avoiding substitution, beta-reduction under two strategies,
// fueled normalization, and Church numerals.
#ifndef RECUR_LAMBDA_HPP
#define RECUR_LAMBDA_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace recur::lambda {

// Variables are the letter x primed some number of times: x, x', x'', ...
struct VarName {
  unsigned primes = 0;
  friend bool operator==(VarName a, VarName b) { return a.primes == b.primes; }
  friend bool operator!=(VarName a, VarName b) { return a.primes != b.primes; }
  friend bool operator<(VarName a, VarName b) { return a.primes < b.primes; }
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

struct Var {
  VarName name;
};
struct Abs {
  VarName param;
  TermPtr body;
};
struct App {
  TermPtr fn;
  TermPtr arg;
};

class Term {
public:
  static TermPtr var(VarName n) { return make(Var{n}); }
  static TermPtr abs(VarName param, TermPtr body) {
    return make(Abs{param, std::move(body)});
  }
  static TermPtr app(TermPtr fn, TermPtr arg) {
    return make(App{std::move(fn), std::move(arg)});
  }

  bool is_var() const { return std::holds_alternative<Var>(node_); }
  bool is_abs() const { return std::holds_alternative<Abs>(node_); }
  bool is_app() const { return std::holds_alternative<App>(node_); }

  const Var& as_var() const { return std::get<Var>(node_); }
  const Abs& as_abs() const { return std::get<Abs>(node_); }
  const App& as_app() const { return std::get<App>(node_); }

private:
  template <class N>
  static TermPtr make(N&& n) {
    return std::shared_ptr<const Term>(new Term(std::forward<N>(n)));
  }
  template <class N>
  explicit Term(N&& n) : node_(std::forward<N>(n)) {}

  std::variant<Var, Abs, App> node_;
};

inline TermPtr var(unsigned primes) { return Term::var(VarName{primes}); }

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
  ParseError(std::string msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        reason(std::move(msg)),
        position(pos) {}
  std::string reason;
  std::size_t position;
};

namespace detail {

// Accepts exactly the priming grammar
//   S -> X | (λX S) | (S S)      X -> x | X'
// with runs of whitespace tolerated where the grammar has one space, and
// around the whole term. The lambda may be written λ or \.  Uses an explicit
// frame stack, so arbitrarily nested input cannot overflow the call stack.
class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  TermPtr parse() {
    struct Frame {
      bool is_abs;
      VarName param;   // abstraction frames
      TermPtr first;   // application frames, once the left term is done
      std::size_t open_pos;
    };
    std::vector<Frame> stack;
    skip_ws();
    while (true) {
      // Parse the head of one term.
      TermPtr done;
      if (at_end()) throw err("expected term");
      if (peek() == '(') {
        std::size_t open = i_;
        ++i_;
        if (eat_lambda()) {
          if (at_end() || peek() != 'x')
            throw err("expected variable after lambda");
          VarName p = parse_var();
          if (!skip_ws()) throw err("expected space after parameter");
          stack.push_back({true, p, nullptr, open});
        } else {
          stack.push_back({false, VarName{}, nullptr, open});
        }
        continue;
      }
      if (peek() == 'x') {
        done = Term::var(parse_var());
      } else {
        throw err("expected term");
      }
      // Unwind: attach the finished term to enclosing frames.
      while (done) {
        if (stack.empty()) {
          skip_ws();
          if (!at_end()) throw err("trailing garbage");
          return done;
        }
        Frame& f = stack.back();
        if (f.is_abs) {
          expect_close();
          done = Term::abs(f.param, std::move(done));
          stack.pop_back();
        } else if (!f.first) {
          f.first = std::move(done);
          done = nullptr;
          if (!skip_ws()) throw err("expected space in application");
        } else {
          expect_close();
          done = Term::app(std::move(f.first), std::move(done));
          stack.pop_back();
        }
      }
    }
  }

private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek() const { return src_[i_]; }

  ParseError err(std::string msg) const { return ParseError(std::move(msg), i_); }

  bool skip_ws() {
    bool any = false;
    while (!at_end() && (src_[i_] == ' ' || src_[i_] == '\t' ||
                         src_[i_] == '\n' || src_[i_] == '\r')) {
      ++i_;
      any = true;
    }
    return any;
  }

  // λ in UTF-8 is the byte pair CE BB; \ is the ASCII alias.
  bool eat_lambda() {
    if (!at_end() && peek() == '\\') {
      ++i_;
      return true;
    }
    if (i_ + 1 < src_.size() &&
        static_cast<unsigned char>(src_[i_]) == 0xCE &&
        static_cast<unsigned char>(src_[i_ + 1]) == 0xBB) {
      i_ += 2;
      return true;
    }
    return false;
  }

  VarName parse_var() {
    ++i_;  // the 'x'
    unsigned primes = 0;
    while (!at_end() && peek() == '\'') {
      ++i_;
      ++primes;
    }
    return VarName{primes};
  }

  void expect_close() {
    if (at_end() || peek() != ')') throw err("expected ')'");
    ++i_;
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline TermPtr parse(std::string_view text) { return detail::Parser(text).parse(); }

// Canonical fully parenthesized single-space form; parse(print(t)) == t.
inline std::string print(const TermPtr& t) {
  struct Task {
    const Term* node;
    const char* text;
  };
  std::string out;
  std::vector<Task> work{{t.get(), nullptr}};
  while (!work.empty()) {
    Task k = work.back();
    work.pop_back();
    if (k.text) {
      out += k.text;
      continue;
    }
    const Term& n = *k.node;
    if (n.is_var()) {
      out += 'x';
      out.append(n.as_var().name.primes, '\'');
    } else if (n.is_abs()) {
      out += "(\xce\xbb";
      out += 'x';
      out.append(n.as_abs().param.primes, '\'');
      out += ' ';
      work.push_back({nullptr, ")"});
      work.push_back({n.as_abs().body.get(), nullptr});
    } else {
      out += '(';
      work.push_back({nullptr, ")"});
      work.push_back({n.as_app().arg.get(), nullptr});
      work.push_back({nullptr, " "});
      work.push_back({n.as_app().fn.get(), nullptr});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Alpha-conversion and substitution
// ---------------------------------------------------------------------------

namespace detail {

inline void free_vars_into(const Term* t, std::vector<VarName>& bound,
                           std::set<VarName>& out) {
  if (t->is_var()) {
    VarName n = t->as_var().name;
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (*it == n) return;
    out.insert(n);
  } else if (t->is_abs()) {
    bound.push_back(t->as_abs().param);
    free_vars_into(t->as_abs().body.get(), bound, out);
    bound.pop_back();
  } else {
    free_vars_into(t->as_app().fn.get(), bound, out);
    free_vars_into(t->as_app().arg.get(), bound, out);
  }
}

inline bool alpha_eq(const Term* a, const Term* b, std::vector<VarName>& ba,
                     std::vector<VarName>& bb) {
  if (a->is_var() && b->is_var()) {
    VarName na = a->as_var().name, nb = b->as_var().name;
    // Bound variables must be bound at the same binder depth; free ones
    // must agree by name.
    for (std::size_t i = ba.size(); i-- > 0;) {
      bool ia = ba[i] == na, ib = bb[i] == nb;
      if (ia || ib) return ia && ib;
    }
    return na == nb;
  }
  if (a->is_abs() && b->is_abs()) {
    ba.push_back(a->as_abs().param);
    bb.push_back(b->as_abs().param);
    bool ok = alpha_eq(a->as_abs().body.get(), b->as_abs().body.get(), ba, bb);
    ba.pop_back();
    bb.pop_back();
    return ok;
  }
  if (a->is_app() && b->is_app()) {
    return alpha_eq(a->as_app().fn.get(), b->as_app().fn.get(), ba, bb) &&
           alpha_eq(a->as_app().arg.get(), b->as_app().arg.get(), ba, bb);
  }
  return false;
}

inline unsigned max_prime(const Term* t) {
  if (t->is_var()) return t->as_var().name.primes;
  if (t->is_abs())
    return std::max(t->as_abs().param.primes, max_prime(t->as_abs().body.get()));
  return std::max(max_prime(t->as_app().fn.get()),
                  max_prime(t->as_app().arg.get()));
}

}  // namespace detail

inline std::set<VarName> free_variables(const TermPtr& t) {
  std::set<VarName> out;
  std::vector<VarName> bound;
  detail::free_vars_into(t.get(), bound, out);
  return out;
}

inline bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  std::vector<VarName> ba, bb;
  return detail::alpha_eq(a.get(), b.get(), ba, bb);
}

// Capture-avoiding substitution of `value` for free occurrences of `name`.
// When a binder would capture, it is renamed to the smallest prime count
// beyond every prime in sight, so results are deterministic.
inline TermPtr substitute(const TermPtr& body, VarName name,
                          const TermPtr& value) {
  if (body->is_var())
    return body->as_var().name == name ? value : body;
  if (body->is_app())
    return Term::app(substitute(body->as_app().fn, name, value),
                     substitute(body->as_app().arg, name, value));
  const Abs& a = body->as_abs();
  if (a.param == name) return body;  // occurrences below are bound
  std::set<VarName> fv = free_variables(value);
  if (fv.count(a.param)) {
    std::set<VarName> fb = free_variables(a.body);
    if (fb.count(name)) {
      unsigned fresh = std::max(detail::max_prime(body.get()),
                                detail::max_prime(value.get())) +
                       1;
      TermPtr renamed = substitute(a.body, a.param, var(fresh));
      return Term::abs(VarName{fresh}, substitute(renamed, name, value));
    }
  }
  return Term::abs(a.param, substitute(a.body, name, value));
}

// ---------------------------------------------------------------------------
// Beta-reduction
// ---------------------------------------------------------------------------

enum class Strategy { NormalOrder, CallByValue };

namespace detail {

// A call-by-value value: a variable or an abstraction.
inline bool is_value(const Term* t) { return !t->is_app(); }

inline std::optional<TermPtr> step_normal(const TermPtr& t) {
  if (t->is_var()) return std::nullopt;
  if (t->is_abs()) {
    if (auto b = step_normal(t->as_abs().body))
      return Term::abs(t->as_abs().param, *b);
    return std::nullopt;
  }
  const App& a = t->as_app();
  if (a.fn->is_abs())
    return substitute(a.fn->as_abs().body, a.fn->as_abs().param, a.arg);
  if (auto f = step_normal(a.fn)) return Term::app(*f, a.arg);
  if (auto x = step_normal(a.arg)) return Term::app(a.fn, *x);
  return std::nullopt;
}

inline std::optional<TermPtr> step_cbv(const TermPtr& t) {
  if (!t->is_app()) return std::nullopt;  // variables and abstractions are values
  const App& a = t->as_app();
  if (auto f = step_cbv(a.fn)) return Term::app(*f, a.arg);
  if (auto x = step_cbv(a.arg)) return Term::app(a.fn, *x);
  if (a.fn->is_abs() && is_value(a.arg.get()))
    return substitute(a.fn->as_abs().body, a.fn->as_abs().param, a.arg);
  return std::nullopt;
}

}  // namespace detail

// Contracts the strategy's chosen redex, if any.
inline std::optional<TermPtr> beta_step(const TermPtr& t, Strategy s) {
  return s == Strategy::NormalOrder ? detail::step_normal(t)
                                    : detail::step_cbv(t);
}

struct ReductionOutcome {
  enum class Status { Normalized, FuelExhausted };
  Status status;
  TermPtr term;          // normal form, or the partial term at exhaustion
  std::uint64_t steps;

  bool normalized() const { return status == Status::Normalized; }
};

inline ReductionOutcome normalize(TermPtr t, Strategy s, std::uint64_t fuel) {
  std::uint64_t steps = 0;
  while (true) {
    auto next = beta_step(t, s);
    if (!next)
      return {ReductionOutcome::Status::Normalized, std::move(t), steps};
    if (steps == fuel)
      return {ReductionOutcome::Status::FuelExhausted, std::move(t), steps};
    t = std::move(*next);
    ++steps;
  }
}

// ---------------------------------------------------------------------------
// Church numerals and stock combinators
// ---------------------------------------------------------------------------

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// n  |->  (λx (λx' x(x(...x'...))))   i.e. λf λa f^n(a) with primed names.
inline TermPtr church_encode(std::uint64_t n) {
  TermPtr body = var(1);
  for (std::uint64_t i = 0; i < n; ++i) body = Term::app(var(0), body);
  return Term::abs(VarName{0}, Term::abs(VarName{1}, body));
}

// Applies t to two fresh free variables, normalizes, and counts the
// application spine. Empty on fuel exhaustion or a non-numeral shape.
inline std::optional<std::uint64_t> church_decode(const TermPtr& t,
                                                  std::uint64_t fuel) {
  if (!free_variables(t).empty())
    throw DomainError("church_decode: term is not closed");
  unsigned base = detail::max_prime(t.get()) + 1;
  VarName f{base}, a{base + 1};
  ReductionOutcome r = normalize(
      Term::app(Term::app(t, Term::var(f)), Term::var(a)),
      Strategy::NormalOrder, fuel);
  if (!r.normalized()) return std::nullopt;
  std::uint64_t count = 0;
  const Term* node = r.term.get();
  while (node->is_app()) {
    const App& ap = node->as_app();
    if (!ap.fn->is_var() || ap.fn->as_var().name != f) return std::nullopt;
    ++count;
    node = ap.arg.get();
  }
  if (!node->is_var() || node->as_var().name != a) return std::nullopt;
  return count;
}

inline TermPtr identity() { return Term::abs(VarName{0}, var(0)); }

// λn λf λa (f ((n f) a))
inline TermPtr church_successor() {
  return Term::abs(
      VarName{0},
      Term::abs(VarName{1},
                Term::abs(VarName{2},
                          Term::app(var(1), Term::app(Term::app(var(0), var(1)),
                                                      var(2))))));
}

// λm λn λf λa ((m f) ((n f) a))
inline TermPtr church_add() {
  return Term::abs(
      VarName{0},
      Term::abs(
          VarName{1},
          Term::abs(
              VarName{2},
              Term::abs(VarName{3},
                        Term::app(Term::app(var(0), var(2)),
                                  Term::app(Term::app(var(1), var(2)),
                                            var(3)))))));
}

// Y = λx' ((λx (x' (x x))) (λx (x' (x x))))
inline TermPtr y_combinator() {
  auto half = [] {
    return Term::abs(VarName{0},
                     Term::app(var(1), Term::app(var(0), var(0))));
  };
  return Term::abs(VarName{1}, Term::app(half(), half()));
}

// ((λx (x x)) (λx (x x))) reproduces itself forever under any strategy.
inline TermPtr omega() {
  auto half = [] { return Term::abs(VarName{0}, Term::app(var(0), var(0))); };
  return Term::app(half(), half());
}

}  // namespace recur::lambda

#endif  // RECUR_LAMBDA_HPP
