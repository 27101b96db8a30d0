#ifndef MTLSMC_FORMULA_HPP
#define MTLSMC_FORMULA_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "mtlsmc/timeset.hpp"

namespace mtlsmc {

enum class Op { Top, Bot, Atom, Not, And, Or, Until, Diamond, Box };

/// Immutable MTL syntax tree. Core nodes are Atom/Not/And/Until; Top, Bot,
/// Or, Diamond and Box are first-class sugar. Subtrees are shared.
class Formula {
 public:
  static Formula top() { return Formula(Node{Op::Top}); }
  static Formula bot() { return Formula(Node{Op::Bot}); }
  static Formula atom(std::string name) {
    Node n{Op::Atom};
    n.name = std::move(name);
    return Formula(std::move(n));
  }
  static Formula negate(Formula f) { return unary(Op::Not, std::nullopt, std::move(f)); }
  static Formula conj(Formula a, Formula b) { return binary(Op::And, std::nullopt, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return binary(Op::Or, std::nullopt, std::move(a), std::move(b)); }
  static Formula until(Interval window, Formula a, Formula b) {
    require_positive_window(window);
    return binary(Op::Until, window, std::move(a), std::move(b));
  }
  static Formula diamond(Interval window, Formula f) {
    require_positive_window(window);
    return unary(Op::Diamond, window, std::move(f));
  }
  static Formula box(Interval window, Formula f) {
    require_positive_window(window);
    return unary(Op::Box, window, std::move(f));
  }

  Op op() const noexcept { return node_->op; }
  const std::string& name() const noexcept { return node_->name; }
  /// Window of Until/Diamond/Box nodes.
  const Interval& window() const { return *node_->window; }
  /// Only child of Not/Diamond/Box; left child of And/Or/Until.
  const Formula& lhs() const { return *node_->lhs; }
  const Formula& rhs() const { return *node_->rhs; }
  const Formula& child() const { return lhs(); }

  bool is_temporal() const noexcept { return op() == Op::Until || op() == Op::Diamond || op() == Op::Box; }

  /// Stable identity of the shared node, usable as a memo key.
  const void* id() const noexcept { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.op != y.op || x.name != y.name || x.window != y.window) return false;
    if (static_cast<bool>(x.lhs) != static_cast<bool>(y.lhs) || (x.lhs && !(*x.lhs == *y.lhs))) return false;
    if (static_cast<bool>(x.rhs) != static_cast<bool>(y.rhs) || (x.rhs && !(*x.rhs == *y.rhs))) return false;
    return true;
  }

 private:
  struct Node {
    Op op;
    std::string name{};
    std::optional<Interval> window{};
    std::shared_ptr<const Formula> lhs{};
    std::shared_ptr<const Formula> rhs{};
  };

  explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static Formula unary(Op op, std::optional<Interval> w, Formula f) {
    Node n{op};
    n.window = w;
    n.lhs = std::make_shared<const Formula>(std::move(f));
    return Formula(std::move(n));
  }
  static Formula binary(Op op, std::optional<Interval> w, Formula a, Formula b) {
    Node n{op};
    n.window = w;
    n.lhs = std::make_shared<const Formula>(std::move(a));
    n.rhs = std::make_shared<const Formula>(std::move(b));
    return Formula(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Printing. The output re-parses to the same tree.

namespace detail {

inline std::string window_text(const Interval& w) {
  return std::string(w.lo().closed ? "[" : "(") + format_number(w.lo().value) + "," +
         format_number(w.hi().value) + (w.hi().closed ? "]" : ")");
}

inline std::string print_unary(const Formula& f);

inline std::string print_primary(const Formula& f, std::string (*full)(const Formula&)) {
  switch (f.op()) {
    case Op::Top: return "true";
    case Op::Bot: return "false";
    case Op::Atom: return f.name();
    default: return "(" + full(f) + ")";
  }
}

inline std::string print_formula(const Formula& f) {
  switch (f.op()) {
    case Op::Or: {
      const bool bare_lhs = f.lhs().op() == Op::Or || f.lhs().op() == Op::And;
      const std::string l = bare_lhs ? print_formula(f.lhs()) : print_unary(f.lhs());
      const std::string r = f.rhs().op() == Op::And ? print_formula(f.rhs()) : print_unary(f.rhs());
      return l + " | " + r;
    }
    case Op::And: {
      const std::string l = f.lhs().op() == Op::And ? print_formula(f.lhs()) : print_unary(f.lhs());
      return l + " & " + print_unary(f.rhs());
    }
    default: return print_unary(f);
  }
}

inline std::string print_unary(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Atom: return print_primary(f, print_formula);
    case Op::Not: return "!" + print_unary(f.child());
    case Op::Diamond: return "F" + window_text(f.window()) + " " + print_unary(f.child());
    case Op::Box: return "G" + window_text(f.window()) + " " + print_unary(f.child());
    case Op::Until:
      return print_primary(f.lhs(), print_formula) + " U" + window_text(f.window()) + " " + print_unary(f.rhs());
    case Op::And:
    case Op::Or: return "(" + print_formula(f) + ")";
  }
  return {};
}

}  // namespace detail

/// Concrete syntax accepted by parse().
inline std::string to_string(const Formula& f) { return detail::print_formula(f); }

// ---------------------------------------------------------------------------

/// Rewrites sugar into Atom/Not/And/Until, keeping Top as the always-true
/// constant (Bot becomes !true).
inline Formula to_core(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Atom: return f;
    case Op::Bot: return Formula::negate(Formula::top());
    case Op::Not: return Formula::negate(to_core(f.child()));
    case Op::And: return Formula::conj(to_core(f.lhs()), to_core(f.rhs()));
    case Op::Or:
      return Formula::negate(
          Formula::conj(Formula::negate(to_core(f.lhs())), Formula::negate(to_core(f.rhs()))));
    case Op::Until: return Formula::until(f.window(), to_core(f.lhs()), to_core(f.rhs()));
    case Op::Diamond: return Formula::until(f.window(), Formula::top(), to_core(f.child()));
    case Op::Box:
      return Formula::negate(
          Formula::until(f.window(), Formula::top(), Formula::negate(to_core(f.child()))));
  }
  return f;
}

inline bool is_propositional(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Atom: return true;
    case Op::Not: return is_propositional(f.child());
    case Op::And:
    case Op::Or: return is_propositional(f.lhs()) && is_propositional(f.rhs());
    default: return false;
  }
}

struct FlatCheck {
  bool flat = true;
  /// Location of the first offending node, e.g. "root.rhs.child", and why.
  std::string diagnostic;

  explicit operator bool() const noexcept { return flat; }
};

/// Membership in the flat fragment: Boolean combinations of atoms and of
/// F_I p / G_I p with p propositional. Checked on the sugared tree.
inline FlatCheck is_flat(const Formula& f, const std::string& path = "root") {
  switch (f.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Atom: return {};
    case Op::Not: return is_flat(f.child(), path + ".child");
    case Op::And:
    case Op::Or: {
      if (auto l = is_flat(f.lhs(), path + ".lhs"); !l) return l;
      return is_flat(f.rhs(), path + ".rhs");
    }
    case Op::Until: return {false, path + ": until operator"};
    case Op::Diamond:
    case Op::Box:
      if (!is_propositional(f.child())) return {false, path + ".child: nested temporal operator"};
      return {};
  }
  return {};
}

/// Maximum over root-to-leaf paths of the summed window upper bounds.
/// Throws UnboundedWindow if any window is unbounded.
inline double temporal_reach(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Atom: return 0.0;
    case Op::Not: return temporal_reach(f.child());
    case Op::And:
    case Op::Or: return std::max(temporal_reach(f.lhs()), temporal_reach(f.rhs()));
    case Op::Until:
    case Op::Diamond:
    case Op::Box: {
      if (!std::isfinite(f.window().hi().value)) throw UnboundedWindow("unbounded window " + to_string(f.window()));
      const double below = f.op() == Op::Until ? std::max(temporal_reach(f.lhs()), temporal_reach(f.rhs()))
                                               : temporal_reach(f.child());
      return f.window().hi().value + below;
    }
  }
  return 0.0;
}

/// Longest chain of nested temporal operators.
inline int temporal_depth(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Atom: return 0;
    case Op::Not:
    case Op::Diamond:
    case Op::Box: return temporal_depth(f.child()) + (f.is_temporal() ? 1 : 0);
    case Op::And:
    case Op::Or: return std::max(temporal_depth(f.lhs()), temporal_depth(f.rhs()));
    case Op::Until: return 1 + std::max(temporal_depth(f.lhs()), temporal_depth(f.rhs()));
  }
  return 0;
}

}  // namespace mtlsmc

#endif  // MTLSMC_FORMULA_HPP
