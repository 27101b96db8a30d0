#ifndef MTLSMC_CSEM_HPP
#define MTLSMC_CSEM_HPP

// Exact continuous-time semantics over piecewise-linear traces. Every
// subformula is evaluated to its time set restricted to a window; temporal
// operators widen the window their children are evaluated on.

#include "mtlsmc/atoms.hpp"
#include "mtlsmc/formula.hpp"
#include "mtlsmc/trace.hpp"

namespace mtlsmc {

namespace detail {

// Relative slack added to child windows. Children are exact on whatever
// window they get, so widening only guards the final clip against rounding
// in t + S - S.
inline constexpr double kWindowSlack = 1e-12;

inline double widen_hi(double x) { return x + kWindowSlack * std::max(1.0, std::abs(x)); }
inline double widen_lo(double x) { return std::max(0.0, x - kWindowSlack * std::max(1.0, std::abs(x))); }

/// Components of `s` overlapping `window`, clipped to it.
inline IntervalSet slice(const IntervalSet& s, const Interval& window) {
  auto first = std::lower_bound(s.begin(), s.end(), window.lo().value,
                                [](const Interval& iv, double x) { return iv.hi().value < x; });
  std::vector<Interval> raw;
  for (auto it = first; it != s.end() && it->lo().value <= window.hi().value; ++it) {
    if (auto piece = intersect(*it, window)) raw.push_back(*piece);
  }
  return IntervalSet::canonicalize(std::move(raw));
}

}  // namespace detail

/// {t in `within` : exists s in I, t + s in A2 and [t, t + s) inside A1}.
///
/// For s = 0 the obligation on A1 is vacuous, so A2 contributes directly when
/// 0 is in I. For s > 0, t must lie in a component C = <a, b> of A1 with
/// t < b, and the witness t + s must lie in A2 no later than b; this is a
/// diamond preimage of A2 restricted to [a, b], taken inside C minus {b}.
inline TimeSet until_timeset(const TimeSet& a1, const TimeSet& a2, const Interval& window, const Interval& within) {
  require_positive_window(window);
  if (!std::isfinite(window.hi().value)) throw UnboundedWindow("until window with infinite upper bound");
  std::vector<Interval> raw;
  if (window.contains(0.0)) {
    for (const Interval& iv : detail::slice(a2, within)) raw.push_back(iv);
  }
  if (auto positive = Interval::try_make({std::max(window.lo().value, 0.0), window.lo().closed && window.lo().value > 0.0},
                                         window.hi())) {
    for (const Interval& c : a1) {
      auto start = Interval::try_make(c.lo(), {c.hi().value, false});
      if (!start) continue;
      const IntervalSet reach = detail::slice(a2, Interval::closed(c.lo().value, c.hi().value));
      if (reach.empty()) continue;
      for (const Interval& iv : diamond_preimage(reach, *positive, *start)) raw.push_back(iv);
    }
  }
  return clip(IntervalSet::canonicalize(std::move(raw)), within);
}

inline TimeSet until_timeset(const TimeSet& a1, const TimeSet& a2, const Interval& window, double horizon) {
  return until_timeset(a1, a2, window, Interval::closed(0.0, horizon));
}

namespace detail {

class ContinuousEvaluator {
 public:
  ContinuousEvaluator(const PLTrace& trace, const AtomMap& atoms) : trace_(trace), atoms_(atoms) {}

  TimeSet eval(const Formula& f, const Interval& w) const {
    switch (f.op()) {
      case Op::Top: return IntervalSet(w);
      case Op::Bot: return {};
      case Op::Atom: return atom(f.name(), w);
      case Op::Not: return complement(eval(f.child(), w), w);
      case Op::And: {
        TimeSet l = eval(f.lhs(), w);
        if (l.empty()) return l;
        return set_intersect(l, eval(f.rhs(), w));
      }
      case Op::Or: return set_union(eval(f.lhs(), w), eval(f.rhs(), w));
      case Op::Diamond: {
        const Interval& iw = f.window();
        const Interval cw = child_window(w, iw.lo().value, iw.hi().value);
        return diamond_preimage(eval(f.child(), cw), iw, w);
      }
      case Op::Box: {
        const Interval& iw = f.window();
        const Interval cw = child_window(w, iw.lo().value, iw.hi().value);
        const TimeSet violations = complement(eval(f.child(), cw), cw);
        return complement(diamond_preimage(violations, iw, w), w);
      }
      case Op::Until: {
        const Interval& iw = f.window();
        const Interval cw = child_window(w, 0.0, iw.hi().value);
        const TimeSet a1 = eval(f.lhs(), cw);
        return until_timeset(a1, eval(f.rhs(), cw), iw, w);
      }
    }
    return {};
  }

  bool holds(const Formula& f, double t) const {
    switch (f.op()) {
      case Op::Top: return true;
      case Op::Bot: return false;
      case Op::Not: return !holds(f.child(), t);
      case Op::And: return holds(f.lhs(), t) && holds(f.rhs(), t);
      case Op::Or: return holds(f.lhs(), t) || holds(f.rhs(), t);
      default: return eval(f, Interval::point(t)).contains(t);
    }
  }

 private:
  Interval child_window(const Interval& w, double shift_lo, double shift_hi) const {
    if (!std::isfinite(shift_hi)) throw UnboundedWindow("unbounded temporal window");
    return Interval::closed(widen_lo(w.lo().value + shift_lo), widen_hi(w.hi().value + shift_hi));
  }

  TimeSet atom(const std::string& name, const Interval& w) const {
    const RegionSet& region = atoms_.region(name);
    const double h = trace_.horizon();
    if (w.hi().value > widen_hi(widen_hi(h))) {
      throw HorizonExceeded("formula needs the trace up to t = " + format_number(w.hi().value) +
                            " but the trace ends at " + format_number(h));
    }
    if (w.lo().value > h) return {};
    return atom_timeset(trace_, region, Interval::closed(w.lo().value, std::min(w.hi().value, h)));
  }

  const PLTrace& trace_;
  const AtomMap& atoms_;
};

inline void require_reach(const Formula& f, double until_time, double trace_horizon) {
  const double needed = until_time + temporal_reach(f);
  if (needed > widen_hi(trace_horizon)) {
    throw HorizonExceeded("formula needs the trace up to t = " + format_number(needed) + " but the trace ends at " +
                          format_number(trace_horizon));
  }
}

}  // namespace detail

/// The time set of `f` on the trace, restricted to [0, horizon].
inline TimeSet eval_timeset(const Formula& f, const PLTrace& trace, const AtomMap& atoms, double horizon) {
  detail::require_reach(f, horizon, trace.horizon());
  return detail::ContinuousEvaluator(trace, atoms).eval(f, Interval::closed(0.0, horizon));
}

/// Point form of the continuous semantics; Boolean connectives short-circuit.
inline bool holds_at(const Formula& f, const PLTrace& trace, const AtomMap& atoms, double t) {
  detail::require_reach(f, t, trace.horizon());
  return detail::ContinuousEvaluator(trace, atoms).holds(f, t);
}

}  // namespace mtlsmc

#endif  // MTLSMC_CSEM_HPP
