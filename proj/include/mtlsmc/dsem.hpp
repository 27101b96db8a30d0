#ifndef MTLSMC_DSEM_HPP
#define MTLSMC_DSEM_HPP

// Discrete-time semantics on the grid N/n. Time windows are converted to
// integer index ranges once; all later arithmetic is on grid indices.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mtlsmc/atoms.hpp"
#include "mtlsmc/formula.hpp"
#include "mtlsmc/trace.hpp"

namespace mtlsmc {

/// Offsets j with j/n in the window; empty when first > last.
struct IndexWindow {
  std::int64_t first = 0;
  std::int64_t last = -1;

  bool empty() const noexcept { return first > last; }
};

inline IndexWindow index_window(const Interval& w, std::int64_t n) {
  if (!std::isfinite(w.hi().value)) throw UnboundedWindow("unbounded window " + to_string(w));
  const double nd = static_cast<double>(n);
  const double lo = w.lo().value * nd;
  const double hi = w.hi().value * nd;
  IndexWindow iw;
  iw.first = w.lo().closed ? detail::ceil_snapped(lo) : detail::floor_snapped(lo) + 1;
  iw.last = w.hi().closed ? detail::floor_snapped(hi) : detail::ceil_snapped(hi) - 1;
  iw.first = std::max<std::int64_t>(iw.first, 0);
  return iw;
}

/// Number of grid steps beyond k that evaluating `f` at k may read.
inline std::int64_t index_reach(const Formula& f, std::int64_t n) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Atom: return 0;
    case Op::Not: return index_reach(f.child(), n);
    case Op::And:
    case Op::Or: return std::max(index_reach(f.lhs(), n), index_reach(f.rhs(), n));
    case Op::Diamond:
    case Op::Box: return std::max<std::int64_t>(index_window(f.window(), n).last, 0) + index_reach(f.child(), n);
    case Op::Until:
      return std::max<std::int64_t>(index_window(f.window(), n).last, 0) +
             std::max(index_reach(f.lhs(), n), index_reach(f.rhs(), n));
  }
  return 0;
}

/// Grid index of t; throws OffGrid unless t is (within rounding) k/n.
inline std::int64_t grid_index(double t, std::int64_t n) {
  const double x = t * static_cast<double>(n);
  const double k = std::nearbyint(x);
  if (t < 0.0 || std::abs(x - k) > detail::kGridSnap * std::max(1.0, std::abs(x))) {
    throw OffGrid("time " + format_number(t) + " is not on the grid N/" + std::to_string(n));
  }
  return static_cast<std::int64_t>(k);
}

namespace detail {

// Literal recursive evaluation with a per-node memo so shared subformulas and
// overlapping windows are evaluated once per grid index.
class DiscreteEvaluator {
 public:
  DiscreteEvaluator(const GridTrace& g, const AtomMap& atoms) : g_(g), atoms_(atoms) {}

  bool holds(const Formula& f, std::int64_t k) {
    switch (f.op()) {
      case Op::Top: return true;
      case Op::Bot: return false;
      case Op::Atom: return atoms_.region(f.name()).contains(g_.value(k));
      case Op::Not: return !holds(f.child(), k);
      case Op::And: return holds(f.lhs(), k) && holds(f.rhs(), k);
      case Op::Or: return holds(f.lhs(), k) || holds(f.rhs(), k);
      default: break;
    }
    auto& memo = memo_[f.id()];
    if (memo.empty()) memo.assign(static_cast<std::size_t>(g_.last_index()) + 1, kUnknown);
    auto& slot = memo[static_cast<std::size_t>(k)];
    if (slot == kUnknown) slot = temporal(f, k) ? 1 : 0;
    return slot == 1;
  }

 private:
  static constexpr std::int8_t kUnknown = -1;

  bool temporal(const Formula& f, std::int64_t k) {
    const IndexWindow w = window(f);
    switch (f.op()) {
      case Op::Diamond:
        for (std::int64_t j = w.first; j <= w.last; ++j) {
          if (holds(f.child(), k + j)) return true;
        }
        return false;
      case Op::Box:
        for (std::int64_t j = w.first; j <= w.last; ++j) {
          if (!holds(f.child(), k + j)) return false;
        }
        return true;
      case Op::Until: {
        // exists j in window: rhs at k+j and lhs on every index in [k, k+j)
        for (std::int64_t i = k; i < k + w.first; ++i) {
          if (!holds(f.lhs(), i)) return false;
        }
        for (std::int64_t j = w.first; j <= w.last; ++j) {
          if (holds(f.rhs(), k + j)) return true;
          if (!holds(f.lhs(), k + j)) return false;
        }
        return false;
      }
      default: return false;
    }
  }

  IndexWindow window(const Formula& f) {
    auto it = windows_.find(f.id());
    if (it == windows_.end()) it = windows_.emplace(f.id(), index_window(f.window(), g_.resolution())).first;
    return it->second;
  }

  const GridTrace& g_;
  const AtomMap& atoms_;
  std::unordered_map<const void*, std::vector<std::int8_t>> memo_;
  std::unordered_map<const void*, IndexWindow> windows_;
};

}  // namespace detail

inline bool eval_holds_index(const Formula& f, const GridTrace& g, const AtomMap& atoms, std::int64_t k) {
  if (k < 0 || k > g.last_index()) throw HorizonExceeded("grid index outside the trace");
  const std::int64_t reach = index_reach(f, g.resolution());
  if (k + reach > g.last_index()) {
    throw HorizonExceeded("formula needs grid index " + std::to_string(k + reach) + " but the trace ends at " +
                          std::to_string(g.last_index()));
  }
  return detail::DiscreteEvaluator(g, atoms).holds(f, k);
}

/// Discrete satisfaction at grid time t.
inline bool eval_holds(const Formula& f, const GridTrace& g, const AtomMap& atoms, double t) {
  return eval_holds_index(f, g, atoms, grid_index(t, g.resolution()));
}

enum class Truth : std::int8_t { False = 0, True = 1, Undefined = -1 };

namespace detail {

using Column = std::vector<std::uint8_t>;

inline std::vector<std::int64_t> prefix_counts(const Column& c) {
  std::vector<std::int64_t> p(c.size() + 1, 0);
  for (std::size_t i = 0; i < c.size(); ++i) p[i + 1] = p[i] + c[i];
  return p;
}

// Values at every index where the formula's windows fit in the trace.
inline Column eval_column(const Formula& f, const GridTrace& g, const AtomMap& atoms) {
  const std::int64_t n = g.resolution();
  const std::int64_t defined = g.last_index() - index_reach(f, n) + 1;
  const std::size_t len = defined > 0 ? static_cast<std::size_t>(defined) : 0;
  Column out(len, 0);
  switch (f.op()) {
    case Op::Top: std::fill(out.begin(), out.end(), 1); break;
    case Op::Bot: break;
    case Op::Atom: {
      const RegionSet& r = atoms.region(f.name());
      for (std::size_t k = 0; k < len; ++k) out[k] = r.contains(g.values()[k]) ? 1 : 0;
      break;
    }
    case Op::Not: {
      const Column c = eval_column(f.child(), g, atoms);
      for (std::size_t k = 0; k < len; ++k) out[k] = c[k] ? 0 : 1;
      break;
    }
    case Op::And:
    case Op::Or: {
      const Column a = eval_column(f.lhs(), g, atoms);
      const Column b = eval_column(f.rhs(), g, atoms);
      for (std::size_t k = 0; k < len; ++k) out[k] = f.op() == Op::And ? (a[k] & b[k]) : (a[k] | b[k]);
      break;
    }
    case Op::Diamond:
    case Op::Box: {
      const IndexWindow w = index_window(f.window(), n);
      const Column c = eval_column(f.child(), g, atoms);
      const auto p = prefix_counts(c);
      const std::int64_t width = w.empty() ? 0 : w.last - w.first + 1;
      for (std::size_t k = 0; k < len; ++k) {
        std::int64_t hits = 0;
        if (!w.empty()) {
          const auto ki = static_cast<std::int64_t>(k);
          hits = p[static_cast<std::size_t>(ki + w.last + 1)] - p[static_cast<std::size_t>(ki + w.first)];
        }
        out[k] = f.op() == Op::Diamond ? (hits > 0) : (hits == width);
      }
      break;
    }
    case Op::Until: {
      const IndexWindow w = index_window(f.window(), n);
      const Column a = eval_column(f.lhs(), g, atoms);
      const Column b = eval_column(f.rhs(), g, atoms);
      if (w.empty()) break;
      // next_false[i]: first index >= i where lhs fails (a.size() if none)
      std::vector<std::int64_t> next_false(a.size() + 1);
      next_false[a.size()] = static_cast<std::int64_t>(a.size());
      for (std::size_t i = a.size(); i-- > 0;) {
        next_false[i] = a[i] ? next_false[i + 1] : static_cast<std::int64_t>(i);
      }
      const auto pb = prefix_counts(b);
      for (std::size_t k = 0; k < len; ++k) {
        const auto ki = static_cast<std::int64_t>(k);
        const std::int64_t upper = std::min(w.last, next_false[k] - ki);
        if (upper < w.first) continue;
        out[k] = pb[static_cast<std::size_t>(ki + upper + 1)] - pb[static_cast<std::size_t>(ki + w.first)] > 0;
      }
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Discrete satisfaction at every grid index; indices whose windows run past
/// the end of the trace are Undefined.
inline std::vector<Truth> eval_all(const Formula& f, const GridTrace& g, const AtomMap& atoms) {
  const detail::Column c = detail::eval_column(f, g, atoms);
  std::vector<Truth> out(static_cast<std::size_t>(g.last_index()) + 1, Truth::Undefined);
  for (std::size_t k = 0; k < c.size(); ++k) out[k] = c[k] ? Truth::True : Truth::False;
  return out;
}

}  // namespace mtlsmc

#endif  // MTLSMC_DSEM_HPP
