#ifndef MTLSMC_TESTS_SUPPORT_HPP
#define MTLSMC_TESTS_SUPPORT_HPP

// Random generators, independent oracles, and property runners shared by the
// unit tests and the acceptance binary.
//
// Random traces use dyadic breakpoints and slopes that are powers of two, and
// regions and windows use half-integer endpoints. Every crossing time and
// every shifted endpoint is then exactly representable, so implementation and
// oracle can be compared at critical points too, not just between them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mtlsmc.hpp"

namespace testkit {

using namespace mtlsmc;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }
  /// Multiple of 1/denom in [lo, hi].
  double grid(double lo, double hi, int denom) {
    return static_cast<double>(integer(static_cast<int>(std::ceil(lo * denom)), static_cast<int>(std::floor(hi * denom)))) /
           denom;
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

struct Tally {
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what) {
    ++cases;
    if (!ok) {
      if (failures == 0) first_failure = what;
      ++failures;
    }
  }
  bool ok() const { return failures == 0; }
};

// ---------------------------------------------------------------------------
// Generators

/// Interval with quarter-integer endpoints in [lo, hi]; points included.
inline Interval random_interval(Rng& r, double lo, double hi) {
  for (;;) {
    const double a = r.grid(lo, hi, 4);
    const double b = r.coin(0.15) ? a : r.grid(lo, hi, 4);
    const bool point = a == b;
    const auto iv = Interval::try_make(std::min(a, b), point || r.coin(), std::max(a, b), point || r.coin());
    if (iv) return *iv;
  }
}

inline IntervalSet random_set(Rng& r, double lo, double hi, int max_parts = 4) {
  std::vector<Interval> raw;
  const int parts = r.integer(0, max_parts);
  for (int i = 0; i < parts; ++i) raw.push_back(random_interval(r, lo, hi));
  return IntervalSet::canonicalize(std::move(raw));
}

/// Positive bounded temporal window with half-integer endpoints in [0, 3].
inline Interval random_window(Rng& r, bool allow_point = true) {
  for (;;) {
    const double a = r.grid(0.0, 2.5, 2);
    const double b = (allow_point && r.coin(0.1)) ? a : r.grid(a + 0.5, 3.0, 2);
    if (a == b) return Interval::point(a);
    if (b <= a) continue;
    return Interval::make(a, r.coin(), b, r.coin());
  }
}

/// State-space region with half-integer endpoints; may be unbounded or a point.
inline RegionSet random_region(Rng& r) {
  std::vector<Interval> raw;
  const int parts = r.integer(1, 2);
  for (int i = 0; i < parts; ++i) {
    const double a = r.grid(-2.0, 2.0, 2);
    const int kind = r.integer(0, 5);
    if (kind == 0) {
      raw.push_back(Interval::make(a, r.coin(), kInf, false));
    } else if (kind == 1) {
      raw.push_back(Interval::make(-kInf, false, a, r.coin()));
    } else if (kind == 2) {
      raw.push_back(Interval::point(a));
    } else {
      const double b = r.grid(a + 0.5, a + 2.5, 2);
      raw.push_back(Interval::make(a, r.coin(), b, r.coin()));
    }
  }
  return RegionSet::canonicalize(std::move(raw));
}

inline AtomMap random_atoms(Rng& r) {
  AtomMap m;
  m.set("p", random_region(r));
  m.set("q", random_region(r));
  return m;
}

struct FormulaShape {
  int depth = 3;
  bool until = true;
  bool point_windows = true;
  bool unbounded_windows = false;
};

inline Formula random_formula(Rng& r, const FormulaShape& shape) {
  const auto window = [&] {
    if (shape.unbounded_windows && r.coin(0.1)) return Interval::make(r.grid(0.0, 2.0, 2), r.coin(), kInf, false);
    return random_window(r, shape.point_windows);
  };
  if (shape.depth <= 0 || r.coin(0.25)) {
    switch (r.integer(0, 9)) {
      case 0: return Formula::top();
      case 1: return Formula::bot();
      default: return Formula::atom(r.coin() ? "p" : "q");
    }
  }
  FormulaShape sub = shape;
  --sub.depth;
  switch (r.integer(0, shape.until ? 6 : 5)) {
    case 0: return Formula::negate(random_formula(r, sub));
    case 1: return Formula::conj(random_formula(r, sub), random_formula(r, sub));
    case 2: return Formula::disj(random_formula(r, sub), random_formula(r, sub));
    case 3:
    case 4: return Formula::diamond(window(), random_formula(r, sub));
    case 5: return Formula::box(window(), random_formula(r, sub));
    default: return Formula::until(window(), random_formula(r, sub), random_formula(r, sub));
  }
}

/// PL trace on [0, >= horizon] with dyadic breakpoints: durations in
/// {1/2, 1, 2}, slopes in {0, +-1/2, +-1, +-2}, start in (1/2)Z.
inline PLTrace random_dyadic_trace(Rng& r, double horizon) {
  static constexpr double kSlopes[] = {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0};
  static constexpr double kDurations[] = {0.5, 1.0, 2.0};
  std::vector<double> t{0.0};
  std::vector<double> x{r.grid(-2.0, 2.0, 2)};
  while (t.back() < horizon) {
    const double d = kDurations[r.integer(0, 2)];
    double s = kSlopes[r.integer(0, 6)];
    if (std::abs(x.back()) > 3.0) s = -std::copysign(1.0, x.back());
    t.push_back(t.back() + d);
    x.push_back(x.back() + s * d);
  }
  return PLTrace(std::move(t), std::move(x));
}

/// PL trace with arbitrary real breakpoints (no exactness guarantees).
inline PLTrace random_real_trace(Rng& r, double horizon) {
  std::vector<double> t{0.0};
  std::vector<double> x{r.uniform(-2.0, 2.0)};
  while (t.back() < horizon) {
    t.push_back(t.back() + r.uniform(0.05, 1.5));
    x.push_back(std::clamp(x.back() + r.uniform(-2.0, 2.0), -3.0, 3.0));
  }
  return PLTrace(std::move(t), std::move(x));
}

inline GridTrace random_grid_trace(Rng& r, std::int64_t n, double horizon) {
  std::vector<double> v(static_cast<std::size_t>(std::ceil(horizon * static_cast<double>(n))) + 1);
  for (double& x : v) x = r.grid(-2.0, 2.0, 2);
  return GridTrace(n, std::move(v));
}

// ---------------------------------------------------------------------------
// Oracles

/// Brute-force point evaluator for the continuous semantics on a PL trace.
/// Truth of every subformula is constant between its critical times, so
/// quantifiers over a window scan the critical times in the window and the
/// midpoints between them.
class PointOracle {
 public:
  PointOracle(const PLTrace& trace, const AtomMap& atoms) : trace_(trace), atoms_(atoms) {}

  bool holds(const Formula& f, double t) {
    switch (f.op()) {
      case Op::Top: return true;
      case Op::Bot: return false;
      case Op::Atom: return atoms_.region(f.name()).contains(value_at(t));
      case Op::Not: return !holds(f.child(), t);
      case Op::And: return holds(f.lhs(), t) && holds(f.rhs(), t);
      case Op::Or: return holds(f.lhs(), t) || holds(f.rhs(), t);
      case Op::Diamond:
      case Op::Box: {
        const Interval& w = f.window();
        for (double u : scan(crit(f.child()), t + w.lo().value, t + w.hi().value)) {
          if (!w.contains(u - t)) continue;
          const bool v = holds(f.child(), u);
          if (f.op() == Op::Diamond && v) return true;
          if (f.op() == Op::Box && !v) return false;
        }
        return f.op() == Op::Box;
      }
      case Op::Until: {
        const Interval& w = f.window();
        std::vector<double> cs = crit(f.lhs());
        const auto& cb = crit(f.rhs());
        cs.insert(cs.end(), cb.begin(), cb.end());
        std::sort(cs.begin(), cs.end());
        for (double u : scan(cs, t + w.lo().value, t + w.hi().value)) {
          if (!w.contains(u - t) || u < t) continue;
          if (holds(f.rhs(), u) && lhs_throughout(f.lhs(), t, u)) return true;
        }
        return false;
      }
    }
    return false;
  }

  /// Times (sorted, in [0, horizon]) where the truth value of f may change.
  const std::vector<double>& crit(const Formula& f) {
    auto it = crit_.find(f.id());
    if (it != crit_.end()) return it->second;
    std::vector<double> c{0.0};
    const auto add_shifted = [&](const std::vector<double>& src, const Interval& w) {
      for (double x : src) {
        c.push_back(x);
        c.push_back(x - w.lo().value);
        c.push_back(x - w.hi().value);
      }
    };
    switch (f.op()) {
      case Op::Top:
      case Op::Bot: break;
      case Op::Atom: {
        const auto t = trace_.times();
        const auto x = trace_.values();
        c.insert(c.end(), t.begin(), t.end());
        for (const Interval& b : atoms_.region(f.name())) {
          for (double level : {b.lo().value, b.hi().value}) {
            if (!std::isfinite(level)) continue;
            for (std::size_t k = 0; k + 1 < t.size(); ++k) {
              if (x[k] == x[k + 1]) continue;
              const double frac = (level - x[k]) / (x[k + 1] - x[k]);
              if (frac > 0.0 && frac < 1.0) {
                const double at = t[k] + frac * (t[k + 1] - t[k]);
                c.push_back(at);
                // the trace equals the level here; re-interpolating could miss it by an ulp
                crossings_.emplace(at, level);
              }
            }
          }
        }
        break;
      }
      case Op::Not: c = crit(f.child()); break;
      case Op::And:
      case Op::Or:
      case Op::Until: {
        const std::vector<double> a = crit(f.lhs());
        const std::vector<double> b = crit(f.rhs());
        if (f.op() == Op::Until) {
          add_shifted(a, f.window());
          add_shifted(b, f.window());
        } else {
          c.insert(c.end(), a.begin(), a.end());
          c.insert(c.end(), b.begin(), b.end());
        }
        break;
      }
      case Op::Diamond:
      case Op::Box: add_shifted(crit(f.child()), f.window()); break;
    }
    std::vector<double> kept;
    for (double x : c) {
      if (x >= 0.0 && x <= trace_.horizon()) kept.push_back(x);
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    return crit_.emplace(f.id(), std::move(kept)).first->second;
  }

 private:
  double value_at(double t) const {
    if (const auto hit = crossings_.find(t); hit != crossings_.end()) return hit->second;
    const auto ts = trace_.times();
    const auto xs = trace_.values();
    if (t >= ts.back()) return xs.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
    if (t == ts[k]) return xs[k];
    return xs[k] + (xs[k + 1] - xs[k]) * ((t - ts[k]) / (ts[k + 1] - ts[k]));
  }

  // Critical times within [lo, hi] plus both ends and every midpoint.
  static std::vector<double> scan(const std::vector<double>& cs, double lo, double hi) {
    std::vector<double> pts{lo, hi};
    for (double c : cs) {
      if (c > lo && c < hi) pts.push_back(c);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i + 1 < m; ++i) pts.push_back(0.5 * (pts[i] + pts[i + 1]));
    return pts;
  }

  bool lhs_throughout(const Formula& a, double t, double u) {
    if (u <= t) return true;
    for (double v : scan(crit(a), t, u)) {
      if (v < u && !holds(a, v)) return false;
    }
    return true;
  }

  const PLTrace& trace_;
  const AtomMap& atoms_;
  std::map<const void*, std::vector<double>> crit_;
  std::map<double, double> crossings_;
};

/// Until by the critical-point sweep: membership is constant between the
/// endpoints of A1 and A2 shifted by the window endpoints, so the predicate
/// is evaluated at each such point and at each midpoint.
inline TimeSet until_sweep(const TimeSet& a1, const TimeSet& a2, const Interval& w, double horizon) {
  const auto in_set = [](const TimeSet& s, double x) {
    for (const Interval& iv : s) {
      if (iv.contains(x)) return true;
    }
    return false;
  };
  // D(t): end of the A1 component holding t, or t itself.
  const auto reach = [&](double t) {
    for (const Interval& iv : a1) {
      if (iv.contains(t)) return iv.hi().value;
    }
    return t;
  };
  const auto member = [&](double t) {
    // candidates u in [t + S, t + T] intersected with [t, D(t)]
    const double lo = t + w.lo().value;
    const double hi = std::min(t + w.hi().value, reach(t));
    if (lo > hi) return false;
    std::vector<double> us{lo, hi, 0.5 * (lo + hi)};
    for (const Interval& iv : a2) {
      for (double e : {iv.lo().value, iv.hi().value}) {
        if (e > lo && e < hi) us.push_back(e);
      }
    }
    std::sort(us.begin(), us.end());
    const std::size_t m = us.size();
    for (std::size_t i = 0; i + 1 < m; ++i) us.push_back(0.5 * (us[i] + us[i + 1]));
    for (double u : us) {
      if (u >= lo && u <= hi && w.contains(u - t) && in_set(a2, u)) return true;
    }
    return false;
  };
  std::vector<double> cp{0.0, horizon};
  for (const TimeSet* s : {&a1, &a2}) {
    for (const Interval& iv : *s) {
      for (double e : {iv.lo().value, iv.hi().value}) {
        for (double sh : {0.0, w.lo().value, w.hi().value}) {
          const double c = e - sh;
          if (c >= 0.0 && c <= horizon) cp.push_back(c);
        }
      }
    }
  }
  std::sort(cp.begin(), cp.end());
  cp.erase(std::unique(cp.begin(), cp.end()), cp.end());
  std::vector<Interval> raw;
  for (std::size_t i = 0; i < cp.size(); ++i) {
    if (member(cp[i])) raw.push_back(Interval::point(cp[i]));
    if (i + 1 < cp.size() && member(0.5 * (cp[i] + cp[i + 1]))) raw.push_back(Interval::open(cp[i], cp[i + 1]));
  }
  return IntervalSet::canonicalize(std::move(raw));
}

/// Literal discrete semantics with no memo and no index precomputation:
/// window membership is decided per offset with exact integer arithmetic on
/// j / n against the window's endpoints scaled to quarter units.
inline bool discrete_oracle(const Formula& f, const GridTrace& g, const AtomMap& atoms, std::int64_t k) {
  const std::int64_t n = g.resolution();
  const auto in_window = [n](const Interval& w, std::int64_t j) {
    // compare j/n with endpoint e (a multiple of 1/4): 4j vs 4e*n
    const auto cmp = [&](double e) {
      const std::int64_t lhs = 4 * j;
      const auto rhs = static_cast<std::int64_t>(std::llround(4.0 * e)) * n;
      return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
    };
    const int lo = cmp(w.lo().value);
    const int hi = std::isfinite(w.hi().value) ? cmp(w.hi().value) : -1;
    return (lo > 0 || (lo == 0 && w.lo().closed)) && (hi < 0 || (hi == 0 && w.hi().closed));
  };
  const std::int64_t last = g.last_index();
  switch (f.op()) {
    case Op::Top: return true;
    case Op::Bot: return false;
    case Op::Atom: return atoms.region(f.name()).contains(g.value(k));
    case Op::Not: return !discrete_oracle(f.child(), g, atoms, k);
    case Op::And: return discrete_oracle(f.lhs(), g, atoms, k) && discrete_oracle(f.rhs(), g, atoms, k);
    case Op::Or: return discrete_oracle(f.lhs(), g, atoms, k) || discrete_oracle(f.rhs(), g, atoms, k);
    case Op::Diamond:
      for (std::int64_t j = 0; k + j <= last; ++j) {
        if (in_window(f.window(), j) && discrete_oracle(f.child(), g, atoms, k + j)) return true;
      }
      return false;
    case Op::Box:
      for (std::int64_t j = 0; k + j <= last; ++j) {
        if (in_window(f.window(), j) && !discrete_oracle(f.child(), g, atoms, k + j)) return false;
      }
      return true;
    case Op::Until:
      for (std::int64_t j = 0; k + j <= last; ++j) {
        if (!in_window(f.window(), j) || !discrete_oracle(f.rhs(), g, atoms, k + j)) continue;
        bool ok = true;
        for (std::int64_t i = k; i < k + j && ok; ++i) ok = discrete_oracle(f.lhs(), g, atoms, i);
        if (ok) return true;
      }
      return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Property runners

inline std::string describe(const Formula& f, const PLTrace& tr, double t) {
  std::string s = to_string(f) + " at t=" + format_number(t) + " on trace";
  for (std::size_t k = 0; k < tr.size(); ++k) {
    s += " (" + format_number(tr.times()[k]) + "," + format_number(tr.values()[k]) + ")";
  }
  return s;
}

/// eval_timeset / holds_at against PointOracle on exact dyadic instances,
/// probing every critical time and every midpoint.
inline Tally check_csem_exact(std::uint64_t seed, int cases, int depth = 3) {
  Rng r(seed);
  Tally tally;
  constexpr double kHorizon = 4.0;
  for (int c = 0; c < cases; ++c) {
    const Formula f = random_formula(r, {depth, true, true, false});
    const AtomMap atoms = random_atoms(r);
    const PLTrace tr = random_dyadic_trace(r, kHorizon + temporal_reach(f) + 0.5);
    const TimeSet ts = eval_timeset(f, tr, atoms, kHorizon);
    PointOracle oracle(tr, atoms);
    std::vector<double> probes;
    for (double x : oracle.crit(f)) {
      if (x <= kHorizon) probes.push_back(x);
    }
    probes.push_back(kHorizon);
    const std::size_t m = probes.size();
    for (std::size_t i = 0; i + 1 < m; ++i) probes.push_back(0.5 * (probes[i] + probes[i + 1]));
    bool ok = true;
    double bad = 0.0;
    for (double t : probes) {
      const bool expect = oracle.holds(f, t);
      if (ts.contains(t) != expect || holds_at(f, tr, atoms, t) != expect) {
        ok = false;
        bad = t;
        break;
      }
    }
    tally.record(ok, ok ? "" : describe(f, tr, bad) + " -> " + to_string(ts));
  }
  return tally;
}

/// Same comparison on traces with arbitrary real breakpoints, at random probe
/// times farther than 1e-6 from any critical time.
inline Tally check_csem_real(std::uint64_t seed, int cases, int probes_per_case = 20) {
  Rng r(seed);
  Tally tally;
  constexpr double kHorizon = 4.0;
  for (int c = 0; c < cases; ++c) {
    const Formula f = random_formula(r, {3, true, false, false});
    const AtomMap atoms = random_atoms(r);
    const PLTrace tr = random_real_trace(r, kHorizon + temporal_reach(f) + 0.5);
    const TimeSet ts = eval_timeset(f, tr, atoms, kHorizon);
    PointOracle oracle(tr, atoms);
    const auto& cs = oracle.crit(f);
    bool ok = true;
    double bad = 0.0;
    for (int i = 0; i < probes_per_case && ok; ++i) {
      const double t = r.uniform(0.0, kHorizon);
      const auto it = std::lower_bound(cs.begin(), cs.end(), t);
      if ((it != cs.end() && *it - t < 1e-6) || (it != cs.begin() && t - *(it - 1) < 1e-6)) continue;
      if (ts.contains(t) != oracle.holds(f, t)) {
        ok = false;
        bad = t;
      }
    }
    tally.record(ok, ok ? "" : describe(f, tr, bad));
  }
  return tally;
}

/// until_timeset against the critical-point sweep.
inline Tally check_until_sweep(std::uint64_t seed, int cases) {
  Rng r(seed);
  Tally tally;
  for (int c = 0; c < cases; ++c) {
    const TimeSet a1 = random_set(r, 0.0, 8.0);
    const TimeSet a2 = random_set(r, 0.0, 8.0);
    const Interval w = random_window(r);
    const double h = r.grid(1.0, 6.0, 2);
    const TimeSet got = until_timeset(a1, a2, w, h);
    const TimeSet want = until_sweep(a1, a2, w, h);
    tally.record(got == want, "A1=" + to_string(a1) + " A2=" + to_string(a2) + " I=" + to_string(w) +
                                  " h=" + format_number(h) + ": got " + to_string(got) + " want " + to_string(want));
  }
  return tally;
}

/// Membership of x in a set given by a plain interval list.
inline bool brute_contains(const std::vector<Interval>& raw, double x) {
  return std::any_of(raw.begin(), raw.end(), [x](const Interval& iv) { return iv.contains(x); });
}

/// Boolean algebra laws, checked structurally and by membership probes.
inline Tally check_algebra_laws(std::uint64_t seed, int cases, int probes = 200) {
  Rng r(seed);
  Tally tally;
  for (int c = 0; c < cases; ++c) {
    const double h = r.grid(2.0, 10.0, 2);
    const TimeSet a = random_set(r, 0.0, 10.0);
    const TimeSet b = random_set(r, 0.0, 10.0);
    const TimeSet d = random_set(r, 0.0, 10.0);
    const Interval u = Interval::closed(0.0, h);
    bool ok = true;
    // De Morgan
    ok = ok && complement(set_union(a, b), h) == set_intersect(complement(a, h), complement(b, h));
    ok = ok && complement(set_intersect(a, b), h) == set_union(complement(a, h), complement(b, h));
    // involution
    ok = ok && complement(complement(a, h), h) == clip(a, u);
    // distributivity
    ok = ok && set_intersect(a, set_union(b, d)) == set_union(set_intersect(a, b), set_intersect(a, d));
    ok = ok && set_union(a, set_intersect(b, d)) == set_intersect(set_union(a, b), set_union(a, d));
    // canonical form is a fixed point
    ok = ok && IntervalSet::canonicalize({a.begin(), a.end()}) == a;
    // membership
    for (int i = 0; i < probes && ok; ++i) {
      const double x = r.coin(0.5) ? r.grid(0.0, 10.0, 4) : r.uniform(0.0, 10.0);
      const bool in_a = a.contains(x);
      const bool in_b = b.contains(x);
      const bool in_u = x <= h;
      ok = set_union(a, b).contains(x) == (in_a || in_b) && set_intersect(a, b).contains(x) == (in_a && in_b) &&
           complement(a, h).contains(x) == (in_u && !in_a);
    }
    tally.record(ok, "A=" + to_string(a) + " B=" + to_string(b) + " C=" + to_string(d) + " h=" + format_number(h));
  }
  return tally;
}

/// diamond_preimage membership against a scan of s over I.
inline Tally check_diamond_points(std::uint64_t seed, int cases, int probes = 100) {
  Rng r(seed);
  Tally tally;
  for (int c = 0; c < cases; ++c) {
    const TimeSet a = random_set(r, 0.0, 10.0);
    const Interval w = random_window(r);
    const double h = 8.0;
    const TimeSet pre = diamond_preimage(a, w, h);
    bool ok = true;
    double bad = 0.0;
    for (int i = 0; i < probes && ok; ++i) {
      const double t = r.coin(0.7) ? r.grid(0.0, h, 8) : r.uniform(0.0, h);
      // scan absolute times u in t + I: the window ends (tested in s), A's
      // endpoints, midpoints between neighbouring candidates, a dense grid
      const double slo = w.lo().value;
      const double shi = w.hi().value;
      bool want = false;
      for (double s : {slo, shi}) want = want || (w.contains(s) && a.contains(t + s));
      std::vector<double> us{t + slo, t + shi};
      for (const Interval& iv : a) {
        for (double e : {iv.lo().value, iv.hi().value}) {
          if (e > t + slo && e < t + shi) us.push_back(e);
        }
      }
      std::sort(us.begin(), us.end());
      const std::size_t m = us.size();
      for (std::size_t k = 0; k + 1 < m; ++k) us.push_back(0.5 * (us[k] + us[k + 1]));
      for (int k = 1; k < 1000; ++k) us.push_back(t + slo + (shi - slo) * k / 1000.0);
      for (std::size_t k = 2; k < us.size() && !want; ++k) want = w.contains(us[k] - t) && a.contains(us[k]);
      if (pre.contains(t) != want) {
        ok = false;
        bad = t;
      }
    }
    tally.record(ok, "A=" + to_string(a) + " I=" + to_string(w) + " t=" + format_number(bad));
  }
  return tally;
}

/// Boundary of a diamond preimage lies in the boundary of A shifted by the
/// window endpoints.
inline Tally check_boundary_inclusion(std::uint64_t seed, int cases) {
  Rng r(seed);
  Tally tally;
  for (int c = 0; c < cases; ++c) {
    const TimeSet a = random_set(r, 0.0, 10.0);
    const Interval w = random_window(r);
    const double h = 6.0;
    const Topology ta = topology(a, 20.0);
    const Topology tp = topology(diamond_preimage(a, w, h), h);
    const TimeSet bound = points(ta.boundary);
    const TimeSet allowed = set_union(shift_minus(bound, w.lo().value), shift_minus(bound, w.hi().value));
    const bool ok = std::all_of(tp.boundary.begin(), tp.boundary.end(), [&](double x) { return allowed.contains(x); });
    tally.record(ok, "A=" + to_string(a) + " I=" + to_string(w));
  }
  return tally;
}

/// debut(B, t + eps) -> debut(B, t) as eps decreases to 0.
inline Tally check_debut_right_continuity(std::uint64_t seed, int cases) {
  Rng r(seed);
  Tally tally;
  for (int c = 0; c < cases; ++c) {
    const TimeSet b = random_set(r, 0.0, 10.0);
    const double t = r.coin(0.6) ? r.grid(0.0, 10.0, 4) : r.uniform(0.0, 10.0);
    const double d0 = debut(b, t);
    bool ok = true;
    double prev_gap = kInf;
    for (int e = 1; e <= 8; ++e) {
      const double eps = std::pow(10.0, -e);
      const double d = debut(b, t + eps);
      if (std::isinf(d0)) {
        ok = ok && std::isinf(d);
        continue;
      }
      const double gap = d - d0;
      ok = ok && gap >= 0.0 && gap <= prev_gap;
      prev_gap = gap;
    }
    if (!std::isinf(d0)) ok = ok && prev_gap <= 1e-8 * (1.0 + std::abs(t));
    tally.record(ok, "B=" + to_string(b) + " t=" + format_number(t));
  }
  return tally;
}

/// eval_timeset(f) == eval_timeset(to_core(f)) and the discrete analogue.
inline Tally check_desugar(std::uint64_t seed, int cases) {
  Rng r(seed);
  Tally tally;
  for (int c = 0; c < cases; ++c) {
    const Formula f = random_formula(r, {3, true, true, false});
    const Formula core = to_core(f);
    const AtomMap atoms = random_atoms(r);
    const double horizon = 3.0;
    const PLTrace tr = random_dyadic_trace(r, horizon + temporal_reach(f) + 0.5);
    bool ok = eval_timeset(f, tr, atoms, horizon) == eval_timeset(core, tr, atoms, horizon);
    const std::int64_t n = r.integer(1, 4);
    const GridTrace g = random_grid_trace(r, n, horizon + temporal_reach(f) + 1.0);
    const auto all_f = eval_all(f, g, atoms);
    const auto all_c = eval_all(core, g, atoms);
    ok = ok && all_f == all_c;
    for (std::int64_t k = 0; ok && k <= static_cast<std::int64_t>(horizon) * n; ++k) {
      ok = eval_holds_index(f, g, atoms, k) == eval_holds_index(core, g, atoms, k);
    }
    tally.record(ok, to_string(f));
  }
  return tally;
}

/// First index with value >= 1, or -1.
inline std::int64_t first_hit(const GridTrace& g) {
  for (std::int64_t k = 0; k <= g.last_index(); ++k) {
    if (g.value(k) >= 1.0) return k;
  }
  return -1;
}

/// Grid trace below 1 before a random first passage index >= 6n, arbitrary
/// afterwards.
inline GridTrace random_late_passage_trace(Rng& r, std::int64_t n, double horizon) {
  const auto last = static_cast<std::int64_t>(std::ceil(horizon * static_cast<double>(n)));
  const std::int64_t tau = r.integer(static_cast<int>(6 * n), static_cast<int>(last - 8 * n));
  std::vector<double> v(static_cast<std::size_t>(last) + 1);
  for (std::int64_t k = 0; k <= last; ++k) {
    if (k < tau) {
      v[static_cast<std::size_t>(k)] = r.uniform(-3.0, 0.999);
    } else if (k == tau) {
      v[static_cast<std::size_t>(k)] = r.uniform(1.0, 2.0);
    } else {
      v[static_cast<std::size_t>(k)] = r.uniform(-1.0, 3.0);
    }
  }
  return GridTrace(n, std::move(v));
}

/// The discrete truth pattern of the isolated-point formula around tau - 5.
inline Tally check_discrete_isolated_pattern(std::uint64_t seed, int cases) {
  Rng r(seed);
  Tally tally;
  const Formula phi1 = counterexample_formulas().isolated;
  const AtomMap atoms{{"p", Interval::make(1.0, true, kInf, false)}};
  static constexpr std::int64_t kNs[] = {2, 3, 4, 8, 16, 32};
  for (int c = 0; c < cases; ++c) {
    const std::int64_t n = kNs[r.integer(0, 5)];
    const GridTrace g = random_late_passage_trace(r, n, 24.0);
    const std::int64_t tau = first_hit(g);
    const auto truth = eval_all(phi1, g, atoms);
    bool ok = true;
    // indices up to tau - 2 - 2/n, i.e. tau - 2n - 2
    for (std::int64_t k = 0; k <= tau - 2 * n - 2 && ok; ++k) {
      const bool expect = k == tau - 5 * n || k == tau - 5 * n + 1;
      ok = truth[static_cast<std::size_t>(k)] == (expect ? Truth::True : Truth::False);
    }
    tally.record(ok, "n=" + std::to_string(n) + " tau index " + std::to_string(tau));
  }
  return tally;
}

/// Ramp trace satisfying the isolated-point hypotheses: strictly below 1 before
/// a dyadic crossing time tau >= 6, strictly above 1 right after it.
inline PLTrace random_isolated_point_ramp(Rng& r, double& tau) {
  tau = r.grid(6.0, 12.0, 64);
  std::vector<double> t{0.0};
  std::vector<double> x{r.grid(-2.0, 0.5, 8)};
  // wander below 1 with dyadic breakpoints
  while (t.back() + 0.5 < tau - 0.25) {
    const double next = std::min(tau - 0.25, t.back() + r.grid(0.25, 2.0, 4));
    t.push_back(next);
    x.push_back(r.grid(-2.0, 0.75, 8));
  }
  // last approach: from below 1 to exactly 1 at tau
  const double slope = std::ldexp(1.0, r.integer(-2, 2));
  t.push_back(tau);
  x.push_back(1.0);
  const double up = std::ldexp(1.0, r.integer(-3, 1));
  t.push_back(tau + up / slope);
  x.push_back(1.0 + up);
  t.push_back(tau + 16.0);
  x.push_back(r.grid(-1.0, 3.0, 8));
  // the segment into tau must start below 1; patch the previous point if needed
  x[x.size() - 4] = std::min(x[x.size() - 4], 0.75);
  return PLTrace(std::move(t), std::move(x));
}

}  // namespace testkit

#endif  // MTLSMC_TESTS_SUPPORT_HPP
