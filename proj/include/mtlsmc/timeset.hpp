#ifndef MTLSMC_TIMESET_HPP
#define MTLSMC_TIMESET_HPP

// Finite unions of intervals on the extended real line, with open/closed
// endpoint flags. The same structure carries time sets (subsets of [0, inf))
// and state-space regions (subsets of R).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtlsmc/error.hpp"

namespace mtlsmc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Endpoint {
  double value = 0.0;
  bool closed = false;

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// Nonempty interval <lo, hi>. Infinite endpoints are always open; a
/// degenerate interval (lo == hi) is a closed point.
class Interval {
 public:
  static std::optional<Interval> try_make(double lo, bool lo_closed, double hi, bool hi_closed) {
    if (std::isnan(lo) || std::isnan(hi)) return std::nullopt;
    if ((std::isinf(lo) && lo_closed) || (std::isinf(hi) && hi_closed)) return std::nullopt;
    if (lo > hi) return std::nullopt;
    if (lo == hi && !(lo_closed && hi_closed)) return std::nullopt;
    return Interval({lo, lo_closed}, {hi, hi_closed});
  }

  static std::optional<Interval> try_make(Endpoint lo, Endpoint hi) {
    return try_make(lo.value, lo.closed, hi.value, hi.closed);
  }

  /// Throws EmptyInterval when the described set is empty or malformed.
  static Interval make(double lo, bool lo_closed, double hi, bool hi_closed) {
    if (auto iv = try_make(lo, lo_closed, hi, hi_closed)) return *iv;
    throw EmptyInterval("empty or malformed interval " + describe(lo, lo_closed, hi, hi_closed));
  }

  static Interval closed(double lo, double hi) { return make(lo, true, hi, true); }
  static Interval open(double lo, double hi) { return make(lo, false, hi, false); }
  static Interval closed_open(double lo, double hi) { return make(lo, true, hi, false); }
  static Interval open_closed(double lo, double hi) { return make(lo, false, hi, true); }
  static Interval point(double x) { return make(x, true, x, true); }
  static Interval line() { return Interval({-kInf, false}, {kInf, false}); }
  static Interval half_line() { return Interval({0.0, true}, {kInf, false}); }

  const Endpoint& lo() const noexcept { return lo_; }
  const Endpoint& hi() const noexcept { return hi_; }

  bool is_point() const noexcept { return lo_.value == hi_.value; }
  bool bounded() const noexcept { return std::isfinite(lo_.value) && std::isfinite(hi_.value); }

  bool contains(double t) const noexcept {
    const bool above = lo_.closed ? t >= lo_.value : t > lo_.value;
    const bool below = hi_.closed ? t <= hi_.value : t < hi_.value;
    return above && below;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Interval(Endpoint lo, Endpoint hi) : lo_(lo), hi_(hi) {}

  static std::string describe(double lo, bool lc, double hi, bool hc) {
    return std::string(lc ? "[" : "(") + std::to_string(lo) + "," + std::to_string(hi) + (hc ? "]" : ")");
  }

  Endpoint lo_;
  Endpoint hi_;
};

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  Endpoint lo = a.lo();
  if (b.lo().value > lo.value) {
    lo = b.lo();
  } else if (b.lo().value == lo.value) {
    lo.closed = lo.closed && b.lo().closed;
  }
  Endpoint hi = a.hi();
  if (b.hi().value < hi.value) {
    hi = b.hi();
  } else if (b.hi().value == hi.value) {
    hi.closed = hi.closed && b.hi().closed;
  }
  return Interval::try_make(lo, hi);
}

namespace detail {

inline bool lo_before(const Interval& a, const Interval& b) {
  if (a.lo().value != b.lo().value) return a.lo().value < b.lo().value;
  return a.lo().closed && !b.lo().closed;
}

// Input sorted by lower endpoint. Values within `tol` of each other are
// treated as equal when deciding whether two neighbours touch.
inline std::vector<Interval> merge_sorted(std::span<const Interval> sorted, double tol) {
  std::vector<Interval> out;
  out.reserve(sorted.size());
  for (const Interval& next : sorted) {
    if (out.empty()) {
      out.push_back(next);
      continue;
    }
    Interval& cur = out.back();
    const double gap = next.lo().value - cur.hi().value;
    bool merge = false;
    if (gap < -tol) {
      merge = true;
    } else if (gap <= tol) {
      merge = next.lo().closed || cur.hi().closed || (tol > 0.0 && gap < 0.0);
    }
    if (!merge) {
      out.push_back(next);
      continue;
    }
    Endpoint hi = cur.hi();
    if (next.hi().value > hi.value) {
      hi = next.hi();
    } else if (next.hi().value == hi.value) {
      hi.closed = hi.closed || next.hi().closed;
    }
    cur = *Interval::try_make(cur.lo(), hi);
  }
  return out;
}

}  // namespace detail

/// Canonical finite union of intervals: sorted, pairwise disjoint, and no two
/// neighbours mergeable. TimeSet and RegionSet are the same type; a TimeSet is
/// additionally contained in [0, inf).
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(Interval iv) : intervals_{iv} {}  // NOLINT(google-explicit-constructor)

  static IntervalSet canonicalize(std::vector<Interval> raw, double tol = 0.0) {
    std::sort(raw.begin(), raw.end(), detail::lo_before);
    IntervalSet s;
    s.intervals_ = detail::merge_sorted(raw, tol);
    return s;
  }

  static IntervalSet line() { return IntervalSet(Interval::line()); }

  std::span<const Interval> intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return intervals_.size(); }
  bool empty() const noexcept { return intervals_.empty(); }
  auto begin() const noexcept { return intervals_.begin(); }
  auto end() const noexcept { return intervals_.end(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }

  bool contains(double t) const noexcept {
    // First interval whose upper end is not strictly left of t.
    auto it = std::lower_bound(intervals_.begin(), intervals_.end(), t,
                               [](const Interval& iv, double x) { return iv.hi().value < x; });
    for (; it != intervals_.end() && it->lo().value <= t; ++it) {
      if (it->contains(t)) return true;
    }
    return false;
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

using TimeSet = IntervalSet;
using RegionSet = IntervalSet;

inline IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> raw(a.begin(), a.end());
  raw.insert(raw.end(), b.begin(), b.end());
  return IntervalSet::canonicalize(std::move(raw));
}

inline IntervalSet set_intersect(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (auto iv = intersect(a[i], b[j])) out.push_back(*iv);
    const Endpoint& ha = a[i].hi();
    const Endpoint& hb = b[j].hi();
    if (ha.value < hb.value || (ha.value == hb.value && !ha.closed)) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalSet::canonicalize(std::move(out));
}

inline IntervalSet clip(const IntervalSet& a, const Interval& window) {
  return set_intersect(a, IntervalSet(window));
}

/// Complement relative to the universe `within`.
inline IntervalSet complement(const IntervalSet& a, const Interval& within) {
  std::vector<Interval> gaps;
  Endpoint gap_lo{-kInf, false};
  for (const Interval& iv : a) {
    if (auto g = Interval::try_make(gap_lo, {iv.lo().value, !iv.lo().closed})) gaps.push_back(*g);
    gap_lo = {iv.hi().value, !iv.hi().closed};
  }
  if (auto g = Interval::try_make(gap_lo, {kInf, false})) gaps.push_back(*g);
  return clip(IntervalSet::canonicalize(std::move(gaps)), within);
}

/// Complement within [0, horizon].
inline IntervalSet complement(const IntervalSet& a, double horizon) {
  return complement(a, Interval::closed(0.0, horizon));
}

/// Complement within the whole real line (for state-space regions).
inline IntervalSet complement_line(const IntervalSet& a) { return complement(a, Interval::line()); }

inline void require_positive_window(const Interval& window) {
  if (window.lo().value < 0.0) throw Error("temporal window must lie in [0, inf)");
}

/// {t in `within` : exists s in I with t + s in A}.
inline IntervalSet diamond_preimage(const IntervalSet& a, const Interval& window, const Interval& within) {
  require_positive_window(window);
  if (!std::isfinite(window.hi().value)) {
    throw UnboundedWindow("diamond window with infinite upper bound; clip it to the horizon explicitly");
  }
  const Endpoint& s = window.lo();
  const Endpoint& t = window.hi();
  std::vector<Interval> raw;
  raw.reserve(a.size());
  for (const Interval& iv : a) {
    const Endpoint lo{iv.lo().value - t.value, t.closed && iv.lo().closed};
    const Endpoint hi{iv.hi().value - s.value, s.closed && iv.hi().closed};
    if (auto r = Interval::try_make(lo, hi)) raw.push_back(*r);
  }
  return clip(IntervalSet::canonicalize(std::move(raw)), within);
}

inline IntervalSet diamond_preimage(const IntervalSet& a, const Interval& window, double horizon) {
  return diamond_preimage(a, window, Interval::closed(0.0, horizon));
}

/// inf{s > t : s in B}, or +inf when no such s exists. The infimum need not
/// belong to B.
inline double debut(const IntervalSet& b, double t) {
  auto it = std::upper_bound(b.begin(), b.end(), t,
                             [](double x, const Interval& iv) { return x < iv.hi().value; });
  if (it == b.end()) return kInf;
  return it->lo().value > t ? it->lo().value : t;
}

struct Topology {
  IntervalSet interior;
  IntervalSet closure;
  std::vector<double> boundary;
};

/// Interior, closure and boundary in the subspace topology of [0, horizon].
inline Topology topology(const IntervalSet& a, double horizon) {
  const Interval space = Interval::closed(0.0, horizon);
  const IntervalSet inside = clip(a, space);
  std::vector<Interval> cl;
  std::vector<Interval> in;
  for (const Interval& iv : inside) {
    cl.push_back(Interval::closed(iv.lo().value, iv.hi().value));
    const bool keep_lo = iv.lo().closed && iv.lo().value == 0.0;
    const bool keep_hi = iv.hi().closed && iv.hi().value == horizon;
    if (auto r = Interval::try_make(iv.lo().value, keep_lo, iv.hi().value, keep_hi)) in.push_back(*r);
  }
  Topology topo{IntervalSet::canonicalize(std::move(in)), IntervalSet::canonicalize(std::move(cl)), {}};
  for (const Interval& iv : set_intersect(topo.closure, complement(topo.interior, space))) {
    topo.boundary.push_back(iv.lo().value);
    if (!iv.is_point()) topo.boundary.push_back(iv.hi().value);
  }
  return topo;
}

/// {t - c : t in A} intersected with [0, inf).
inline IntervalSet shift_minus(const IntervalSet& a, double c) {
  std::vector<Interval> raw;
  raw.reserve(a.size());
  for (const Interval& iv : a) {
    raw.push_back(*Interval::try_make(Endpoint{iv.lo().value - c, iv.lo().closed},
                                      Endpoint{iv.hi().value - c, iv.hi().closed}));
  }
  return clip(IntervalSet::canonicalize(std::move(raw)), Interval::half_line());
}

inline IntervalSet points(std::span<const double> xs) {
  std::vector<Interval> raw;
  for (double x : xs) raw.push_back(Interval::point(x));
  return IntervalSet::canonicalize(std::move(raw));
}

// ---------------------------------------------------------------------------
// Textual notation: "[a,b]", "(a,b)", "[a,b)", "(a,b]", "{x}", "inf"/"-inf";
// sets are comma-separated lists, "empty" for the empty set.

inline std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string to_string(const Interval& iv) {
  if (iv.is_point()) return "{" + format_number(iv.lo().value) + "}";
  return std::string(iv.lo().closed ? "[" : "(") + format_number(iv.lo().value) + "," +
         format_number(iv.hi().value) + (iv.hi().closed ? "]" : ")");
}

inline std::string to_string(const IntervalSet& s) {
  if (s.empty()) return "empty";
  std::string out;
  for (const Interval& iv : s) {
    if (!out.empty()) out += ", ";
    out += to_string(iv);
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  bool neg = false;
  if (s.front() == '+' || s.front() == '-') {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s == "inf" || s == "infinity") return neg ? -kInf : kInf;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || std::isnan(v)) return std::nullopt;
  return neg ? -v : v;
}

}  // namespace detail

/// Parses one interval in bracket notation. Throws FormatError on malformed
/// text and EmptyInterval on a well-formed but empty interval.
inline Interval parse_interval(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (s.size() >= 3 && s.front() == '{' && s.back() == '}') {
    auto x = detail::parse_number(s.substr(1, s.size() - 2));
    if (!x) throw FormatError("bad point notation '" + std::string(s) + "'", 0);
    return Interval::point(*x);
  }
  if (s.size() < 5 || (s.front() != '[' && s.front() != '(') || (s.back() != ']' && s.back() != ')')) {
    throw FormatError("bad interval notation '" + std::string(s) + "'", 0);
  }
  const std::string_view body = s.substr(1, s.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos) {
    throw FormatError("bad interval notation '" + std::string(s) + "'", 0);
  }
  auto lo = detail::parse_number(body.substr(0, comma));
  auto hi = detail::parse_number(body.substr(comma + 1));
  if (!lo || !hi) throw FormatError("bad interval bound in '" + std::string(s) + "'", 0);
  return Interval::make(*lo, s.front() == '[', *hi, s.back() == ']');
}

inline IntervalSet parse_interval_set(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (s.empty() || s == "empty") return {};
  std::vector<Interval> raw;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    const char c = i < s.size() ? s[i] : ',';
    if (c == '[' || c == '(' || c == '{') ++depth;
    if (c == ']' || c == ')' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      raw.push_back(parse_interval(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw FormatError("unbalanced brackets in '" + std::string(s) + "'", 0);
  return IntervalSet::canonicalize(std::move(raw));
}

}  // namespace mtlsmc

#endif  // MTLSMC_TIMESET_HPP
