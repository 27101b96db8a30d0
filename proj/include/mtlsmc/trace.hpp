#ifndef MTLSMC_TRACE_HPP
#define MTLSMC_TRACE_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mtlsmc/timeset.hpp"

namespace mtlsmc {

/// Continuous piecewise-linear path through (t, x) breakpoints, t starting at
/// 0 and strictly increasing.
class PLTrace {
 public:
  PLTrace(std::vector<double> times, std::vector<double> values) : t_(std::move(times)), x_(std::move(values)) {
    if (t_.empty() || t_.size() != x_.size()) throw Error("trace needs matching, nonempty time and value lists");
    if (t_.front() != 0.0) throw Error("trace must start at t = 0");
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (!std::isfinite(t_[i]) || !std::isfinite(x_[i])) throw Error("trace breakpoints must be finite");
      if (i > 0 && !(t_[i] > t_[i - 1])) throw Error("trace times must be strictly increasing");
    }
  }

  PLTrace(std::initializer_list<std::pair<double, double>> points) : PLTrace(split(points)) {}

  std::span<const double> times() const noexcept { return t_; }
  std::span<const double> values() const noexcept { return x_; }
  std::size_t size() const noexcept { return t_.size(); }
  double horizon() const noexcept { return t_.back(); }

  /// Linear interpolation; exact at breakpoints. Requires 0 <= t <= horizon.
  double value_at(double t) const {
    if (t <= 0.0) return x_.front();
    if (t >= horizon()) return x_.back();
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
    if (t == t_[k]) return x_[k];
    return interpolate(k, t);
  }

  double interpolate(std::size_t k, double t) const {
    const double frac = (t - t_[k]) / (t_[k + 1] - t_[k]);
    return x_[k] + (x_[k + 1] - x_[k]) * frac;
  }

 private:
  explicit PLTrace(std::pair<std::vector<double>, std::vector<double>> tx)
      : PLTrace(std::move(tx.first), std::move(tx.second)) {}

  static std::pair<std::vector<double>, std::vector<double>> split(std::initializer_list<std::pair<double, double>> pts) {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& [t, x] : pts) {
      out.first.push_back(t);
      out.second.push_back(x);
    }
    return out;
  }

  std::vector<double> t_;
  std::vector<double> x_;
};

/// Path sampled on the grid N/n: values[k] is the state at time k/n.
class GridTrace {
 public:
  GridTrace(std::int64_t n, std::vector<double> values) : n_(n), x_(std::move(values)) {
    if (n_ < 1) throw Error("grid resolution must be >= 1");
    if (x_.empty()) throw Error("grid trace must be nonempty");
  }

  std::int64_t resolution() const noexcept { return n_; }
  std::span<const double> values() const noexcept { return x_; }
  double value(std::int64_t k) const { return x_[static_cast<std::size_t>(k)]; }
  /// Index of the last grid point.
  std::int64_t last_index() const noexcept { return static_cast<std::int64_t>(x_.size()) - 1; }
  double horizon() const noexcept { return static_cast<double>(last_index()) / static_cast<double>(n_); }

  /// Every `factor`-th point, i.e. the same path on the grid N/(n/factor).
  GridTrace coarsen(std::int64_t factor) const {
    if (factor < 1 || n_ % factor != 0) throw Error("coarsening factor must divide the resolution");
    std::vector<double> v;
    v.reserve(x_.size() / static_cast<std::size_t>(factor) + 1);
    for (std::size_t k = 0; k < x_.size(); k += static_cast<std::size_t>(factor)) v.push_back(x_[k]);
    return GridTrace(n_ / factor, std::move(v));
  }

  PLTrace to_pl() const {
    std::vector<double> t(x_.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k) / static_cast<double>(n_);
    return PLTrace(std::move(t), x_);
  }

 private:
  std::int64_t n_;
  std::vector<double> x_;
};

namespace detail {

// Products n*t that land within this relative distance of an integer are
// treated as that integer, so that e.g. 2.3 * 10 maps to grid index 23.
inline constexpr double kGridSnap = 1e-12;

inline std::int64_t floor_snapped(double x) {
  const double r = std::nearbyint(x);
  if (std::abs(x - r) <= kGridSnap * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(x));
}

inline std::int64_t ceil_snapped(double x) {
  const double r = std::nearbyint(x);
  if (std::abs(x - r) <= kGridSnap * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace detail

/// Index of Lambda_n(t) = floor(n t) / n.
inline std::int64_t lambda_n_index(double t, std::int64_t n) {
  if (t < 0.0 || n < 1) throw Error("lambda_n needs t >= 0 and n >= 1");
  return detail::floor_snapped(t * static_cast<double>(n));
}

inline double lambda_n(double t, std::int64_t n) {
  return static_cast<double>(lambda_n_index(t, n)) / static_cast<double>(n);
}

/// Samples the trace at k/n for every k/n <= horizon.
inline GridTrace grid_project(const PLTrace& trace, std::int64_t n) {
  if (n < 1) throw Error("grid resolution must be >= 1");
  const std::int64_t last = detail::floor_snapped(trace.horizon() * static_cast<double>(n));
  std::vector<double> v(static_cast<std::size_t>(last) + 1);
  for (std::int64_t k = 0; k <= last; ++k) {
    v[static_cast<std::size_t>(k)] = trace.value_at(static_cast<double>(k) / static_cast<double>(n));
  }
  return GridTrace(n, std::move(v));
}

namespace detail {

// Preimage on one monotone linear segment of a single region interval.
inline std::optional<Interval> segment_preimage(double t0, double x0, double t1, double x1, const Interval& region) {
  if (x0 == x1) {
    if (region.contains(x0)) return Interval::closed(t0, t1);
    return std::nullopt;
  }
  const auto cross = [&](double level) {
    const double s = t0 + (t1 - t0) * ((level - x0) / (x1 - x0));
    return std::clamp(s, t0, t1);
  };
  const double lo_x = std::min(x0, x1);
  const double hi_x = std::max(x0, x1);
  const bool rising = x1 > x0;
  // Time at which the path sits at the given level, or the segment end that
  // lies on the same side when the level is outside the segment's range.
  const auto level_time = [&](const Endpoint& e, bool is_lower_level) -> std::optional<Endpoint> {
    const double lv = e.value;
    if (is_lower_level) {
      if (lv < lo_x) return Endpoint{rising ? t0 : t1, true};
      if (lv > hi_x) return std::nullopt;
    } else {
      if (lv > hi_x) return Endpoint{rising ? t1 : t0, true};
      if (lv < lo_x) return std::nullopt;
    }
    if (lv == x0) return Endpoint{t0, e.closed};
    if (lv == x1) return Endpoint{t1, e.closed};
    return Endpoint{cross(lv), e.closed};
  };
  const auto from_lower = level_time(region.lo(), true);
  const auto from_upper = level_time(region.hi(), false);
  if (!from_lower || !from_upper) return std::nullopt;
  return rising ? Interval::try_make(*from_lower, *from_upper) : Interval::try_make(*from_upper, *from_lower);
}

}  // namespace detail

/// {t in window : x(t) in B}, with crossings solved in closed form on each
/// linear segment. The window defaults to [0, horizon].
inline TimeSet atom_timeset(const PLTrace& trace, const RegionSet& region, const Interval& window) {
  const auto t = trace.times();
  const auto x = trace.values();
  std::vector<Interval> raw;
  if (t.size() == 1) {
    if (region.contains(x[0])) raw.push_back(Interval::point(0.0));
  } else {
    const double w_lo = window.lo().value;
    const double w_hi = window.hi().value;
    std::size_t k = 0;
    if (w_lo > 0.0) {
      k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), w_lo) - t.begin());
      k = k == 0 ? 0 : k - 1;
      if (k + 1 >= t.size()) k = t.size() - 2;
    }
    for (; k + 1 < t.size() && t[k] <= w_hi; ++k) {
      for (const Interval& b : region) {
        if (auto piece = detail::segment_preimage(t[k], x[k], t[k + 1], x[k + 1], b)) raw.push_back(*piece);
      }
    }
  }
  return clip(IntervalSet::canonicalize(std::move(raw)), window);
}

inline TimeSet atom_timeset(const PLTrace& trace, const RegionSet& region) {
  return atom_timeset(trace, region, Interval::closed(0.0, trace.horizon()));
}

// ---------------------------------------------------------------------------
// CSV I/O. PL traces: header "t,x" then one "t,x" row per breakpoint. Grid
// traces: a metadata line "n,<resolution>", header "k,x", then rows with
// k = 0, 1, 2, ... in order.

namespace detail {

inline std::pair<double, double> parse_row(const std::string& line, std::size_t lineno) {
  const auto comma = line.find(',');
  if (comma == std::string::npos) throw FormatError("expected two comma-separated fields", lineno);
  auto a = parse_number(std::string_view(line).substr(0, comma));
  auto b = parse_number(std::string_view(line).substr(comma + 1));
  if (!a || !b) throw FormatError("malformed number", lineno);
  return {*a, *b};
}

/// Skips blank lines and # comments.
inline bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (!t.empty() && t.front() != '#') return true;
  }
  return false;
}

}  // namespace detail

inline PLTrace read_pl_trace(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_content_line(in, line, lineno) || detail::trim(line) != "t,x") {
    throw FormatError("expected header 't,x'", lineno);
  }
  std::vector<double> t;
  std::vector<double> x;
  while (detail::next_content_line(in, line, lineno)) {
    auto [ti, xi] = detail::parse_row(line, lineno);
    if (!std::isfinite(ti) || !std::isfinite(xi)) throw FormatError("non-finite value", lineno);
    if (t.empty() && ti != 0.0) throw FormatError("first time must be 0", lineno);
    if (!t.empty() && !(ti > t.back())) throw FormatError("times must be strictly increasing", lineno);
    t.push_back(ti);
    x.push_back(xi);
  }
  if (t.empty()) throw FormatError("trace has no rows", lineno);
  return PLTrace(std::move(t), std::move(x));
}

inline void write_pl_trace(std::ostream& out, const PLTrace& trace) {
  out << "t,x\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << format_number(trace.times()[i]) << "," << format_number(trace.values()[i]) << "\n";
  }
}

inline GridTrace read_grid_trace(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_content_line(in, line, lineno)) throw FormatError("empty grid trace file", lineno);
  const auto comma = line.find(',');
  if (comma == std::string::npos || detail::trim(std::string_view(line).substr(0, comma)) != "n") {
    throw FormatError("expected metadata line 'n,<resolution>'", lineno);
  }
  const auto nval = detail::parse_number(std::string_view(line).substr(comma + 1));
  if (!nval || *nval < 1 || *nval != std::floor(*nval) || *nval > 1e15) {
    throw FormatError("resolution must be a positive integer", lineno);
  }
  const auto n = static_cast<std::int64_t>(*nval);
  if (!detail::next_content_line(in, line, lineno) || detail::trim(line) != "k,x") {
    throw FormatError("expected header 'k,x'", lineno);
  }
  std::vector<double> x;
  while (detail::next_content_line(in, line, lineno)) {
    auto [k, xi] = detail::parse_row(line, lineno);
    if (k != static_cast<double>(x.size())) throw FormatError("grid indices must run 0, 1, 2, ...", lineno);
    if (!std::isfinite(xi)) throw FormatError("non-finite value", lineno);
    x.push_back(xi);
  }
  if (x.empty()) throw FormatError("grid trace has no rows", lineno);
  return GridTrace(n, std::move(x));
}

inline void write_grid_trace(std::ostream& out, const GridTrace& g) {
  out << "n," << g.resolution() << "\nk,x\n";
  for (std::int64_t k = 0; k <= g.last_index(); ++k) out << k << "," << format_number(g.value(k)) << "\n";
}

template <class Reader>
auto read_file(const std::string& path, Reader reader) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'", 0);
  return reader(in);
}

}  // namespace mtlsmc

#endif  // MTLSMC_TRACE_HPP
