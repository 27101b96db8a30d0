#ifndef MTLSMC_STOCHASTIC_HPP
#define MTLSMC_STOCHASTIC_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/normal_distribution.hpp>

#include "mtlsmc/trace.hpp"

namespace mtlsmc {

/// Identifies one sample path: a pure function of (master, index).
struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t index = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent master seed for a named sub-stream.
inline std::uint64_t substream(std::uint64_t master, std::uint64_t tag) { return splitmix64(master ^ splitmix64(tag)); }

/// Per-path engine keyed by (master, index).
inline std::mt19937_64 path_engine(const SeedSpec& seed) {
  const std::uint64_t a = splitmix64(seed.master);
  const std::uint64_t b = splitmix64(a ^ seed.index);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

inline std::int64_t grid_points_for(double horizon, std::int64_t n) {
  if (n < 1 || !(horizon > 0.0)) throw Error("sampling needs n >= 1 and horizon > 0");
  return detail::ceil_snapped(horizon * static_cast<double>(n));
}

/// Brownian motion on N/n up to the first grid time >= horizon, built from
/// exact N(0, 1/n) increments.
inline GridTrace sample_brownian(std::int64_t n, double horizon, double x0, const SeedSpec& seed) {
  const std::int64_t last = grid_points_for(horizon, n);
  auto engine = path_engine(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  const double step = std::sqrt(1.0 / static_cast<double>(n));
  std::vector<double> v(static_cast<std::size_t>(last) + 1);
  v[0] = x0;
  for (std::size_t k = 1; k < v.size(); ++k) v[k] = v[k - 1] + step * normal(engine);
  return GridTrace(n, std::move(v));
}

/// dX = b(X) dt + sigma(X) dW, X_0 = x0.
struct SdeSpec {
  std::function<double(double)> drift;
  std::function<double(double)> diffusion;
  double x0 = 0.0;
  std::string name;
};

/// Euler-Maruyama with step 1/n.
inline GridTrace sample_sde_euler(const SdeSpec& spec, std::int64_t n, double horizon, const SeedSpec& seed) {
  const std::int64_t last = grid_points_for(horizon, n);
  auto engine = path_engine(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  const double dt = 1.0 / static_cast<double>(n);
  const double sdt = std::sqrt(dt);
  std::vector<double> v(static_cast<std::size_t>(last) + 1);
  v[0] = spec.x0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    const double x = v[k - 1];
    const double b = spec.drift(x);
    const double s = spec.diffusion(x);
    if (!std::isfinite(b) || !std::isfinite(s)) {
      throw NonFiniteState("drift or diffusion is not finite at x = " + format_number(x));
    }
    v[k] = x + b * dt + s * sdt * normal(engine);
    if (!std::isfinite(v[k])) throw NonFiniteState("state diverged at step " + std::to_string(k));
  }
  return GridTrace(n, std::move(v));
}

/// Named path model from the built-in catalog: "bm", "ou(theta)",
/// "const-sigma(c)", "drift(mu)". Brownian motion is sampled exactly, the
/// others by Euler-Maruyama.
class Sampler {
 public:
  static Sampler parse(const std::string& text, double x0) {
    const auto open = text.find('(');
    const std::string name = text.substr(0, open);
    double param = 0.0;
    if (open != std::string::npos) {
      if (text.back() != ')') throw Error("bad sampler '" + text + "'");
      auto p = detail::parse_number(std::string_view(text).substr(open + 1, text.size() - open - 2));
      if (!p || !std::isfinite(*p)) throw Error("bad sampler parameter in '" + text + "'");
      param = *p;
    } else if (name != "bm") {
      throw Error("sampler '" + name + "' needs a parameter");
    }
    if (name == "bm") return brownian(x0);
    if (name == "ou") return ornstein_uhlenbeck(param, x0);
    if (name == "const-sigma") return constant_sigma(param, x0);
    if (name == "drift") return drifted(param, x0);
    throw Error("unknown sampler '" + name + "' (known: bm, ou(theta), const-sigma(c), drift(mu))");
  }

  static Sampler brownian(double x0) {
    return Sampler({[](double) { return 0.0; }, [](double) { return 1.0; }, x0, "bm"}, true);
  }
  static Sampler ornstein_uhlenbeck(double theta, double x0) {
    return Sampler({[theta](double x) { return -theta * x; }, [](double) { return 1.0; }, x0,
                    "ou(" + format_number(theta) + ")"},
                   false);
  }
  static Sampler constant_sigma(double c, double x0) {
    return Sampler({[](double) { return 0.0; }, [c](double) { return c; }, x0, "const-sigma(" + format_number(c) + ")"},
                   false);
  }
  static Sampler drifted(double mu, double x0) {
    return Sampler({[mu](double) { return mu; }, [](double) { return 1.0; }, x0, "drift(" + format_number(mu) + ")"},
                   false);
  }
  static Sampler sde(SdeSpec spec) { return Sampler(std::move(spec), false); }

  GridTrace sample(std::int64_t n, double horizon, const SeedSpec& seed) const {
    return exact_ ? sample_brownian(n, horizon, spec_.x0, seed) : sample_sde_euler(spec_, n, horizon, seed);
  }

  const SdeSpec& spec() const noexcept { return spec_; }
  const std::string& name() const noexcept { return spec_.name; }
  bool exact() const noexcept { return exact_; }

 private:
  Sampler(SdeSpec spec, bool exact) : spec_(std::move(spec)), exact_(exact) {}

  SdeSpec spec_;
  bool exact_;
};

struct AssumptionReport {
  double min_abs_diffusion = 0.0;
  double lipschitz_estimate = 0.0;
  double max_abs_drift = 0.0;
  bool pass = true;
  std::vector<std::string> warnings;
};

/// Numeric spot-check of the regularity conditions on (b, sigma) over a probe
/// grid: sigma bounded away from zero, sigma Lipschitz, b bounded. Advisory
/// only; a pass is not a proof.
inline AssumptionReport validate_sde_assumptions(const SdeSpec& spec, const Interval& probe, std::size_t samples) {
  if (!probe.bounded() || samples < 3) throw Error("assumption check needs a bounded probe range and >= 3 samples");
  AssumptionReport r;
  const double lo = probe.lo().value;
  const double hi = probe.hi().value;
  const double dx = (hi - lo) / static_cast<double>(samples - 1);
  const double mid = 0.5 * (lo + hi);
  double inner_drift = 0.0;
  double prev_sigma = 0.0;
  r.min_abs_diffusion = kInf;
  bool finite = true;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = i + 1 == samples ? hi : lo + dx * static_cast<double>(i);
    const double s = spec.diffusion(x);
    const double b = spec.drift(x);
    if (!std::isfinite(s) || !std::isfinite(b)) {
      finite = false;
      continue;
    }
    r.min_abs_diffusion = std::min(r.min_abs_diffusion, std::abs(s));
    r.max_abs_drift = std::max(r.max_abs_drift, std::abs(b));
    if (std::abs(x - mid) <= 0.25 * (hi - lo)) inner_drift = std::max(inner_drift, std::abs(b));
    if (i > 0) r.lipschitz_estimate = std::max(r.lipschitz_estimate, std::abs(s - prev_sigma) / dx);
    prev_sigma = s;
  }
  if (!finite) r.warnings.emplace_back("drift or diffusion not finite somewhere on the probe grid");
  if (!(r.min_abs_diffusion > 0.0)) {
    r.warnings.emplace_back("min |sigma| = " + format_number(r.min_abs_diffusion) + " violates inf sigma(K) > 0");
  }
  if (r.max_abs_drift > 1.5 * inner_drift && r.max_abs_drift - inner_drift > 1e-9) {
    r.warnings.emplace_back("max |b| grows with the probe range (" + format_number(inner_drift) + " on the inner half, " +
                            format_number(r.max_abs_drift) + " overall): b looks unbounded");
  }
  r.pass = r.warnings.empty();
  return r;
}

/// P(tau_a in window) for Brownian motion from x0 < a, where tau_a is the
/// first passage time to a: P(tau_a <= t) = 2 (1 - Phi((a - x0) / sqrt(t))).
inline double brownian_hitting_prob(double level, double x0, const Interval& window) {
  if (!(level > x0)) throw Error("hitting level must lie above the starting point");
  if (window.lo().value < 0.0) throw Error("hitting window must lie in [0, inf)");
  const double gap = level - x0;
  const auto cdf = [gap](double t) {
    if (t <= 0.0) return 0.0;
    if (std::isinf(t)) return 1.0;
    return std::erfc(gap / std::sqrt(2.0 * t));
  };
  return cdf(window.hi().value) - cdf(window.lo().value);
}

/// P(max of Brownian motion from x0 over [a, b] >= level), 0 <= a <= b:
/// condition on W_a = y and apply the reflection principle on [a, b].
inline double brownian_window_max_prob(double level, double x0, double a, double b) {
  if (!(a >= 0.0 && b >= a && std::isfinite(b))) throw Error("need 0 <= a <= b < inf");
  const boost::math::normal std_normal;
  const double span = b - a;
  const auto after = [&](double y) {
    if (y >= level) return 1.0;
    if (span == 0.0) return 0.0;
    return 2.0 * boost::math::cdf(boost::math::complement(std_normal, (level - y) / std::sqrt(span)));
  };
  if (a == 0.0) return after(x0);
  const double sd = std::sqrt(a);
  const double above = boost::math::cdf(boost::math::complement(std_normal, (level - x0) / sd));
  const auto integrand = [&](double z) { return boost::math::pdf(std_normal, z) * after(x0 + sd * z); };
  const double below = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, -std::numeric_limits<double>::infinity(), (level - x0) / sd, 15, 1e-12);
  return above + below;
}

}  // namespace mtlsmc

#endif  // MTLSMC_STOCHASTIC_HPP
