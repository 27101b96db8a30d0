#ifndef MTLSMC_HARNESS_HPP
#define MTLSMC_HARNESS_HPP

// Monte Carlo estimation of satisfaction probabilities under the discrete
// and the (piecewise-linear approximated) continuous semantics.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "mtlsmc/csem.hpp"
#include "mtlsmc/dsem.hpp"
#include "mtlsmc/stochastic.hpp"

namespace mtlsmc {

/// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_ci(std::int64_t successes, std::int64_t trials, double confidence) {
  if (trials < 1 || successes < 0 || successes > trials) throw Error("wilson_ci needs 0 <= successes <= trials, trials >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) throw Error("confidence must lie in (0, 1)");
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * confidence);
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2n = z * z / nt;
  const double center = (p + 0.5 * z2n) / (1.0 + z2n);
  const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / nt + z * z / (4.0 * nt * nt));
  double lo = successes == 0 ? 0.0 : std::clamp(center - half, 0.0, p);
  double hi = successes == trials ? 1.0 : std::clamp(center + half, p, 1.0);
  return {lo, hi};
}

struct Estimate {
  std::string semantics;  // "discrete", "continuous-PL", or an event tag
  std::int64_t resolution = 0;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double confidence = 0.95;
  std::optional<double> oracle;
  std::string verdict;

  std::string label() const { return semantics + "-" + std::to_string(resolution); }
  double half_width() const { return 0.5 * (ci_hi - ci_lo); }
};

inline Estimate make_estimate(std::string semantics, std::int64_t resolution, std::int64_t successes,
                              std::int64_t trials, double confidence) {
  Estimate e;
  e.semantics = std::move(semantics);
  e.resolution = resolution;
  e.trials = trials;
  e.successes = successes;
  e.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
  std::tie(e.ci_lo, e.ci_hi) = wilson_ci(successes, trials, confidence);
  e.confidence = confidence;
  return e;
}

/// True when the two confidence intervals overlap.
inline bool agree_within_cis(const Estimate& a, const Estimate& b) {
  return std::abs(a.p_hat - b.p_hat) <= a.half_width() + b.half_width() + 1e-15;
}

/// Evaluates fn(i) for i in [0, count) across `workers` threads. Results are
/// stored by index, so the output does not depend on the schedule.
template <class T, class Fn>
std::vector<T> parallel_map(std::int64_t count, unsigned workers, Fn fn) {
  std::vector<T> out(static_cast<std::size_t>(count));
  if (workers <= 1 || count < 2) {
    for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  constexpr std::int64_t kChunk = 32;
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (;;) {
        const std::int64_t begin = next.fetch_add(kChunk);
        if (begin >= count) return;
        const std::int64_t end = std::min(count, begin + kChunk);
        for (std::int64_t i = begin; i < end; ++i) out[static_cast<std::size_t>(i)] = fn(i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct McOptions {
  std::uint64_t seed = 1;
  std::int64_t trials = 10000;
  unsigned workers = 1;
  double confidence = 0.95;
  /// Minimum sampled horizon; the formula's own reach is always covered.
  double horizon = 0.0;
};

/// Estimates P(X, Lambda_n(t) |=_n f) from independent grid paths at
/// resolution n.
inline Estimate estimate_discrete(const Formula& f, const Sampler& sampler, const AtomMap& atoms, double t,
                                  std::int64_t n, const McOptions& opt) {
  const std::int64_t k = lambda_n_index(t, n);
  const std::int64_t need = k + index_reach(f, n);
  const double horizon = std::max(opt.horizon, static_cast<double>(std::max<std::int64_t>(need, 1)) / static_cast<double>(n));
  auto hits = parallel_map<std::uint8_t>(opt.trials, opt.workers, [&](std::int64_t i) -> std::uint8_t {
    const GridTrace g = sampler.sample(n, horizon, {opt.seed, static_cast<std::uint64_t>(i)});
    return eval_holds_index(f, g, atoms, k) ? 1 : 0;
  });
  const auto successes = std::count(hits.begin(), hits.end(), std::uint8_t{1});
  return make_estimate("discrete", n, successes, opt.trials, opt.confidence);
}

/// Estimates P(X, t |= f) by evaluating the continuous semantics exactly on
/// the piecewise-linear interpolation of grid paths at resolution m. This is
/// an approximation of the true path semantics at resolution m.
inline Estimate estimate_continuous_pl(const Formula& f, const Sampler& sampler, const AtomMap& atoms, double t,
                                       std::int64_t m, const McOptions& opt) {
  const double horizon = std::max({opt.horizon, t + temporal_reach(f), 1.0 / static_cast<double>(m)});
  auto hits = parallel_map<std::uint8_t>(opt.trials, opt.workers, [&](std::int64_t i) -> std::uint8_t {
    const PLTrace pl = sampler.sample(m, horizon, {opt.seed, static_cast<std::uint64_t>(i)}).to_pl();
    return holds_at(f, pl, atoms, t) ? 1 : 0;
  });
  const auto successes = std::count(hits.begin(), hits.end(), std::uint8_t{1});
  return make_estimate("continuous-PL", m, successes, opt.trials, opt.confidence);
}

struct SweepResult {
  std::vector<Estimate> rows;
  std::optional<Estimate> reference;
  /// Paths were sampled once on a common fine grid and coarsened.
  bool nested = false;
  /// Paths whose discrete outcome decreased somewhere along the sorted
  /// resolutions (or exceeded the reference); only meaningful when nested.
  std::int64_t monotonicity_violations = 0;
};

namespace detail {

inline std::optional<std::int64_t> coupling_base(const std::vector<std::int64_t>& ns, std::optional<std::int64_t> m) {
  const auto divides_all = [&](std::int64_t base) {
    return std::all_of(ns.begin(), ns.end(), [base](std::int64_t n) { return n >= 1 && base % n == 0; });
  };
  if (m && divides_all(*m)) return *m;
  if (!ns.empty()) {
    const std::int64_t mx = *std::max_element(ns.begin(), ns.end());
    if (divides_all(mx)) return mx;
  }
  return std::nullopt;
}

}  // namespace detail

/// One discrete estimate per resolution, plus an optional continuous-PL
/// reference at resolution m. When every n divides a common base resolution,
/// each path is sampled once on the finest grid and coarsened, so all rows
/// share random numbers.
inline SweepResult convergence_sweep(const Formula& f, const Sampler& sampler, const AtomMap& atoms, double t,
                                     std::vector<std::int64_t> ns, const McOptions& opt,
                                     std::optional<std::int64_t> reference_m = std::nullopt) {
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.empty() || ns.front() < 1) throw Error("sweep needs at least one resolution >= 1");
  if (ns.size() + (reference_m ? 1 : 0) > 32) throw Error("sweep supports at most 32 rows");
  double horizon = opt.horizon;
  std::vector<std::int64_t> k_at(ns.size());
  for (std::size_t r = 0; r < ns.size(); ++r) {
    k_at[r] = lambda_n_index(t, ns[r]);
    horizon = std::max(horizon, static_cast<double>(std::max<std::int64_t>(k_at[r] + index_reach(f, ns[r]), 1)) /
                                    static_cast<double>(ns[r]));
  }
  if (reference_m) horizon = std::max({horizon, t + temporal_reach(f), 1.0 / static_cast<double>(*reference_m)});
  const auto base = detail::coupling_base(ns, reference_m);
  const std::size_t ref_bit = ns.size();

  auto outcomes = parallel_map<std::uint32_t>(opt.trials, opt.workers, [&](std::int64_t i) -> std::uint32_t {
    std::uint32_t bits = 0;
    const auto index = static_cast<std::uint64_t>(i);
    std::optional<GridTrace> fine;
    if (base) fine = sampler.sample(*base, horizon, {opt.seed, index});
    for (std::size_t r = 0; r < ns.size(); ++r) {
      const GridTrace g = base ? fine->coarsen(*base / ns[r])
                               : sampler.sample(ns[r], horizon, {substream(opt.seed, static_cast<std::uint64_t>(ns[r])), index});
      if (eval_holds_index(f, g, atoms, k_at[r])) bits |= 1u << r;
    }
    if (reference_m) {
      const PLTrace pl = (base && *base == *reference_m)
                             ? fine->to_pl()
                             : sampler.sample(*reference_m, horizon, {opt.seed, index}).to_pl();
      if (holds_at(f, pl, atoms, t)) bits |= 1u << ref_bit;
    }
    return bits;
  });

  SweepResult res;
  res.nested = base.has_value();
  for (std::size_t r = 0; r < ns.size(); ++r) {
    const auto s = std::count_if(outcomes.begin(), outcomes.end(), [r](std::uint32_t b) { return (b >> r) & 1u; });
    res.rows.push_back(make_estimate("discrete", ns[r], s, opt.trials, opt.confidence));
  }
  if (reference_m) {
    const auto s = std::count_if(outcomes.begin(), outcomes.end(), [ref_bit](std::uint32_t b) { return (b >> ref_bit) & 1u; });
    res.reference = make_estimate("continuous-PL", *reference_m, s, opt.trials, opt.confidence);
  }
  const std::size_t width = ns.size() + (reference_m ? 1 : 0);
  for (std::uint32_t b : outcomes) {
    for (std::size_t r = 1; r < width; ++r) {
      if (((b >> (r - 1)) & 1u) && !((b >> r) & 1u)) {
        ++res.monotonicity_violations;
        break;
      }
    }
  }
  return res;
}

}  // namespace mtlsmc

#endif  // MTLSMC_HARNESS_HPP
