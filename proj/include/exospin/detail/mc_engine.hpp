#pragma once

// Batched Monte Carlo driver shared by the field and stray-field integrators.
//
// Batch b draws from a generator seeded by (seed, stream tag, b) only, so a
// given batch yields the same numbers whichever thread runs it. Batches are
// merged strictly in index order and the stopping rule is evaluated after each
// merge, which makes the result independent of the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace exospin::detail {

inline constexpr std::uint64_t kBatchSize = 65536;

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const {
    return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

inline std::mt19937_64 batch_generator(std::uint64_t seed, std::uint32_t stream,
                                       std::uint64_t batch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream, static_cast<std::uint32_t>(batch),
                    static_cast<std::uint32_t>(batch >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

struct EngineSettings {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  std::uint64_t min_samples = kBatchSize;
  std::uint64_t max_samples = kBatchSize;
  /// Stop once se(combination) <= target * |mean(combination)|. <= 0 disables
  /// the test, so exactly min_samples are drawn.
  double target_rel_se = 0.0;
  unsigned threads = 1;
};

struct EngineResult {
  std::vector<RunningStats> values;  // one per evaluated quantity
  RunningStats combination;          // per-sample weighted sum of the values
  std::uint64_t samples = 0;
  bool converged = false;
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// `sample(rng, out)` draws one random configuration and writes one value per
/// quantity into `out`. `weights` defines the combination used for the
/// stopping rule and for paired (common-random-number) error estimates.
template <class SampleFn>
EngineResult run_batches(const EngineSettings& settings, std::span<const double> weights,
                         SampleFn sample) {
  const std::size_t n_values = weights.size();
  const std::uint64_t min_batches =
      std::max<std::uint64_t>(1, (settings.min_samples + kBatchSize - 1) / kBatchSize);
  const std::uint64_t max_batches = std::max<std::uint64_t>(
      min_batches, (settings.max_samples + kBatchSize - 1) / kBatchSize);
  const unsigned workers = resolve_threads(settings.threads);

  struct BatchResult {
    std::vector<RunningStats> values;
    RunningStats combination;
  };

  auto run_one = [&](std::uint64_t batch, BatchResult& out) {
    auto rng = batch_generator(settings.seed, settings.stream, batch);
    out.values.assign(n_values, RunningStats{});
    out.combination = RunningStats{};
    std::vector<double> buf(n_values);
    for (std::uint64_t i = 0; i < kBatchSize; ++i) {
      sample(rng, std::span<double>(buf));
      double combo = 0.0;
      for (std::size_t j = 0; j < n_values; ++j) {
        out.values[j].add(buf[j]);
        combo += weights[j] * buf[j];
      }
      out.combination.add(combo);
    }
  };

  EngineResult result;
  result.values.assign(n_values, RunningStats{});

  std::uint64_t next = 0;
  std::vector<BatchResult> round;
  while (next < max_batches) {
    const std::uint64_t count = std::min<std::uint64_t>(workers, max_batches - next);
    round.assign(count, BatchResult{});
    if (count == 1) {
      run_one(next, round[0]);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(count);
      for (std::uint64_t w = 0; w < count; ++w) {
        pool.emplace_back([&, w] { run_one(next + w, round[w]); });
      }
    }
    for (std::uint64_t w = 0; w < count; ++w) {
      for (std::size_t j = 0; j < n_values; ++j) result.values[j].merge(round[w].values[j]);
      result.combination.merge(round[w].combination);
      result.samples += kBatchSize;
      const std::uint64_t done = next + w + 1;
      if (done < min_batches) continue;
      if (settings.target_rel_se <= 0.0) {
        result.converged = true;
        return result;
      }
      const double se = result.combination.std_error();
      if (se <= settings.target_rel_se * std::abs(result.combination.mean)) {
        result.converged = true;
        return result;
      }
    }
    next += count;
  }
  return result;
}

}  // namespace exospin::detail
