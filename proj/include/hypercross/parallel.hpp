#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <vector>

#include <omp.h>

#include "hypercross/rng.hpp"

namespace hypercross {

/// Runs fn(rng, rep) for rep in [0, reps) across OpenMP threads. Each
/// replication gets Rng(seed, rep) and its result is stored at index rep, so
/// the output is identical for any thread count or schedule. An exception
/// may not leave a parallel region, so the one from the lowest failing
/// replication is rethrown after the loop.
template <class Result, class Fn>
std::vector<Result> replicate(std::int64_t reps, std::uint64_t seed, Fn&& fn) {
  std::vector<Result> out(static_cast<std::size_t>(reps));
  std::exception_ptr error;
  std::int64_t error_rep = reps;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    try {
      Rng rng(seed, static_cast<std::uint64_t>(rep));
      out[static_cast<std::size_t>(rep)] = fn(rng, rep);
    } catch (...) {
#pragma omp critical(hypercross_replicate_error)
      if (rep < error_rep) {
        error_rep = rep;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// Serial reference for replicate(); kept for equivalence tests.
template <class Result, class Fn>
std::vector<Result> replicate_serial(std::int64_t reps, std::uint64_t seed,
                                     Fn&& fn) {
  std::vector<Result> out(static_cast<std::size_t>(reps));
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    Rng rng(seed, static_cast<std::uint64_t>(rep));
    out[static_cast<std::size_t>(rep)] = fn(rng, rep);
  }
  return out;
}

/// Running mean/variance (Welford) with an order-preserving merge.
struct MomentAccumulator {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  void merge(const MomentAccumulator& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) *
                     static_cast<double>(o.n) / total;
    n += o.n;
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

/// Fixed number of Monte Carlo chunks; chunk c draws from Rng(seed, c).
inline constexpr std::int64_t kMonteCarloChunks = 256;

/// Evaluates sample(rng) n times split into kMonteCarloChunks chunks, merged in
/// chunk order. Deterministic for any thread count.
template <class Fn>
MomentAccumulator monte_carlo(std::int64_t n, std::uint64_t seed, Fn&& sample) {
  const std::int64_t chunks = std::min<std::int64_t>(kMonteCarloChunks, std::max<std::int64_t>(n, 1));
  std::vector<MomentAccumulator> parts(static_cast<std::size_t>(chunks));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < chunks; ++c) {
    try {
      Rng rng(seed, static_cast<std::uint64_t>(c));
      const std::int64_t begin = n * c / chunks;
      const std::int64_t end = n * (c + 1) / chunks;
      MomentAccumulator acc;
      for (std::int64_t i = begin; i < end; ++i) acc.add(sample(rng));
      parts[static_cast<std::size_t>(c)] = acc;
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  MomentAccumulator total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace hypercross
