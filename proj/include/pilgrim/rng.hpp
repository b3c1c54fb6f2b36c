#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace pilgrim {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Replicate r of a run seeded with s draws from an engine seeded with
// splitmix64(s ^ splitmix64(r)). Streams depend only on (s, r), never on
// scheduling, so results are identical for any thread count.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(seed ^ splitmix64(stream));
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) { return Rng(stream_seed(seed, stream)); }

inline double draw_exponential(Rng& rng) { return std::exponential_distribution<double>(1.0)(rng); }
inline double draw_uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Runs fn(rng, replicate) for every replicate and returns the results in
// replicate order.
template <class Result, class Fn>
std::vector<Result> run_replicates(int reps, std::uint64_t seed, Fn&& fn, unsigned threads = 0) {
  std::vector<Result> out(static_cast<std::size_t>(std::max(reps, 0)));
  if (reps <= 0) return out;
  if (threads == 0) threads = default_threads();
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));
  auto body = [&](unsigned worker) {
    for (int r = static_cast<int>(worker); r < reps; r += static_cast<int>(threads)) {
      Rng rng = make_stream(seed, static_cast<std::uint64_t>(r));
      out[static_cast<std::size_t>(r)] = fn(rng, r);
    }
  };
  if (threads == 1) {
    body(0);
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        body(w);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace pilgrim
