#pragma once

#include <cstdint>
#include <limits>

namespace riesz {

// Counter-based generator: output n of stream (seed, stream) is
// splitmix64(key + n * golden). The full state is (key, counter), so a
// chain can be checkpointed and resumed exactly, and parallel chains with
// distinct stream ids never depend on scheduling.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();
  // Standard normal via Box-Muller; consumes two outputs per call so the
  // stream position is a pure function of the number of draws.
  double normal();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }
  void set_counter(std::uint64_t c) noexcept { counter_ = c; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace riesz
