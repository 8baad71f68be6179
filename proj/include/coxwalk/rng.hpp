#pragma once

// Philox4x32-10 counter-based generator.  The key is the master seed and the
// high half of the counter is the stream id, so (seed, stream) fixes the
// whole sequence and streams never overlap.

#include <array>
#include <cstdint>
#include <limits>

namespace coxwalk {

class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream);

  static Block block(Block ctr, Key key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  std::uint64_t next_u64();
  // Top 53 bits of a 64-bit draw.
  std::uint64_t next_u53() { return next_u64() >> 11; }
  double uniform() { return static_cast<double>(next_u53()) * 0x1p-53; }
  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  Block buf_{};
  int used_ = 4;
};

}  // namespace coxwalk
