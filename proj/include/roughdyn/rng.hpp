#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace roughdyn {

// Philox4x32-10 counter block cipher (Salmon et al. constants).
// Stateless: output depends only on (key, counter), so draws are
// order-independent and reproducible across platforms.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

// Deterministic N(0,1) stream addressed by (seed, stream, index).
// Index i is mapped to Philox block i/2; each 128-bit block yields a
// Box-Muller pair.  No global or mutable state.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  double operator()(std::uint64_t i) const;
  std::vector<double> take(std::uint64_t count, std::uint64_t start = 0) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace roughdyn
