#include "roughdyn/rng.hpp"

#include <cmath>

namespace roughdyn {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  k[0] += kWeyl0;
  k[1] += kWeyl1;
}

constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::array<std::uint32_t, 2> k = key;
  for (int r = 0; r < 10; ++r) round_once(c, k);
  return c;
}

double NormalStream::operator()(std::uint64_t i) const {
  const std::uint64_t block = i >> 1;
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32(ctr, key);
  const std::uint64_t a = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  const std::uint64_t b = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  // u1 in (0,1] keeps log finite; u2 in [0,1).
  const double u1 = (static_cast<double>(a >> 11) + 1.0) * kInv53;
  const double u2 = static_cast<double>(b >> 11) * kInv53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 6.283185307179586476925286766559 * u2;
  return (i & 1ull) ? r * std::sin(theta) : r * std::cos(theta);
}

std::vector<double> NormalStream::take(std::uint64_t count, std::uint64_t start) const {
  std::vector<double> out(count);
  for (std::uint64_t i = 0; i < count; ++i) out[i] = (*this)(start + i);
  return out;
}

}  // namespace roughdyn
