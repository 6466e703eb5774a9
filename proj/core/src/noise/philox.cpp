#include "levypde/noise/philox.hpp"

#include <cmath>
#include <numbers>

namespace levypde::noise {

namespace {
inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
}  // namespace

Counter4 philox4x32_10(Counter4 c, Key2 k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

CounterRng::CounterRng(std::uint64_t base_seed, std::uint64_t path_index,
                       Stream stream)
    : key_{static_cast<std::uint32_t>(base_seed),
           static_cast<std::uint32_t>(base_seed >> 32)},
      path_lo_(static_cast<std::uint32_t>(path_index)),
      stream_and_path_hi_((static_cast<std::uint32_t>(stream) << 24) ^
                          static_cast<std::uint32_t>(path_index >> 32)) {}

Counter4 CounterRng::block_raw(std::uint64_t index) const {
  return philox4x32_10({static_cast<std::uint32_t>(index),
                        static_cast<std::uint32_t>(index >> 32), path_lo_,
                        stream_and_path_hi_},
                       key_);
}

double CounterRng::uniform(std::uint64_t index) const {
  Counter4 out = block_raw(index >> 1);
  int lane = static_cast<int>(index & 1);
  std::uint64_t x = (static_cast<std::uint64_t>(out[2 * lane + 1]) << 32) |
                    out[2 * lane];
  // 53-bit mantissa, strictly inside (0, 1)
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

std::array<double, 2> CounterRng::normal_pair(std::uint64_t block) const {
  Counter4 out = block_raw(block);
  std::uint64_t a =
      (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  std::uint64_t b =
      (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;
  double u2 = (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-53;
  double r = std::sqrt(-2.0 * std::log(u1));
  double th = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

double CounterRng::normal(std::uint64_t index) const {
  return normal_pair(index >> 1)[index & 1];
}

}  // namespace levypde::noise
