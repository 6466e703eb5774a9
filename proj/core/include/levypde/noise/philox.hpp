#pragma once

#include <array>
#include <cstdint>

// Counter-based RNG: Philox4x32-10 (Salmon et al., Random123 reference
// constants).  Stateless by construction: output depends only on
// (key, counter), so draws are reproducible under any execution order and
// independent streams are just distinct counter lanes.

namespace levypde::noise {

using Counter4 = std::array<std::uint32_t, 4>;
using Key2 = std::array<std::uint32_t, 2>;

Counter4 philox4x32_10(Counter4 counter, Key2 key);

// Stream ids keep the Brownian draws, the jump clocks, the jump marks and
// any auxiliary sampling on disjoint counter lanes of one keyed generator.
enum class Stream : std::uint32_t {
  kBrownian = 0,
  kJumpTime = 1,
  kJumpMark = 2,
  kProbe = 7,
};

// One logical stream: key = base seed, counter = (draw index, path, stream).
class CounterRng {
 public:
  CounterRng(std::uint64_t base_seed, std::uint64_t path_index, Stream stream);

  // i.i.d. uniforms on (0,1), 53-bit, indexed access (no hidden state).
  double uniform(std::uint64_t index) const;
  // Standard normal pair #block via Box-Muller on one counter block.
  std::array<double, 2> normal_pair(std::uint64_t block) const;
  // Convenience: the k-th standard normal of the stream.
  double normal(std::uint64_t index) const;

 private:
  Counter4 block_raw(std::uint64_t index) const;
  Key2 key_;
  std::uint32_t path_lo_ = 0;
  std::uint32_t stream_and_path_hi_ = 0;
};

}  // namespace levypde::noise
