#pragma once

// splitmix64, kept as a pure value-to-value function so runs replay exactly.

#include <cstdint>
#include <utility>

namespace pmth {

struct PrngState {
  std::uint64_t s = 0;
  friend bool operator==(const PrngState&, const PrngState&) = default;
};

inline std::pair<std::uint64_t, PrngState> splitmix64(PrngState st) {
  std::uint64_t z = (st.s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return {z ^ (z >> 31), st};
}

}  // namespace pmth
