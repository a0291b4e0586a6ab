#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mksim/bytes.hpp"

namespace mksim {

// Identifies the xoshiro256** stream format. A captured state only restores
// into a generator with the same algorithm id.
inline constexpr std::uint32_t kXoshiro256Id = 0x36353258;  // bytes "X256" on disk

struct Seed {
  std::uint64_t value = 0;
};

// Complete captured generator state. Two generators whose algorithm_id and
// state_words are equal produce identical output streams forever;
// draws_so_far is an audit counter and does not influence future output.
struct RngState {
  std::uint32_t algorithm_id = kXoshiro256Id;
  std::array<std::uint64_t, 4> state_words{};
  std::uint64_t draws_so_far = 0;

  bool operator==(const RngState&) const = default;
};

// Stateless 64-bit mixer (splitmix64 finalizer). Used for seed expansion and
// for deriving per-replication seeds from a base seed.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Seedable, capturable pseudo-random generator (xoshiro256**).
//
// Implemented in-repo rather than delegating to the platform library so that
// state capture is exact and streams reproduce bit-for-bit everywhere.
// A generator is owned by one logical simulation at a time.
class Rng {
 public:
  // Any seed value is valid, including zero.
  explicit Rng(Seed seed) noexcept;

  // Restores a captured state; throws VersionError on algorithm_id mismatch.
  explicit Rng(const RngState& state);

  // Advances the state by exactly one step and returns 64 fresh bits.
  std::uint64_t next_word() noexcept;

  // Uniform real in [0, 1) with 53-bit resolution; consumes one word.
  double next_uniform() noexcept;

  // Uniform integer in [0, n). Rejection-sampled from a power-of-two window,
  // so every value is exactly equally likely. Throws std::invalid_argument
  // when n is zero.
  std::uint64_t next_int_below(std::uint64_t n);

  RngState capture() const noexcept;
  void restore(const RngState& state);

  // Serialized block: algorithm_id (4 bytes), word count (4 bytes), then the
  // words little-endian. The draw counter rides along as the final word so a
  // save/load round trip is a full identity.
  void save(ByteWriter& out) const;
  static RngState load_state(ByteReader& in);

  bool operator==(const Rng&) const = default;

 private:
  std::array<std::uint64_t, 4> words_{};
  std::uint64_t draws_ = 0;
};

// In-place Fisher-Yates shuffle driven solely by the generator. The draw
// pattern depends only on the sequence length, never on element values, so
// equal generator states yield equal permutations for any same-length input.
template <typename T>
void shuffle(Rng& rng, std::span<T> items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_int_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

template <typename T>
void shuffle(Rng& rng, std::vector<T>& items) {
  shuffle(rng, std::span<T>(items));
}

// k distinct indices drawn uniformly without replacement from [0, population),
// via a partial Fisher-Yates pass; consumes exactly k bounded draws.
std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t population, std::size_t k);

}  // namespace mksim
