#include "mksim/rng.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>

#include "mksim/errors.hpp"

namespace mksim {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng::Rng(Seed seed) noexcept {
  // splitmix64 expansion; four consecutive outputs can never all be zero.
  std::uint64_t s = seed.value;
  for (auto& w : words_) {
    w = mix64(s);
    s += 0x9E3779B97F4A7C15ull;
  }
}

Rng::Rng(const RngState& state) { restore(state); }

std::uint64_t Rng::next_word() noexcept {
  const std::uint64_t result = rotl(words_[1] * 5, 7) * 9;
  const std::uint64_t t = words_[1] << 17;
  words_[2] ^= words_[0];
  words_[3] ^= words_[1];
  words_[1] ^= words_[2];
  words_[0] ^= words_[3];
  words_[2] ^= t;
  words_[3] = rotl(words_[3], 45);
  ++draws_;
  return result;
}

double Rng::next_uniform() noexcept {
  return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::next_int_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_int_below: n must be at least 1");
  const std::uint64_t mask =
      n > (std::uint64_t{1} << 63) ? ~std::uint64_t{0} : std::bit_ceil(n) - 1;
  for (;;) {
    const std::uint64_t v = next_word() & mask;
    if (v < n) return v;
  }
}

RngState Rng::capture() const noexcept {
  return RngState{kXoshiro256Id, words_, draws_};
}

void Rng::restore(const RngState& state) {
  if (state.algorithm_id != kXoshiro256Id)
    throw VersionError("rng restore: unknown algorithm id");
  words_ = state.state_words;
  draws_ = state.draws_so_far;
}

void Rng::save(ByteWriter& out) const {
  out.u32(kXoshiro256Id);
  out.u32(5);  // 4 state words + draw counter
  for (std::uint64_t w : words_) out.u64(w);
  out.u64(draws_);
}

RngState Rng::load_state(ByteReader& in) {
  RngState s;
  s.algorithm_id = in.u32();
  const std::uint32_t count = in.u32();
  if (count != 5) throw SnapshotError("rng state block: unexpected word count");
  for (auto& w : s.state_words) w = in.u64();
  s.draws_so_far = in.u64();
  return s;
}

std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t population, std::size_t k) {
  if (k > population)
    throw std::invalid_argument("sample_distinct: k exceeds population");
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_int_below(population - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace mksim
