#ifndef CHIRALWG_RNG_HPP
#define CHIRALWG_RNG_HPP

#include <array>
#include <cstdint>

namespace chiralwg {

// Philox4x32-10 counter-based generator. Streams are keyed by
// (seed, stream index) so every Monte Carlo trajectory owns an independent,
// reproducible sequence regardless of scheduling or thread count.
class Philox {
 public:
  Philox(uint64_t seed, uint64_t stream)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<uint32_t>(stream),
             static_cast<uint32_t>(stream >> 32)} {}

  uint32_t next_u32() {
    if (buf_pos_ == 4) {
      block_ = round10(ctr_, key_);
      advance_counter();
      buf_pos_ = 0;
    }
    return block_[buf_pos_++];
  }

  uint64_t next_u64() {
    const uint64_t lo = next_u32();
    const uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  using Words = std::array<uint32_t, 4>;

  static Words round10(Words ctr, std::array<uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
      const uint64_t p0 = 0xD2511F53ull * ctr[0];
      const uint64_t p1 = 0xCD9E8D57ull * ctr[2];
      const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
      const uint32_t lo0 = static_cast<uint32_t>(p0);
      const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
      const uint32_t lo1 = static_cast<uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }

  void advance_counter() {
    if (++ctr_[0] == 0) ++ctr_[1];
  }

  std::array<uint32_t, 2> key_;
  Words ctr_;
  Words block_{};
  int buf_pos_ = 4;
};

}  // namespace chiralwg

#endif
