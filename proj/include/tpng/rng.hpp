#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11) plus the few
// distributions the samplers need. Counter-based keys make draws addressable:
// a stream is (seed, stream-id), so per-vertex or per-replica randomness is
// independent of evaluation order and worker count.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace tpng {

namespace detail {

inline void philox_round(std::array<uint32_t, 4>& c, uint32_t k0, uint32_t k1) {
  constexpr uint32_t M0 = 0xD2511F53u;
  constexpr uint32_t M1 = 0xCD9E8D57u;
  const uint64_t p0 = static_cast<uint64_t>(M0) * c[0];
  const uint64_t p1 = static_cast<uint64_t>(M1) * c[2];
  const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
  const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace detail

inline std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> counter,
                                          uint32_t key0, uint32_t key1) {
  constexpr uint32_t W0 = 0x9E3779B9u;
  constexpr uint32_t W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    detail::philox_round(counter, key0, key1);
    key0 += W0;
    key1 += W1;
  }
  return counter;
}

// One keyed stream: block counter walks forward, four 32-bit words per block.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

  uint32_t next_u32() {
    if (idx_ == 4) refill();
    return block_[idx_++];
  }

  uint64_t next_u64() {
    const uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // uniform on [0,1)
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0,1], safe under log()
  double unit_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  double exponential(double rate) {
    if (!(rate > 0)) throw std::domain_error("exponential: rate must be positive");
    return -std::log(unit_pos()) / rate;
  }

  // number of failures before the first success when each trial fails w.p. t
  long geometric_misses(double t) {
    if (t <= 0.0) return 0;
    if (t >= 1.0) throw std::domain_error("geometric_misses: t must be < 1");
    return static_cast<long>(std::floor(std::log(unit_pos()) / std::log(t)));
  }

  // exact Poisson sample; additivity splits large means into safe chunks
  long poisson(double mean) {
    if (mean < 0) throw std::domain_error("poisson: negative mean");
    long total = 0;
    while (mean > 16.0) {
      total += poisson_knuth(16.0);
      mean -= 16.0;
    }
    return total + poisson_knuth(mean);
  }

  long uniform_index(long n) {
    if (n <= 0) throw std::domain_error("uniform_index: empty range");
    // rejection keeps the draw exact
    const uint64_t bound = UINT64_MAX - UINT64_MAX % static_cast<uint64_t>(n);
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= bound);
    return static_cast<long>(v % static_cast<uint64_t>(n));
  }

 private:
  long poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    long k = 0;
    double prod = unit();
    while (prod > limit) {
      ++k;
      prod *= unit();
    }
    return k;
  }

  void refill() {
    block_ = philox4x32({static_cast<uint32_t>(ctr_), static_cast<uint32_t>(ctr_ >> 32),
                         static_cast<uint32_t>(stream_), static_cast<uint32_t>(stream_ >> 32)},
                        static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32));
    ++ctr_;
    idx_ = 0;
  }

  uint64_t seed_;
  uint64_t stream_;
  uint64_t ctr_ = 0;
  std::array<uint32_t, 4> block_{};
  int idx_ = 4;
};

// Stable sub-seed derivation so replicas and modules get independent streams.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
  auto out = philox4x32({static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32),
                         0x74706E67u, 0x64657276u},
                        static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32));
  return (static_cast<uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace tpng
