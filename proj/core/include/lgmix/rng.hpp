#ifndef LGMIX_RNG_HPP
#define LGMIX_RNG_HPP

#include <array>
#include <cstdint>

namespace lgmix {

/// Philox4x64-10 counter-based generator.
///
/// Streams are carved out of the 256-bit counter space: the third counter word
/// holds the stream id and the fourth the substream id, so distinct
/// (stream, substream) pairs can never produce overlapping counter blocks.
/// Identical (seed, stream_id, call sequence) reproduces identical draws
/// bit-for-bit on any platform.
class RngStream {
public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint32_t stream_id, std::uint32_t substream_id = 0)
      : key_{seed, golden_ ^ seed},
        ctr_{0, 0,
             static_cast<std::uint64_t>(stream_id),
             static_cast<std::uint64_t>(substream_id)},
        buf_pos_(4) {}

  /// Independent stream for a parallel unit of work (chain, row block).
  RngStream substream(std::uint32_t substream_id) const {
    RngStream r;
    r.key_ = key_;
    r.ctr_ = {0, 0, ctr_[2], static_cast<std::uint64_t>(substream_id)};
    r.buf_pos_ = 4;
    return r;
  }

  std::uint64_t next_u64() {
    if (buf_pos_ >= 4) {
      buf_ = block(ctr_, key_);
      // 128-bit increment over the first two words; words 2,3 identify the stream
      if (++ctr_[0] == 0) ++ctr_[1];
      buf_pos_ = 0;
    }
    return buf_[buf_pos_++];
  }

  /// Uniform draw strictly inside (0, 1), 53-bit resolution.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform on (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // multiply-shift; bias is negligible for the index ranges used here
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  static std::array<std::uint64_t, 4> block(const std::array<std::uint64_t, 4>& ctr,
                                            const std::array<std::uint64_t, 2>& key) {
    std::array<std::uint64_t, 4> x = ctr;
    std::array<std::uint64_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += bump0_;
        k[1] += bump1_;
      }
      x = single_round(x, k);
    }
    return x;
  }

private:
  static std::array<std::uint64_t, 4> single_round(const std::array<std::uint64_t, 4>& x,
                                                   const std::array<std::uint64_t, 2>& k) {
    const std::uint64_t m0 = 0xD2E7470EE14C6C93ULL;
    const std::uint64_t m1 = 0xCA5A826395121157ULL;
    unsigned __int128 p0 = static_cast<unsigned __int128>(m0) * x[0];
    unsigned __int128 p1 = static_cast<unsigned __int128>(m1) * x[2];
    std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
    std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
    std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
    std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
    return {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
  }

  static constexpr std::uint64_t golden_ = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t bump0_ = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t bump1_ = 0xBB67AE8584CAA73BULL;

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_;
  std::array<std::uint64_t, 4> buf_{};
  int buf_pos_;
};

} // namespace lgmix

#endif
