#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace supstable {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (seed, stream_id); draw i of the stream is a
/// pure function of (seed, stream_id, i), so substreams for parallel blocks
/// need no coordination and results do not depend on scheduling.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;

  PhiloxStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_id_(stream_id) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    if (lane_ == 2) {
      refill();
    }
    const std::uint64_t lo = buffer_[2 * lane_];
    const std::uint64_t hi = buffer_[2 * lane_ + 1];
    ++lane_;
    return (hi << 32) | lo;
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard exponential, strictly positive.
  double exponential() { return -std::log(uniform_open()); }

  /// The raw bijection: 10 rounds over a 128-bit counter with a 64-bit key.
  static Block philox4x32_10(Block counter, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * counter[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * counter[2];
      counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0],
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1],
                 static_cast<std::uint32_t>(p0)};
      key[0] += kW0;
      key[1] += kW1;
    }
    return counter;
  }

 private:
  void refill() {
    const Block counter{static_cast<std::uint32_t>(position_),
                        static_cast<std::uint32_t>(position_ >> 32),
                        static_cast<std::uint32_t>(stream_id_),
                        static_cast<std::uint32_t>(stream_id_ >> 32)};
    buffer_ = philox4x32_10(counter, key_);
    ++position_;
    lane_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;
  Block buffer_{};
  int lane_ = 2;
};

}  // namespace supstable
