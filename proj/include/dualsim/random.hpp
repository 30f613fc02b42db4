#pragma once

#include <cstdint>

namespace dualsim {

/// Independent draw purposes within one trial. Each gets its own substream so
/// the order in which a pipeline consumes randomness never changes results.
enum class Channel : std::uint64_t {
  screen = 1,
  which_path = 2,
  which_path_check = 3,
  absorber = 4,
  chopper = 5,
  detector = 6,
  choice = 7,
  polarizer = 8,
  measurement = 9,
};

/// Counter-based random stream. State is (key, counter); every value is a
/// splitmix64 finalization of key + counter * golden-gamma, so a stream can be
/// split into keyed substreams deterministically and cheaply.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) noexcept : key_(mix(seed)) {}

  /// Substream keyed by (trial, channel). Pure function of this stream's key.
  RandomStream substream(std::uint64_t trial, Channel channel) const noexcept {
    return RandomStream(Key{mix(key_ ^ mix(trial + 0x632be59bd9b4e019ULL) ^
                                (static_cast<std::uint64_t>(channel) << 56))});
  }

  std::uint64_t next_u64() noexcept {
    return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  std::uint64_t key() const noexcept { return key_; }

 private:
  struct Key {
    std::uint64_t value;
  };
  explicit RandomStream(Key k) noexcept : key_(k.value) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dualsim
