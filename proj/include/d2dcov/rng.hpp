#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <stdexcept>

namespace d2dcov {

/// Substream purpose tags. The numeric values are part of the reproducibility
/// contract: changing them changes every sampled realization.
enum class StreamPurpose : std::uint64_t {
  kPointCount = 1,
  kPositions = 2,
  kFadingMarks = 3,
  kPairingTieBreak = 4,  // reserved; pairing ties break lexicographically
  kCellUser = 5,
  kCellFading = 6,
  kTransmitterCoin = 7,
};

/// Splittable random stream addressed by (master_seed, stream_id, substream_id).
///
/// Equal addresses produce bit-identical draw sequences; distinct addresses
/// produce statistically independent ones. stream_id is the replication index,
/// substream_id the purpose within a replication, so results cannot depend on
/// worker count or call interleaving.
///
/// All variate transforms are implemented on top of the raw 64-bit engine
/// output instead of <random> distributions, which are not pinned by the
/// standard; sequences are therefore identical across toolchains.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0,
                     std::uint64_t substream_id = 0)
      : master_seed_(master_seed),
        stream_id_(stream_id),
        substream_id_(substream_id),
        engine_(mix_seed(master_seed, stream_id, substream_id)) {}

  /// Re-addressed stream with the same (master_seed, stream_id).
  RngStream substream(StreamPurpose purpose) const {
    return RngStream(master_seed_, stream_id_,
                     static_cast<std::uint64_t>(purpose));
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t substream_id() const { return substream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unit-mean exponential variate.
  double exponential() { return -std::log1p(-uniform01()); }

  /// Fair coin.
  bool coin() { return (next_u64() >> 63) != 0; }

  /// Poisson count by summing unit exponentials until the mean is exceeded.
  /// Exact for any mean; cost is O(mean) draws.
  std::uint64_t poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
    if (mean > kMaxPoissonMean)
      throw std::overflow_error("poisson: expected count exceeds capacity");
    std::uint64_t count = 0;
    double acc = exponential();
    while (acc <= mean) {
      ++count;
      acc += exponential();
    }
    return count;
  }

  static constexpr double kMaxPoissonMean = 1e8;

 private:
  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Hash the address triple into one well-mixed engine seed.
  static std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream,
                                std::uint64_t substream) {
    std::uint64_t state = master;
    std::uint64_t h = splitmix64(state);
    state ^= stream + 0xD1B54A32D192ED03ull;
    h ^= splitmix64(state);
    state ^= substream + 0x8CB92BA72F3D8DD7ull;
    h ^= splitmix64(state);
    std::uint64_t final_state = h;
    return splitmix64(final_state);
  }

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t substream_id_;
  std::mt19937_64 engine_;
};

}  // namespace d2dcov
