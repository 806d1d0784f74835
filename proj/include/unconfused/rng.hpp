#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace unconfused {

/// splitmix64 finalizer; used for seeding and for deriving stream keys.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix64(std::uint64_t x);

/// Portable xoshiro256** stream keyed by (seed, stream id). Identical keys give
/// identical sequences on every platform: no std:: distributions are used, so
/// every variate below is computed here bit-for-bit.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Derive an independent child stream, e.g. one per run or per purpose.
  RngStream split(std::uint64_t child_id) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). Lemire-style rejection, no modulo bias.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller (cached second variate).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Well-known purpose ids for RngStream::split.
namespace streams {
inline constexpr std::uint64_t kConcept = 1;
inline constexpr std::uint64_t kTrain = 2;
inline constexpr std::uint64_t kTest = 3;
inline constexpr std::uint64_t kNoise = 4;
inline constexpr std::uint64_t kSweep = 5;
inline constexpr std::uint64_t kShuffle = 6;
inline constexpr std::uint64_t kSelection = 7;
inline constexpr std::uint64_t kLabeling = 8;
}  // namespace streams

}  // namespace unconfused
