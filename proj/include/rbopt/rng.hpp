#pragma once

#include <cstdint>
#include <random>

namespace rbopt {

/// Deterministic stream splitting for reproducible Monte Carlo.
///
/// A stream is a 64-bit key. Child streams are derived by mixing fixed
/// labels, and per-draw engines are derived by mixing a slot index, so the
/// numbers any consumer sees depend only on (base seed, label path, index) —
/// never on thread count, scheduling, or how many sibling consumers exist.
class RngStream {
 public:
  RngStream() = default;
  static RngStream from_seed(std::uint64_t seed) {
    return RngStream(mix(seed ^ 0x1b873593c2b2ae35ULL));
  }

  RngStream child(std::uint64_t label) const {
    return RngStream(mix(mix(key_ + 0x632be59bd9b4e019ULL) ^
                         (label * 0x9e3779b97f4a7c15ULL)));
  }
  RngStream child(std::uint64_t label, std::uint64_t index) const {
    return child(label).child(index + 1);
  }

  /// Engine for the index-th independent draw slot of this stream
  /// (one slot per Monte Carlo sample, ball point, multi-start, ...).
  std::mt19937_64 engine(std::uint64_t index) const {
    return std::mt19937_64(mix(key_ ^ mix(index + 0x9e3779b97f4a7c15ULL)));
  }
  std::mt19937_64 engine() const { return engine(0); }

  std::uint64_t key() const { return key_; }

 private:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
};

/// Fixed labels of the stream tree. One base seed expands through these, so
/// adding parallelism or reordering consumers never perturbs results.
namespace stream_label {
inline constexpr std::uint64_t kSampling = 1;    // MC sample matrices
inline constexpr std::uint64_t kBallPoints = 2;  // surrogate design points
inline constexpr std::uint64_t kMultiStart = 3;  // subproblem starts
inline constexpr std::uint64_t kAcceptance = 4;  // acceptance-check draws
inline constexpr std::uint64_t kIteration = 5;   // per outer iteration
inline constexpr std::uint64_t kPass = 6;        // per certification pass
inline constexpr std::uint64_t kCrn = 7;         // common-random-number batch
inline constexpr std::uint64_t kRepetition = 8;  // experiment repetitions
inline constexpr std::uint64_t kSpread = 9;      // benchmark start spread
inline constexpr std::uint64_t kOracle = 10;     // audit / reference batches
}  // namespace stream_label

}  // namespace rbopt
