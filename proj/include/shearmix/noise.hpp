#pragma once

// Reproducible uniform phase streams. The generator is counter-based
// (SplitMix64-style finalizer over an affine counter): the k-th pair of a
// stream is a pure function of (seed, stream_index, k), so trajectory
// assignment across threads never changes the realization.

#include <cstdint>
#include <utility>

#include "shearmix/torus.hpp"

namespace shearmix {

struct Seed {
  std::uint64_t value = 12345;  // documented reproducibility anchor
};

namespace detail {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t stream_base(Seed seed, std::uint64_t stream_index) {
  return mix64(mix64(seed.value + kGamma) ^ (kGamma * (stream_index + 1)));
}

inline double u64_to_angle(std::uint64_t w) {
  double u = static_cast<double>(w >> 11) * 0x1.0p-53;
  return kernel::wrap_value(u * two_pi);
}

}  // namespace detail

class PhaseSequence {
 public:
  PhaseSequence() : PhaseSequence(Seed{}, 0) {}
  PhaseSequence(Seed seed, std::uint64_t stream_index, std::uint64_t position = 0)
      : seed_(seed), stream_(stream_index), position_(position),
        base_(detail::stream_base(seed, stream_index)) {}

  Seed seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }
  std::uint64_t position() const { return position_; }

  // Internal counter state of the k-th word (two words per pair).
  std::uint64_t word_state(std::uint64_t k) const { return base_ + detail::kGamma * k; }

  // The k-th pair of this stream, independent of position.
  PhasePair pair_at(std::uint64_t k) const {
    return {detail::u64_to_angle(detail::mix64(word_state(2 * k))),
            detail::u64_to_angle(detail::mix64(word_state(2 * k + 1)))};
  }

  // Uniform double in [0, 1) from the k-th auxiliary word (used by samplers
  // that need plain uniforms alongside phase pairs).
  double uniform_at(std::uint64_t k) const {
    return static_cast<double>(detail::mix64(word_state(k)) >> 11) * 0x1.0p-53;
  }

 private:
  Seed seed_;
  std::uint64_t stream_ = 0;
  std::uint64_t position_ = 0;
  std::uint64_t base_ = 0;
};

inline std::pair<PhasePair, PhaseSequence> next_phase(const PhaseSequence& seq) {
  PhasePair p = seq.pair_at(seq.position());
  return {p, PhaseSequence(seq.seed(), seq.stream_index(), seq.position() + 1)};
}

inline PhaseSequence derive_stream(Seed seed, std::uint64_t trajectory_index) {
  return PhaseSequence(seed, trajectory_index);
}

// Mutable convenience cursor over a stream, consuming one word per uniform
// and two words per phase pair.
class PhaseCursor {
 public:
  explicit PhaseCursor(PhaseSequence seq) : seq_(seq) {}
  PhasePair next() {
    PhasePair p = {detail::u64_to_angle(detail::mix64(seq_.word_state(word_))),
                   detail::u64_to_angle(detail::mix64(seq_.word_state(word_ + 1)))};
    word_ += 2;
    return p;
  }
  double next_uniform() {
    double u = static_cast<double>(detail::mix64(seq_.word_state(word_)) >> 11) * 0x1.0p-53;
    word_ += 1;
    return u;
  }

 private:
  PhaseSequence seq_;
  std::uint64_t word_ = 0;
};

}  // namespace shearmix
