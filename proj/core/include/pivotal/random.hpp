#pragma once

#include <cstdint>
#include <random>

namespace pivotal {

/// Deterministic uniform stream: identical seed, identical draw sequence.
///
/// Draws are uniform on [0, 1) with 53 random bits, mapped from the raw
/// generator output by a fixed shift (not std::uniform_real_distribution,
/// whose sequences are implementation-defined). A stream must not be shared
/// across concurrent callers; derive substreams instead.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    /// Uniform draw on [0, 1); advances the position counter.
    double next_unit();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t position() const { return position_; }

    /// Independent stream derived from (seed, index), e.g. one per
    /// Monte Carlo replicate.
    RandomStream substream(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
    std::mt19937_64 gen_;
};

}  // namespace pivotal
