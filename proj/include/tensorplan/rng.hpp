#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace tensorplan {

// Deterministic seed derivation and sampling.
//
// One root seed fully determines an experiment. Child streams are derived per
// (module, purpose) by mixing the parent state with a tag hash through the
// splitmix64 finalizer:
//
//   child(tag)   : state' = mix(state ^ fnv1a64(tag))
//   child(index) : state' = mix(state ^ (0x9e3779b97f4a7c15 * (index + 1)))
//
// Streams derived this way are independent of evaluation order, so a rollout
// or an episode draws the same numbers whether it runs on one thread or many.
//
// Sampling uses xoshiro-style splitmix64 output directly (not std::
// distributions, whose output is implementation-defined), so sequences are
// identical across standard libraries.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    [[nodiscard]] RngStream child(std::string_view tag) const;
    [[nodiscard]] RngStream child(std::uint64_t index) const;

    std::uint64_t next_u64();

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform();

    // Uniform integer in [0, n); n >= 1.
    std::uint64_t uniform_below(std::uint64_t n);

    // Uniform in [lo, hi].
    double uniform_in(double lo, double hi);

    // Standard normal via the Marsaglia polar method.
    double normal();

    // Index sampled from cumulative probabilities (last entry treated as 1).
    std::size_t sample_cdf(const std::vector<double>& cdf);

    [[nodiscard]] std::uint64_t state() const { return state_; }

    static std::uint64_t mix(std::uint64_t x);
    static std::uint64_t fnv1a64(std::string_view s);

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace tensorplan
