#pragma once

#include <array>
#include <cstdint>

namespace qmccf {

/**
 * Philox4x64 counter-based random number generator, 10 rounds.
 *
 * Every output word is a pure function of (key, counter), so points and
 * replicate streams are reproducible across platforms and safe to generate
 * in parallel. Matches the Random123 / numpy Philox definition; see the
 * known-answer vectors in the test suite.
 */
class Philox4x64 {
public:
    using result_type = std::uint64_t;
    static constexpr int kRounds = 10;

    Philox4x64(std::uint64_t key0, std::uint64_t key1)
        : key_{key0, key1}, counter_{0, 0, 0, 0}, cursor_(4) {}

    /// One Philox block: 4 output words from (key, counter). Stateless.
    static std::array<std::uint64_t, 4> block(const std::array<std::uint64_t, 2>& key,
                                              const std::array<std::uint64_t, 4>& counter);

    std::uint64_t next_u64() {
        if (cursor_ == 4) refill();
        return block_[cursor_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) without modulo bias.
    std::uint64_t next_below(std::uint64_t bound);

private:
    void refill();

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> block_{};
    int cursor_;
};

/**
 * A node in the splittable seed tree.
 *
 * child(tag) derives an independent stream via one Philox block over the
 * counter (tag, salt, 0, 0); the nonzero salt keeps derivation counters
 * disjoint from the (c, 0, 0, 0) counters used by ordinary draws, so a
 * stream never overlaps its own children.
 */
struct RngStream {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    RngStream child(std::uint64_t tag) const;

    Philox4x64 generator() const { return Philox4x64(hi, lo); }
};

/// Root of the seed tree for a user-supplied 64-bit seed.
inline RngStream root_stream(std::uint64_t seed) { return RngStream{seed, 0}; }

}  // namespace qmccf
