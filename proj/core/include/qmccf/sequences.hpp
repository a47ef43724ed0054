#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmccf/rng.hpp"

namespace qmccf {

/// A point in the unit cube [0,1)^d.
using Point = std::vector<double>;

enum class SequenceKind {
    IidUniform,             // seeded pseudorandom draws
    Halton,                 // deterministic Halton, indices 1..n
    ScrambledShiftedHalton, // per-base digit scramble + one uniform shift mod 1
    MidpointGrid,           // d-fold product of {(2j-1)/(2m) : j=1..m}
};

std::string to_string(SequenceKind kind);
SequenceKind sequence_kind_from_string(const std::string& name);

/**
 * Recipe for a point set. Regenerating from an identical spec reproduces the
 * identical point list bit for bit.
 */
struct SequenceSpec {
    SequenceKind kind = SequenceKind::Halton;
    int dims = 1;
    std::uint64_t seed = 0;   // ignored by the deterministic kinds
    std::vector<int> bases;   // Halton kinds; empty selects the first `dims` primes
    int grid_resolution = 0;  // MidpointGrid: points per dimension (0 = infer from n)

    bool operator==(const SequenceSpec&) const = default;
};

struct PointSet {
    int dims = 0;
    std::vector<Point> points;
    std::optional<SequenceSpec> spec;  // present when produced by generate()

    std::size_t size() const { return points.size(); }
};

/// First `count` primes, ascending.
std::vector<int> first_primes(int count);

/// Base-b digit reversal of `index` across the radix point; result in [0,1).
double radical_inverse(std::uint64_t index, int base);

/**
 * Random digit permutation for one Halton base.
 *
 * The same permutation applies at every digit position, including the zero
 * digits above an index's most significant digit: a fixed count of positions
 * (enough to saturate double precision) is scrambled, which keeps the first
 * b^k scrambled values a permutation of the k-digit grid {j/b^k}.
 */
class DigitScramble {
public:
    DigitScramble(int base, RngStream stream);

    double scrambled_radical_inverse(std::uint64_t index) const;

    int base() const { return base_; }
    int digit_count() const { return digits_; }
    const std::vector<int>& permutation() const { return perm_; }

private:
    int base_;
    int digits_;
    std::vector<int> perm_;
};

/**
 * Generate the first n points of the sequence described by spec.
 *
 * Pure in (spec, n): repeated calls return bit-identical point sets, and
 * generation of distinct specs may run concurrently.
 */
PointSet generate(const SequenceSpec& spec, std::size_t n);

/// Coordinate-wise (c + shift_j) mod 1 applied to every point.
PointSet random_shift(const PointSet& ps, const Point& shift);

}  // namespace qmccf
