#include "qmccf/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qmccf {
namespace {

constexpr std::uint64_t kPermTag = 1;
constexpr std::uint64_t kShiftTag = 2;

bool is_prime(int n) {
    if (n < 2) return false;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) return false;
    }
    return true;
}

std::vector<int> resolve_bases(const SequenceSpec& spec) {
    if (spec.bases.empty()) return first_primes(spec.dims);
    if (static_cast<int>(spec.bases.size()) != spec.dims) {
        throw std::invalid_argument("sequences: bases count must equal dims");
    }
    for (std::size_t j = 0; j < spec.bases.size(); ++j) {
        if (!is_prime(spec.bases[j])) {
            throw std::invalid_argument("sequences: bases must be prime");
        }
        if (j > 0 && spec.bases[j] <= spec.bases[j - 1]) {
            throw std::invalid_argument("sequences: bases must be distinct and ascending");
        }
    }
    return spec.bases;
}

double wrap_unit(double x) {
    x -= std::floor(x);
    return x < 1.0 ? x : 0.0;
}

int grid_side(const SequenceSpec& spec, std::size_t n) {
    if (spec.grid_resolution > 0) {
        std::size_t total = 1;
        for (int j = 0; j < spec.dims; ++j) total *= static_cast<std::size_t>(spec.grid_resolution);
        if (total != n) {
            throw std::invalid_argument("sequences: midpoint grid needs n = m^dims");
        }
        return spec.grid_resolution;
    }
    const int m = static_cast<int>(std::llround(std::pow(static_cast<double>(n), 1.0 / spec.dims)));
    for (int cand : {m - 1, m, m + 1}) {
        if (cand < 1) continue;
        std::size_t total = 1;
        for (int j = 0; j < spec.dims; ++j) total *= static_cast<std::size_t>(cand);
        if (total == n) return cand;
    }
    throw std::invalid_argument("sequences: n has no integer dims-th root for midpoint grid");
}

}  // namespace

std::string to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::IidUniform: return "iid-uniform";
        case SequenceKind::Halton: return "halton";
        case SequenceKind::ScrambledShiftedHalton: return "scrambled-shifted-halton";
        case SequenceKind::MidpointGrid: return "midpoint-grid";
    }
    throw std::invalid_argument("sequences: unknown kind");
}

SequenceKind sequence_kind_from_string(const std::string& name) {
    if (name == "iid-uniform") return SequenceKind::IidUniform;
    if (name == "halton") return SequenceKind::Halton;
    if (name == "scrambled-shifted-halton") return SequenceKind::ScrambledShiftedHalton;
    if (name == "midpoint-grid") return SequenceKind::MidpointGrid;
    throw std::invalid_argument("sequences: unknown kind '" + name + "'");
}

std::vector<int> first_primes(int count) {
    std::vector<int> out;
    out.reserve(count);
    for (int n = 2; static_cast<int>(out.size()) < count; ++n) {
        if (is_prime(n)) out.push_back(n);
    }
    return out;
}

double radical_inverse(std::uint64_t index, int base) {
    if (base < 2) throw std::invalid_argument("radical_inverse: base must be >= 2");
    const double inv = 1.0 / base;
    double scale = 1.0;
    double value = 0.0;
    while (index > 0) {
        scale *= inv;
        value += static_cast<double>(index % base) * scale;
        index /= base;
    }
    return value;
}

DigitScramble::DigitScramble(int base, RngStream stream) : base_(base) {
    if (base < 2) throw std::invalid_argument("DigitScramble: base must be >= 2");
    // Scramble enough positions that the structure saturates well below double
    // resolution, but stop while base^-digits still exceeds the accumulated
    // rounding error: an all-(base-1) scrambled tail sits base^-digits below a
    // digit-bucket boundary, and that gap has to survive the Horner sum.
    digits_ = 0;
    for (double pow = 1.0; pow < 0x1.0p44; pow *= base) ++digits_;
    perm_.resize(base);
    std::iota(perm_.begin(), perm_.end(), 0);
    auto gen = stream.generator();
    for (int i = base - 1; i > 0; --i) {
        const int j = static_cast<int>(gen.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm_[i], perm_[j]);
    }
}

double DigitScramble::scrambled_radical_inverse(std::uint64_t index) const {
    // Horner evaluation from the least significant fraction digit up; the
    // zero digits above the MSD scramble to perm_[0] like any other digit.
    int digit[64];
    for (int k = 0; k < digits_; ++k) {
        digit[k] = static_cast<int>(index % base_);
        index /= base_;
    }
    if (index != 0) {
        throw std::invalid_argument("DigitScramble: index exceeds the scrambled digit range");
    }
    double value = 0.0;
    for (int k = digits_ - 1; k >= 0; --k) {
        value = (value + perm_[digit[k]]) / base_;
    }
    return value;
}

PointSet generate(const SequenceSpec& spec, std::size_t n) {
    if (spec.dims < 1) throw std::invalid_argument("generate: dims must be >= 1");
    if (n < 1) throw std::invalid_argument("generate: n must be >= 1");

    PointSet ps;
    ps.dims = spec.dims;
    ps.spec = spec;
    ps.points.reserve(n);

    switch (spec.kind) {
        case SequenceKind::IidUniform: {
            auto gen = root_stream(spec.seed).generator();
            for (std::size_t i = 0; i < n; ++i) {
                Point p(spec.dims);
                for (int j = 0; j < spec.dims; ++j) p[j] = gen.next_double();
                ps.points.push_back(std::move(p));
            }
            break;
        }
        case SequenceKind::Halton: {
            const auto bases = resolve_bases(spec);
            for (std::size_t i = 1; i <= n; ++i) {
                Point p(spec.dims);
                for (int j = 0; j < spec.dims; ++j) p[j] = radical_inverse(i, bases[j]);
                ps.points.push_back(std::move(p));
            }
            break;
        }
        case SequenceKind::ScrambledShiftedHalton: {
            const auto bases = resolve_bases(spec);
            const RngStream root = root_stream(spec.seed);
            std::vector<DigitScramble> scrambles;
            scrambles.reserve(spec.dims);
            for (int j = 0; j < spec.dims; ++j) {
                scrambles.emplace_back(bases[j], root.child(kPermTag).child(bases[j]));
            }
            auto shift_gen = root.child(kShiftTag).generator();
            Point shift(spec.dims);
            for (int j = 0; j < spec.dims; ++j) shift[j] = shift_gen.next_double();
            for (std::size_t i = 1; i <= n; ++i) {
                Point p(spec.dims);
                for (int j = 0; j < spec.dims; ++j) {
                    p[j] = wrap_unit(scrambles[j].scrambled_radical_inverse(i) + shift[j]);
                }
                ps.points.push_back(std::move(p));
            }
            break;
        }
        case SequenceKind::MidpointGrid: {
            const int m = grid_side(spec, n);
            std::vector<int> idx(spec.dims, 0);
            for (std::size_t i = 0; i < n; ++i) {
                Point p(spec.dims);
                for (int j = 0; j < spec.dims; ++j) {
                    p[j] = (2.0 * idx[j] + 1.0) / (2.0 * m);
                }
                ps.points.push_back(std::move(p));
                for (int j = spec.dims - 1; j >= 0; --j) {  // last dimension fastest
                    if (++idx[j] < m) break;
                    idx[j] = 0;
                }
            }
            break;
        }
    }
    return ps;
}

PointSet random_shift(const PointSet& ps, const Point& shift) {
    if (static_cast<int>(shift.size()) != ps.dims) {
        throw std::invalid_argument("random_shift: shift dimension mismatch");
    }
    PointSet out;
    out.dims = ps.dims;
    out.points = ps.points;
    for (auto& p : out.points) {
        for (int j = 0; j < ps.dims; ++j) p[j] = wrap_unit(p[j] + shift[j]);
    }
    return out;
}

}  // namespace qmccf
