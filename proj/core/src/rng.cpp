#include "qmccf/rng.hpp"

namespace qmccf {
namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;  // golden ratio
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;  // sqrt(3) - 1
constexpr std::uint64_t kChildSalt = 0x53504C4954ULL;  // "SPLIT"

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t* hi) {
#if defined(__SIZEOF_INT128__)
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    *hi = static_cast<std::uint64_t>(p >> 64);
    return static_cast<std::uint64_t>(p);
#else
    const std::uint64_t a_lo = a & 0xFFFFFFFFULL, a_hi = a >> 32;
    const std::uint64_t b_lo = b & 0xFFFFFFFFULL, b_hi = b >> 32;
    const std::uint64_t t = a_hi * b_lo + ((a_lo * b_lo) >> 32);
    const std::uint64_t u = a_lo * b_hi + (t & 0xFFFFFFFFULL);
    *hi = a_hi * b_hi + (t >> 32) + (u >> 32);
    return a * b;
#endif
}

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(const std::array<std::uint64_t, 2>& key,
                                               const std::array<std::uint64_t, 4>& counter) {
    std::array<std::uint64_t, 4> c = counter;
    std::array<std::uint64_t, 2> k = key;
    for (int round = 0; round < kRounds; ++round) {
        std::uint64_t hi0, hi1;
        const std::uint64_t lo0 = mulhilo(kMul0, c[0], &hi0);
        const std::uint64_t lo1 = mulhilo(kMul1, c[2], &hi1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

void Philox4x64::refill() {
    block_ = block(key_, counter_);
    cursor_ = 0;
    for (int i = 0; i < 4; ++i) {
        if (++counter_[i] != 0) break;  // 256-bit little-endian increment
    }
}

std::uint64_t Philox4x64::next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    // Rejection sampling keeps the distribution exact and portable.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t draw;
    do {
        draw = next_u64();
    } while (draw > limit);
    return draw % bound;
}

RngStream RngStream::child(std::uint64_t tag) const {
    const auto out = Philox4x64::block({hi, lo}, {tag, kChildSalt, 0, 0});
    return RngStream{out[0], out[1]};
}

}  // namespace qmccf
