#ifndef QST_RNG_HPP
#define QST_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

// Deterministic, platform-independent random numbers.
//
// Every stochastic operation in the library draws from an explicit stream.
// Streams are derived hierarchically from a user seed with the splitmix64
// finalizer, so per-chain / per-update substreams are independent of each
// other and of scheduling: chain i sees the same numbers no matter how many
// threads run the batch. The raw generator is xoshiro256**. Uniform doubles
// are produced from the top 53 bits directly (no std::distribution, whose
// output is implementation-defined).

namespace qst {

inline constexpr const char* kRngDescription =
    "xoshiro256** with splitmix64-derived substreams";

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64_next(s);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = detail::splitmix64_next(s);
    }

    std::uint64_t operator()() {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n), by rejection; n >= 1.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = (*this)();
            if (r >= threshold) return r % n;
        }
    }

    // Standard normal via Box-Muller (the second value is discarded to keep
    // the draw count per call fixed).
    double normal() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    std::array<std::uint64_t, 4> state_;
};

// A point in the stream hierarchy. child(salt) derives an independent
// substream; generator() instantiates the RNG at this point.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : key_(detail::mix64(seed)) {}

    RngStream child(std::uint64_t salt) const {
        RngStream s(*this);
        s.key_ = detail::mix64(key_ ^ detail::mix64(salt + 0x632BE59BD9B4E019ULL));
        return s;
    }

    Xoshiro256 generator() const { return Xoshiro256(key_); }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

}  // namespace qst

#endif
