#pragma once

// Deterministic random streams for reproducible simulation runs.
//
// The generator is splitmix64 (Steele, Lea & Flood 2014; Vigna 2015): a
// 64-bit counter-based generator whose whole state is one word, so streams
// are cheap to derive and replay. Substreams are derived from a master seed
// by hashing (master, purpose label, index); every consumer of randomness
// names its own stream, so adding a module or raising the replication count
// never perturbs the draws of existing streams.
//
// Stream draw conventions (relied on by replay tests):
//   next_unit()    consumes exactly one 64-bit draw, returns [0,1).
//   next_normal()  consumes exactly two 64-bit draws (Box-Muller, cosine
//                  branch only).
//   next_below(n)  consumes a variable but stream-determined number of
//                  draws (unbiased rejection).

#include <cstdint>
#include <string_view>

namespace ace {

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// FNV-1a over a byte string; used only for labeling streams, not hashing
/// untrusted data.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Derives the seed of the substream identified by (label, index) under a
/// master seed. The derivation is pure arithmetic: documented, stable, and
/// independent of call order.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
    std::uint64_t h = fnv1a64(label);
    h = splitmix64_mix(h ^ master);
    h = splitmix64_mix(h ^ (index + 1) * kSplitMix64Gamma);
    return h;
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += kSplitMix64Gamma);
        return splitmix64_mix(z);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Gaussian via Box-Muller; always consumes two 64-bit draws. The first
    /// uniform has its low bit forced to 1 so log() never sees zero.
    double next_normal(double mean, double sd);

    /// Uniform integer in [0, n); unbiased via rejection. n must be > 0.
    std::uint64_t next_below(std::uint64_t n);

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Stream for the substream (master, label, index).
inline RandomStream substream(std::uint64_t master, std::string_view label,
                              std::uint64_t index = 0) {
    return RandomStream(derive_seed(master, label, index));
}

}  // namespace ace
