#include "ace/rng.hpp"

#include <cmath>
#include <numbers>

namespace ace {

double RandomStream::next_normal(double mean, double sd) {
    const double u1 =
        static_cast<double>((next_u64() >> 11) | 1ull) * 0x1.0p-53;
    const double u2 = next_unit();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * mag * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RandomStream::next_below(std::uint64_t n) {
    // Classic rejection on the top of the range; expected < 2 draws.
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
}

}  // namespace ace
