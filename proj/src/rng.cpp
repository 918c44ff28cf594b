#include "tensorplan/rng.hpp"

#include <cmath>

namespace tensorplan {

std::uint64_t RngStream::mix(std::uint64_t x) {
    // splitmix64 finalizer (Steele, Lea, Flood 2014).
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t RngStream::fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

RngStream RngStream::child(std::string_view tag) const {
    return RngStream(mix(state_ ^ fnv1a64(tag)));
}

RngStream RngStream::child(std::uint64_t index) const {
    return RngStream(mix(state_ ^ (0x9e3779b97f4a7c15ull * (index + 1))));
}

std::uint64_t RngStream::next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
    // Rejection to remove modulo bias.
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

double RngStream::uniform_in(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RngStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
}

std::size_t RngStream::sample_cdf(const std::vector<double>& cdf) {
    const double u = uniform();
    for (std::size_t i = 0; i + 1 < cdf.size(); ++i) {
        if (u < cdf[i]) return i;
    }
    return cdf.empty() ? 0 : cdf.size() - 1;
}

}  // namespace tensorplan
