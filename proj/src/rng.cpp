#include "hmon/rng.hpp"

#include <cassert>

namespace hmon {

std::uint64_t RngStream::next_u64() {
    // splitmix64 (Steele, Lea, Vigna)
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double RngStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    assert(n >= 1);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

bool RngStream::bernoulli(double p) {
    return next_unit() < p;
}

std::vector<std::uint8_t> RngStream::next_bytes(std::size_t count) {
    std::vector<std::uint8_t> out;
    out.reserve(count);
    while (out.size() < count) {
        std::uint64_t word = next_u64();
        for (int i = 0; i < 8 && out.size() < count; ++i) {
            out.push_back(static_cast<std::uint8_t>(word >> (8 * i)));
        }
    }
    return out;
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view label, std::uint64_t index) {
    std::uint64_t h = fnv1a(label);
    h ^= parent + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= index * 0xff51afd7ed558ccdull;
    // one splitmix round to decorrelate nearby indices
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    return h ^ (h >> 31);
}

std::vector<std::uint8_t> keystream(std::uint64_t seed, std::size_t length) {
    RngStream stream(seed);
    return stream.next_bytes(length);
}

void xor_bytes(std::vector<std::uint8_t>& data, const std::vector<std::uint8_t>& key) {
    const std::size_t n = data.size() < key.size() ? data.size() : key.size();
    for (std::size_t i = 0; i < n; ++i) {
        data[i] ^= key[i];
    }
}

} // namespace hmon
