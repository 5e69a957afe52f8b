#ifndef HMON_RNG_HPP
#define HMON_RNG_HPP

#include <cstdint>
#include <cstddef>
#include <string_view>
#include <vector>

namespace hmon {

// Deterministic splitmix64 stream. std:: distributions are
// implementation-defined, so all draws go through this class to keep
// event logs byte-identical across toolchains.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    // Uniform double in [0, 1).
    double next_unit();

    // Uniform integer in [0, n). Rejection sampling, n >= 1.
    std::uint64_t next_below(std::uint64_t n);

    bool bernoulli(double p);

    std::vector<std::uint8_t> next_bytes(std::size_t count);

private:
    std::uint64_t state_;
};

// FNV-1a over an arbitrary byte view.
std::uint64_t fnv1a(std::string_view data, std::uint64_t basis = 14695981039346656037ull);

// Child seed from a parent seed, a stream label, and an index. Adding a
// new named stream never perturbs draws of existing streams.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label, std::uint64_t index = 0);

// Keyed pseudorandom byte stream (the monitor's "white noise").
std::vector<std::uint8_t> keystream(std::uint64_t seed, std::size_t length);

void xor_bytes(std::vector<std::uint8_t>& data, const std::vector<std::uint8_t>& key);

} // namespace hmon

#endif
