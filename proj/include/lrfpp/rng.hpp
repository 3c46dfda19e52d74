// rng.hpp — named, counter-based random streams.
//
// Every random draw in the library comes from a stream identified by
// (run seed, purpose tag, instance).  A stream is a pure function of its
// 64-bit key and a draw counter, so any draw can be reproduced in isolation
// and independent streams never share state.  The generator is the SplitMix64
// output function applied to key + counter·golden-ratio increment, which
// passes standard statistical batteries and gives O(1) random access.
#pragma once

#include <cstdint>
#include <string_view>

namespace lrfpp {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer: a bijective 64-bit mix.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// FNV-1a over the tag string, for purpose-tag separation.
inline constexpr std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace detail

// Derive the 64-bit stream key for (seed, tag, instance).
inline constexpr std::uint64_t stream_key(std::uint64_t seed, std::string_view tag,
                                          std::uint64_t instance = 0) {
    std::uint64_t k = detail::mix64(seed ^ detail::kGolden);
    k = detail::mix64(k ^ detail::hash_tag(tag));
    k = detail::mix64(k ^ (instance * detail::kGolden + 1));
    return k;
}

// The value of stream `key` at position `counter`, without a stream object.
// Used for lazily realized i.i.d. fields (e.g. edge weights keyed by edge id).
inline constexpr std::uint64_t stream_value(std::uint64_t key, std::uint64_t counter) {
    return detail::mix64(key + (counter + 1) * detail::kGolden);
}

// Map a u64 to a double in [0, 1) with 53 random mantissa bits.
inline constexpr double to_unit_double(std::uint64_t u) {
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

class RngStream {
  public:
    RngStream(std::uint64_t seed, std::string_view tag, std::uint64_t instance = 0)
        : key_(stream_key(seed, tag, instance)) {}

    explicit RngStream(std::uint64_t raw_key) : key_(raw_key) {}

    std::uint64_t next_u64() { return stream_value(key_, counter_++); }

    // Uniform in [0, 1).
    double next_double() { return to_unit_double(next_u64()); }

    // Exponential with the given rate (mean 1/rate); strictly positive rate.
    double next_exponential(double rate);

    // Uniform integer in [0, n), unbiased (Lemire's multiply-shift with
    // rejection).  n must be >= 1.
    std::uint64_t next_below(std::uint64_t n);

    // Poisson with the given mean: sequential inversion for small means,
    // Hormann's transformed rejection (PTRD) otherwise.  Exact up to double
    // rounding of the acceptance test; mean must be finite and >= 0.
    std::uint64_t next_poisson(double mean);

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }
    void seek(std::uint64_t counter) { counter_ = counter; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace lrfpp
