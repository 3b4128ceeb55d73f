#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace bbm {

//---------------------------------------------------------------------------//
// Splittable, counter-based random streams.
//
// Every genealogy node owns a 64-bit key. The key of a child is a hash of
// the parent key and the child's side bit, so the draws used by a node depend
// only on (root seed, path from the root) and never on traversal order or on
// which other subtrees were simulated. Draw i of a stream is
// splitmix64_mix(key + (i + 1) * golden), i.e. SplitMix64 seeded by the key.
//---------------------------------------------------------------------------//

/// SplitMix64 output function.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Murmur3 fmix64; used for key derivation so keys and stream outputs use
/// different mixers.
constexpr std::uint64_t fmix64(std::uint64_t k) noexcept
{
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdull;
    k ^= k >> 33;
    k *= 0xc4ceb9fe1a85ec53ull;
    k ^= k >> 33;
    return k;
}

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ull;

/// Key of the root particle of a replica.
constexpr std::uint64_t root_key(std::uint64_t seed) noexcept
{
    return fmix64(seed ^ 0x5bd1e9955bd1e995ull);
}

/// Key of child `side` (0 or 1) of the node with key `parent`.
constexpr std::uint64_t child_key(std::uint64_t parent, unsigned side) noexcept
{
    constexpr std::uint64_t salt[2] = {0x2545f4914f6cdd1dull, 0x9fb21c651e98df25ull};
    return fmix64(parent ^ salt[side & 1u]) + golden_gamma;
}

/// Map 64 random bits to the open interval (0, 1); 52 bits keep 1 - u exact.
constexpr double to_open_unit(std::uint64_t bits) noexcept
{
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Counter-based stream: the i-th draw is a pure function of (key, i).
class NodeStream
{
  public:
    constexpr explicit NodeStream(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept
    {
        return splitmix64_mix(key_ + (counter + 1) * golden_gamma);
    }

    constexpr double uniform(std::uint64_t counter) const noexcept
    {
        return to_open_unit(bits(counter));
    }

    constexpr std::uint64_t key() const noexcept { return key_; }

  private:
    std::uint64_t key_;
};

/// Exponential(1) variate from a uniform in (0, 1).
inline double exponential_from_uniform(double u) noexcept
{
    return -std::log(u);
}

/// Box-Muller: two independent standard normals from two uniforms in (0, 1).
inline std::pair<double, double> box_muller(double u1, double u2) noexcept
{
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

/// Sequential SplitMix64 engine, for test generators and synthetic data.
/// Satisfies UniformRandomBitGenerator.
class SplitMix64
{
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept { return splitmix64_mix(state_ += golden_gamma); }

    double uniform() noexcept { return to_open_unit((*this)()); }

    double normal() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        auto [a, b] = box_muller(u1, u2);
        spare_ = b;
        has_spare_ = true;
        return a;
    }

    double exponential() noexcept { return exponential_from_uniform(uniform()); }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace bbm
