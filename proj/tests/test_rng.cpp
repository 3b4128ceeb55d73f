#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "bbm/rng.hpp"

using namespace bbm;

TEST_CASE("splitmix64 reference sequence from seed 0")
{
    SplitMix64 g(0);
    CHECK(g() == 0xe220a8397b1dcdafull);
    CHECK(g() == 0x6e789e6aa1b965f4ull);
    CHECK(g() == 0x06c45d188009454full);
}

TEST_CASE("fmix64 reference values")
{
    CHECK(fmix64(0) == 0);
    CHECK(fmix64(1) == 0xb456bcfc34c2cb2cull);
    CHECK(fmix64(0x0123456789abcdefull) == 0x87cbfbfe89022ceaull);
}

TEST_CASE("node stream draw i equals splitmix64 seeded by the key")
{
    for (std::uint64_t key : {0ull, 1ull, 0xdeadbeefull, ~0ull}) {
        SplitMix64 g(key);
        const NodeStream s(key);
        for (std::uint64_t i = 0; i < 8; ++i)
            CHECK(s.bits(i) == g());
    }
}

TEST_CASE("child keys are distinct along a deep binary tree")
{
    std::set<std::uint64_t> keys;
    std::vector<std::uint64_t> level{root_key(7)};
    keys.insert(level.front());
    for (int depth = 0; depth < 14; ++depth) {
        std::vector<std::uint64_t> next;
        for (auto k : level) {
            for (unsigned side : {0u, 1u}) {
                next.push_back(child_key(k, side));
                keys.insert(next.back());
            }
        }
        level = std::move(next);
    }
    CHECK(keys.size() == (1u << 15) - 1);
    CHECK(child_key(5, 0) != child_key(5, 1));
    CHECK(root_key(1) != root_key(2));
}

TEST_CASE("open unit interval endpoints")
{
    CHECK(to_open_unit(0) > 0.0);
    CHECK(to_open_unit(~0ull) < 1.0);
    CHECK(to_open_unit(0) == doctest::Approx(0x1.0p-53).epsilon(1e-12));
}

TEST_CASE("sequential generator moments")
{
    SplitMix64 g(2024);
    const int n = 200000;
    double su = 0, se = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) {
        su += g.uniform();
        se += g.exponential();
        const double z = g.normal();
        sn += z;
        sn2 += z * z;
    }
    // 5 standard errors
    CHECK(std::fabs(su / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
    CHECK(std::fabs(se / n - 1.0) < 5 * std::sqrt(1.0 / n));
    CHECK(std::fabs(sn / n) < 5 * std::sqrt(1.0 / n));
    CHECK(std::fabs(sn2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
}

TEST_CASE("box-muller maps known uniforms")
{
    const auto [a, b] = box_muller(std::exp(-0.5), 0.25);
    // r = 1, theta = pi/2
    CHECK(a == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(exponential_from_uniform(std::exp(-2.0)) == doctest::Approx(2.0));
}
