#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "bbm/error.hpp"
#include "bbm/functionals.hpp"

using namespace bbm;

namespace {

ReplicaOutput replica(double t, std::uint64_t seed)
{
    SimConfig c;
    c.t_final = t;
    c.seed = seed;
    return simulate(c);
}

std::complex<double> brute_partition(const ReplicaOutput& r, double gamma, double beta)
{
    std::complex<double> z;
    for (const auto& l : r.leaves)
        z += std::exp(-gamma * l.x) *
             std::polar(1.0, std::numbers::sqrt2 * beta * l.y);
    return z;
}

} // namespace

TEST_CASE("partition matches a direct sum and its normalization")
{
    const auto r = replica(5.0, 17);
    for (double gamma : {0.4, 0.8, 1.0, 1.5}) {
        for (double beta : {0.0, 0.3, 0.9}) {
            const auto p = complex_partition(r, gamma, beta);
            const auto z = brute_partition(r, gamma, beta);
            CHECK(p.raw.real() == doctest::Approx(z.real()).epsilon(1e-12));
            CHECK(p.raw.imag() == doctest::Approx(z.imag()).epsilon(1e-12));
            const double norm = std::pow(5.0, 1.5 * gamma);
            CHECK(std::abs(p.normalized - norm * p.raw) <= 1e-12 * norm * std::abs(p.raw));
        }
    }
}

TEST_CASE("beta = 0 reduces to the additive martingale")
{
    const auto r = replica(4.0, 2);
    for (double gamma : {0.5, 1.0, 2.0}) {
        const auto p = complex_partition(r, gamma, 0.0);
        CHECK(p.raw.imag() == 0.0);
        CHECK(p.raw.real() == doctest::Approx(additive_martingale(r, gamma)).epsilon(1e-13));
    }
}

TEST_CASE("shifting every position scales the partition by e^{-gamma c}")
{
    const auto r = replica(4.0, 8);
    auto shifted = r;
    for (auto& l : shifted.leaves)
        l.x += 0.7;
    const auto a = complex_partition(r, 0.9, 0.4).raw;
    const auto b = complex_partition(shifted, 0.9, 0.4).raw;
    CHECK(std::abs(b - std::exp(-0.9 * 0.7) * a) <= 1e-12 * std::abs(a));
}

TEST_CASE("truncated partition plus remainder equals the full sum")
{
    const auto r = replica(6.0, 4);
    const SortedLeaves s(r);
    for (double k : {-2.0, 0.0, 1.5, 4.0, 50.0}) {
        const auto full = complex_partition(s, 0.8, 0.6).normalized;
        const auto trunc = complex_partition(s, 0.8, 0.6, k).normalized;
        const auto rem = tail_remainder(s, 0.8, 0.6, k);
        CHECK(std::abs(trunc + rem - full) <= 1e-12 * std::abs(full));
    }
    CHECK(std::abs(tail_remainder(s, 0.8, 0.6, 50.0)) == 0.0);
}

TEST_CASE("derivative martingale and recentered minimum")
{
    const auto r = replica(5.0, 31);
    double d = 0.0;
    double m = INFINITY;
    for (const auto& l : r.leaves) {
        d += l.x * std::exp(-l.x);
        m = std::min(m, l.x);
    }
    CHECK(derivative_martingale(r) == doctest::Approx(d).epsilon(1e-12));
    CHECK(recentered_minimum(r) == m - bramson_level(5.0));
    CHECK(bramson_level(std::exp(2.0)) == doctest::Approx(3.0));
}

TEST_CASE("pairwise overlap equals the quadratic sum over leaf pairs")
{
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto r = replica(4.5, seed);
        const double t = r.t_final();
        const LcaIndex index(r.genealogy);
        for (auto [gamma, beta] : {std::pair{0.75, 0.75}, {1.0, 0.3}, {0.4, 0.6}}) {
            double brute = 0.0;
            const auto n = static_cast<LeafId>(r.n_leaves());
            for (LeafId i = 0; i < n; ++i) {
                for (LeafId j = 0; j < n; ++j) {
                    const double tau = mrca_time(r.genealogy, index, i, j);
                    brute += std::exp(-gamma * (r.leaves[i].x + r.leaves[j].x) -
                                      2.0 * beta * beta * (t - tau));
                }
            }
            CHECK(pairwise_overlap(r, gamma, beta) == doctest::Approx(brute).epsilon(1e-11));
        }
        // beta = 0 collapses to the squared additive martingale
        const double w = additive_martingale(r, 0.9);
        CHECK(pairwise_overlap(r, 0.9, 0.0) == doctest::Approx(w * w).epsilon(1e-12));
    }
}

TEST_CASE("clusters partition the window by genealogical depth")
{
    const auto r = replica(7.0, 12);
    const double t = r.t_final();
    const double k = 3.0;
    const double b = 2.0;
    const auto clusters = extract_clusters(r, k, b);
    const double level = bramson_level(t) + k;

    std::map<LeafId, std::size_t> owner;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const auto& cl = clusters[c];
        const auto& anchor = r.leaves[static_cast<std::size_t>(cl.anchor_leaf)];
        CHECK(cl.anchor_level == anchor.x - bramson_level(t));
        if (c > 0)
            CHECK(clusters[c - 1].anchor_level <= cl.anchor_level);
        owner[cl.anchor_leaf] = c;
        double prev = 0.0;
        for (const auto& m : cl.members) {
            CHECK(m.dx >= 0.0);
            CHECK(m.dx >= prev);
            prev = m.dx;
            CHECK(m.split_age < b);
            CHECK(anchor.x + m.dx <= level);
        }
    }
    std::size_t in_window = 0;
    for (const auto& l : r.leaves)
        in_window += l.x <= level;
    std::size_t listed = clusters.size();
    for (const auto& cl : clusters)
        listed += cl.members.size();
    CHECK(listed == in_window);

    // two window leaves share a cluster iff they split less than b ago
    std::vector<LeafId> window;
    for (std::size_t i = 0; i < r.n_leaves(); ++i) {
        if (r.leaves[i].x <= level)
            window.push_back(static_cast<LeafId>(i));
    }
    std::map<LeafId, std::size_t> cluster_of;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const auto& anchor = r.leaves[static_cast<std::size_t>(clusters[c].anchor_leaf)];
        cluster_of[clusters[c].anchor_leaf] = c;
        for (LeafId i : window) {
            if (i != clusters[c].anchor_leaf &&
                t - mrca_time(r.genealogy, i, clusters[c].anchor_leaf) < b) {
                CHECK(r.leaves[i].x >= anchor.x);
                cluster_of[i] = c;
            }
        }
    }
    CHECK(cluster_of.size() == window.size());
    for (std::size_t a = 0; a < window.size(); ++a) {
        for (std::size_t c = a + 1; c < window.size(); ++c) {
            const bool close = t - mrca_time(r.genealogy, window[a], window[c]) < b;
            CHECK(close == (cluster_of[window[a]] == cluster_of[window[c]]));
        }
    }
    CHECK_THROWS_AS(extract_clusters(r, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(extract_clusters(r, 1.0, -1.0), DomainError);
}

TEST_CASE("fully pruned replica has an infinite recentered minimum")
{
    SimConfig c;
    c.t_final = 6.0;
    c.seed = 1;
    c.prune_epsilon = 0.5;
    auto r = simulate(c);
    r.leaves.clear();
    CHECK(std::isinf(recentered_minimum(r)));
    CHECK(complex_partition(r, 1.0, 0.5).raw == std::complex<double>{});
}
