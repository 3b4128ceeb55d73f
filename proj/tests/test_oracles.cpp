#include <doctest.h>

#include <cmath>
#include <vector>

#include "bbm/error.hpp"
#include "bbm/functionals.hpp"
#include "bbm/oracles.hpp"

using namespace bbm;
using namespace bbm::oracles;

namespace {

// independent route: pairs splitting at s weighted by 2 e^{2t - s}, Simpson's rule
double second_moment_quadrature(double t, double g, double b)
{
    auto f = [&](double s) {
        return 2.0 * std::exp(2.0 * t - s) * std::exp((4.0 * g * g - 4.0 * g) * s) *
               std::exp((2.0 * (g * g - 2.0 * g) - 2.0 * b * b) * (t - s));
    };
    const int n = 20000;
    const double h = t / n;
    double sum = f(0.0) + f(t);
    for (int i = 1; i < n; ++i)
        sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return std::exp((2.0 * g - 1.0) * (2.0 * g - 1.0) * t) + sum * h / 3.0;
}

} // namespace

TEST_CASE("first-moment oracles")
{
    CHECK(expected_count(0.0) == 1.0);
    CHECK(expected_count(2.0) == doctest::Approx(std::exp(2.0)));
    CHECK(expected_additive(5.0, 1.0) == 1.0);
    CHECK(expected_additive(4.0, 0.5) == doctest::Approx(std::exp(1.0)));
    CHECK(expected_partition(3.0, 0.8, 0.0) == expected_additive(3.0, 0.8));
    CHECK(expected_partition(2.0, 1.0, 0.5) == doctest::Approx(std::exp(-0.5)));
    const auto [w, d] = expected_critical(7.0);
    CHECK(w == 1.0);
    CHECK(d == 0.0);
    CHECK_THROWS_AS(expected_count(-1.0), DomainError);
    CHECK_THROWS_AS(expected_critical(0.0), DomainError);
}

TEST_CASE("second moment reference values from independent quadrature")
{
    // scipy.integrate.quad of the same pair density, relative tolerance 1e-13
    CHECK(expected_second_moment(3.0, 0.75, 0.75) == doctest::Approx(5.424540733804372).epsilon(1e-12));
    CHECK(expected_second_moment(3.0, 0.5, 0.5) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(expected_second_moment(2.0, 1.0, 0.3) == doctest::Approx(18.73037774784526).epsilon(1e-12));
    CHECK(expected_second_moment(5.0, 0.8, 0.6) == doctest::Approx(18.067417985282127).epsilon(1e-12));
    for (double t : {0.5, 2.0, 6.0}) {
        for (double g : {0.4, 0.75, 1.0, 1.3}) {
            for (double b : {0.0, 0.5, 0.9}) {
                CAPTURE(t);
                CAPTURE(g);
                CAPTURE(b);
                CHECK(expected_second_moment(t, g, b) ==
                      doctest::Approx(second_moment_quadrature(t, g, b)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("second moment is continuous through 2 gamma^2 + 2 beta^2 = 1")
{
    const double t = 4.0;
    const double g = 0.5;
    const double at = expected_second_moment(t, g, 0.5);
    for (double eps : {1e-5, 1e-7, 1e-9, 1e-11}) {
        CHECK(expected_second_moment(t, g, 0.5 + eps) == doctest::Approx(at).epsilon(1e-4));
        CHECK(expected_second_moment(t, g, 0.5 - eps) == doctest::Approx(at).epsilon(1e-4));
    }
    CHECK(expected_second_moment(0.0, 0.9, 0.4) == 1.0);
}

TEST_CASE("simulated means agree with the oracles")
{
    const double t = 1.5;
    const int n = 20000;
    std::vector<double> count, add, part, over;
    for (int i = 0; i < n; ++i) {
        SimConfig c;
        c.t_final = t;
        c.seed = 5000 + static_cast<std::uint64_t>(i);
        const auto r = simulate(c);
        count.push_back(static_cast<double>(r.n_leaves()));
        add.push_back(additive_martingale(r, 0.8));
        part.push_back(complex_partition(r, 0.8, 0.6).raw.real());
        over.push_back(pairwise_overlap(r, 0.9, 0.8));
    }
    auto within = [&](const std::vector<double>& v, double oracle) {
        double m = 0.0;
        double m2 = 0.0;
        for (double x : v) {
            m += x;
            m2 += x * x;
        }
        m /= n;
        const double se = std::sqrt((m2 / n - m * m) / n);
        CAPTURE(m);
        CAPTURE(oracle);
        CAPTURE(se);
        CHECK(std::fabs(m - oracle) <= 4.0 * se);
    };
    within(count, expected_count(t));
    within(add, expected_additive(t, 0.8));
    within(part, expected_partition(t, 0.8, 0.6));
    within(over, expected_second_moment(t, 0.9, 0.8));
}

TEST_CASE("oracle table rows")
{
    const auto rows = oracle_table(2.0, {0.8, 1.0}, {0.5});
    std::size_t overlap = 0;
    std::size_t partition = 0;
    for (const auto& r : rows) {
        overlap += r.name == "overlap";
        partition += r.name == "partition";
        if (r.name == "overlap")
            CHECK(r.value == expected_second_moment(2.0, r.gamma, r.beta));
    }
    CHECK(overlap == 2);
    CHECK(partition == 2);
    CHECK(rows.front().name == "count");
}
