#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbm/kernels.hpp"

using namespace bbm::kernels;

namespace {

constexpr double rel_tol = 1e-12;

struct Data
{
    std::vector<double> x;
    std::vector<double> y;
};

Data make(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 3.0);
    Data d;
    for (std::size_t i = 0; i < n; ++i) {
        d.x.push_back(std::fabs(g(rng)) + 0.1 * static_cast<double>(i % 7));
        d.y.push_back(g(rng));
    }
    return d;
}

// the scalar sums serve as the reference; the bound scales with sum |terms|
void check_close(ComplexSum a, ComplexSum b, double scale)
{
    CHECK(std::fabs(a.re - b.re) <= rel_tol * scale + 1e-300);
    CHECK(std::fabs(a.im - b.im) <= rel_tol * scale + 1e-300);
}

bool have_avx2()
{
    return isa_available(Isa::avx2);
}

} // namespace

TEST_CASE("scalar kernels on hand-computed inputs")
{
    const std::vector<double> x{0.0, 1.0};
    const std::vector<double> y{0.0, 0.5};
    const auto s = scalar::phase_sum(x, y, 2.0, 3.0, 0.0);
    CHECK(s.re == doctest::Approx(1.0 + std::exp(-2.0) * std::cos(1.5)));
    CHECK(s.im == doctest::Approx(std::exp(-2.0) * std::sin(1.5)));
    CHECK(scalar::exp_sum(x, 1.5) == doctest::Approx(1.0 + std::exp(-1.5)));
    const auto e = scalar::ecf_sum(x, y, 1.0, 2.0);
    CHECK(e.re == doctest::Approx(1.0 + std::cos(2.0)));
    CHECK(e.im == doctest::Approx(std::sin(2.0)));
    const auto empty = scalar::phase_sum({}, {}, 1.0, 1.0, 0.0);
    CHECK(empty.re == 0.0);
    CHECK(empty.im == 0.0);
}

TEST_CASE("shift factors out of the phase sum")
{
    const auto d = make(50, 1);
    const auto a = scalar::phase_sum(d.x, d.y, 0.8, 1.1, 0.0);
    const auto b = scalar::phase_sum(d.x, d.y, 0.8, 1.1, 2.0);
    CHECK(b.re * std::exp(-0.8 * 2.0) == doctest::Approx(a.re).epsilon(1e-13));
    CHECK(b.im * std::exp(-0.8 * 2.0) == doctest::Approx(a.im).epsilon(1e-13));
}

TEST_CASE("avx2 kernels match scalar on every tail length")
{
    if (!have_avx2()) {
        MESSAGE("avx2 unavailable; equivalence not exercised");
        return;
    }
    std::vector<std::size_t> sizes;
    for (std::size_t n = 0; n <= 9; ++n)
        sizes.push_back(n);
    sizes.push_back(1023);
    sizes.push_back(100'003);
    for (std::size_t n : sizes) {
        CAPTURE(n);
        const auto d = make(n, 100 + n);
        for (double gamma : {0.3, 0.8, 1.0, 1.7}) {
            for (double omega : {0.0, 0.75, 5.0}) {
                double scale = 0.0;
                for (double v : d.x)
                    scale += std::exp(-gamma * (v - 0.5));
                check_close(avx2::phase_sum(d.x, d.y, gamma, omega, 0.5),
                            scalar::phase_sum(d.x, d.y, gamma, omega, 0.5), scale);
            }
            double scale = 0.0;
            for (double v : d.x)
                scale += std::exp(-gamma * v);
            CHECK(std::fabs(avx2::exp_sum(d.x, gamma) - scalar::exp_sum(d.x, gamma)) <=
                  rel_tol * scale + 1e-300);
        }
        for (double u : {0.01, 1.0, 30.0}) {
            check_close(avx2::ecf_sum(d.x, d.y, u, -0.5 * u), scalar::ecf_sum(d.x, d.y, u, -0.5 * u),
                        static_cast<double>(n));
        }
    }
}

TEST_CASE("avx2 lane math is accurate across the working range")
{
    if (!have_avx2())
        return;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ue(-700.0, 700.0);
    std::uniform_real_distribution<double> ut(-1e4, 1e4);
    for (int rep = 0; rep < 2000; ++rep) {
        double in[4];
        double out[4];
        for (double& v : in)
            v = ue(rng);
        avx2::exp4(in, out);
        for (int k = 0; k < 4; ++k)
            CHECK(std::fabs(out[k] / std::exp(in[k]) - 1.0) < 4e-15);
        double s[4];
        double c[4];
        for (double& v : in)
            v = ut(rng);
        avx2::sincos4(in, s, c);
        for (int k = 0; k < 4; ++k) {
            CHECK(std::fabs(s[k] - std::sin(in[k])) < 1e-13);
            CHECK(std::fabs(c[k] - std::cos(in[k])) < 1e-13);
        }
    }
}

TEST_CASE("dispatch override and size checks")
{
    const Isa before = active_isa();
    CHECK(set_active_isa(Isa::scalar) == before);
    CHECK(active_isa() == Isa::scalar);
    const auto d = make(17, 9);
    const auto s = phase_sum(d.x, d.y, 1.0, 0.5, 0.0);
    const auto ref = scalar::phase_sum(d.x, d.y, 1.0, 0.5, 0.0);
    CHECK(s.re == ref.re);
    CHECK(s.im == ref.im);
    set_active_isa(before);
    CHECK(isa_name(Isa::scalar) == "scalar");
    CHECK(isa_name(Isa::avx2) == "avx2");
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(phase_sum(one, {}, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ecf_sum(one, {}, 1.0, 1.0), std::invalid_argument);
    if (const char* env = std::getenv("BBM_SIMD"); env && std::string(env) == "scalar")
        CHECK(before == Isa::scalar);
}
