#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation (std:: math, sequential compensated summation) and, on x86-64,
// an AVX2+FMA variant (4-lane polynomial exp/sincos, per-lane compensated
// sums). The variant is chosen once at runtime from CPUID; the environment
// variable BBM_SIMD=scalar forces the reference path. Both are kept within a
// documented relative tolerance of each other by the kernel equivalence tests.

#include <span>
#include <string_view>

namespace bbm::kernels {

struct ComplexSum
{
    double re = 0.0;
    double im = 0.0;
};

enum class Isa
{
    scalar,
    avx2,
};

std::string_view isa_name(Isa isa) noexcept;

/// Whether `isa` can run on this machine (and was compiled in).
bool isa_available(Isa isa) noexcept;

/// The variant used by the dispatching entry points below.
Isa active_isa() noexcept;

/// Override the dispatch target; returns the previous one. Throws
/// std::invalid_argument if the ISA is unavailable. Not thread-safe; meant
/// for tests and benchmarks.
Isa set_active_isa(Isa isa);

/// sum_i exp(-gamma (x_i - shift)) * (cos(omega y_i), sin(omega y_i))
ComplexSum phase_sum(std::span<const double> x, std::span<const double> y, double gamma,
                     double omega, double shift);

/// sum_i exp(-a d_i)
double exp_sum(std::span<const double> d, double a);

/// sum_j (cos(u re_j + v im_j), sin(u re_j + v im_j))
ComplexSum ecf_sum(std::span<const double> re, std::span<const double> im, double u, double v);

namespace scalar {
ComplexSum phase_sum(std::span<const double> x, std::span<const double> y, double gamma,
                     double omega, double shift);
double exp_sum(std::span<const double> d, double a);
ComplexSum ecf_sum(std::span<const double> re, std::span<const double> im, double u, double v);
} // namespace scalar

namespace avx2 {
ComplexSum phase_sum(std::span<const double> x, std::span<const double> y, double gamma,
                     double omega, double shift);
double exp_sum(std::span<const double> d, double a);
ComplexSum ecf_sum(std::span<const double> re, std::span<const double> im, double u, double v);

/// Lane math exposed for accuracy tests.
void exp4(const double* in, double* out);
void sincos4(const double* in, double* sin_out, double* cos_out);
} // namespace avx2

} // namespace bbm::kernels
