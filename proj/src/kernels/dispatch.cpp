#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bbm/kernels.hpp"

namespace bbm::kernels {

namespace {

Isa detect() noexcept
{
    if (const char* env = std::getenv("BBM_SIMD"); env && std::string(env) == "scalar")
        return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa& current() noexcept
{
    static Isa isa = detect();
    return isa;
}

} // namespace

std::string_view isa_name(Isa isa) noexcept
{
    switch (isa) {
    case Isa::avx2:
        return "avx2";
    case Isa::scalar:
        break;
    }
    return "scalar";
}

bool isa_available(Isa isa) noexcept
{
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(BBM_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

Isa active_isa() noexcept
{
    return current();
}

Isa set_active_isa(Isa isa)
{
    if (!isa_available(isa))
        throw std::invalid_argument("instruction set not available: " + std::string(isa_name(isa)));
    const Isa previous = current();
    current() = isa;
    return previous;
}

#if defined(BBM_HAVE_AVX2_KERNELS)
#define BBM_DISPATCH(fn, ...)                                                                      \
    (current() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define BBM_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

ComplexSum phase_sum(std::span<const double> x, std::span<const double> y, double gamma,
                     double omega, double shift)
{
    if (x.size() != y.size())
        throw std::invalid_argument("phase_sum: size mismatch");
    return BBM_DISPATCH(phase_sum, x, y, gamma, omega, shift);
}

double exp_sum(std::span<const double> d, double a)
{
    return BBM_DISPATCH(exp_sum, d, a);
}

ComplexSum ecf_sum(std::span<const double> re, std::span<const double> im, double u, double v)
{
    if (re.size() != im.size())
        throw std::invalid_argument("ecf_sum: size mismatch");
    return BBM_DISPATCH(ecf_sum, re, im, u, v);
}

} // namespace bbm::kernels
