// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and must only be entered after the dispatcher has checked CPUID.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "bbm/kernels.hpp"
#include "neumaier.hpp"

namespace bbm::kernels::avx2 {

namespace {

// Cephes exp(): x = n ln2 + r, exp(r) = 1 + 2 r P(r^2) / (Q(r^2) - r P(r^2)).
inline __m256d exp_pd(__m256d x)
{
    const __m256d hi = _mm256_set1_pd(709.0);
    const __m256d lo = _mm256_set1_pd(-708.0);
    const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    const __m256d n = _mm256_round_pd(
        _mm256_fmadd_pd(x, _mm256_set1_pd(1.4426950408889634073599), _mm256_set1_pd(0.5)),
        _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
    x = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125E-1), x);
    x = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212E-6), x);

    const __m256d xx = _mm256_mul_pd(x, x);
    __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
    p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(3.02994407707441961300E-2));
    p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(9.99999999999999999910E-1));
    p = _mm256_mul_pd(p, x);
    __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
    q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.52448340349684104192E-3));
    q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.27265548208155028766E-1));
    q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.00000000000000000009E0));
    __m256d r = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    r = _mm256_fmadd_pd(r, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

    // scale by 2^n through the exponent field
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i e = _mm256_cvtepi32_epi64(n32);
    e = _mm256_slli_epi64(_mm256_add_epi64(e, _mm256_set1_epi64x(1023)), 52);
    r = _mm256_mul_pd(r, _mm256_castsi256_pd(e));
    return _mm256_andnot_pd(underflow, r);
}

inline __m256d fmod_pow2(__m256d y, double m)
{
    // y - m floor(y / m) for nonnegative integer-valued y
    const __m256d q = _mm256_round_pd(_mm256_mul_pd(y, _mm256_set1_pd(1.0 / m)),
                                      _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
    return _mm256_fnmadd_pd(q, _mm256_set1_pd(m), y);
}

// Cephes sin()/cos() with three-part pi/4 reduction, computed together.
inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out)
{
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d x_sign = _mm256_and_pd(x, sign_mask);
    const __m256d ax = _mm256_andnot_pd(sign_mask, x);

    __m256d y = _mm256_round_pd(_mm256_mul_pd(ax, _mm256_set1_pd(1.27323954473516268615)),
                                _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
    const __m256d odd = fmod_pow2(y, 2.0);
    y = _mm256_add_pd(y, odd);
    __m256d j = fmod_pow2(y, 8.0);

    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d gt3 = _mm256_cmp_pd(j, _mm256_set1_pd(3.0), _CMP_GT_OQ);
    j = _mm256_sub_pd(j, _mm256_and_pd(gt3, four));
    const __m256d gt1 = _mm256_cmp_pd(j, _mm256_set1_pd(1.0), _CMP_GT_OQ);
    const __m256d swap = _mm256_and_pd(
        _mm256_cmp_pd(j, _mm256_set1_pd(0.5), _CMP_GT_OQ),
        _mm256_cmp_pd(j, _mm256_set1_pd(2.5), _CMP_LT_OQ));

    __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(7.85398125648498535156E-1), ax);
    z = _mm256_fnmadd_pd(y, _mm256_set1_pd(3.77489470793079817668E-8), z);
    z = _mm256_fnmadd_pd(y, _mm256_set1_pd(2.69515142907905952645E-15), z);
    const __m256d zz = _mm256_mul_pd(z, z);

    __m256d ps = _mm256_set1_pd(1.58962301576546568060E-10);
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-2.50507477628578072866E-8));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(2.75573136213857245213E-6));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-1.98412698295895385996E-4));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(8.33333333332211858878E-3));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-1.66666666666666307295E-1));
    ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), ps, z);

    __m256d pc = _mm256_set1_pd(-1.13585365213876817300E-11);
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(2.08757008419747316778E-9));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(-2.75573141792967388112E-7));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(2.48015872888517045348E-5));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(-1.38888888888730564116E-3));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(4.16666666666665929218E-2));
    pc = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), pc,
                         _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));

    __m256d s = _mm256_blendv_pd(ps, pc, swap);
    __m256d c = _mm256_blendv_pd(pc, ps, swap);
    s = _mm256_xor_pd(s, _mm256_xor_pd(x_sign, _mm256_and_pd(gt3, sign_mask)));
    c = _mm256_xor_pd(c, _mm256_and_pd(_mm256_xor_pd(gt3, gt1), sign_mask));
    s_out = s;
    c_out = c;
}

// Four independent Neumaier accumulators.
struct Neumaier4
{
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();

    void add(__m256d v)
    {
        const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
        const __m256d t = _mm256_add_pd(sum, v);
        const __m256d big = _mm256_cmp_pd(_mm256_and_pd(sum, abs_mask), _mm256_and_pd(v, abs_mask),
                                          _CMP_GE_OQ);
        const __m256d a = _mm256_blendv_pd(v, sum, big);
        const __m256d b = _mm256_blendv_pd(sum, v, big);
        comp = _mm256_add_pd(comp, _mm256_add_pd(_mm256_sub_pd(a, t), b));
        sum = t;
    }

    void finish(Neumaier& acc) const
    {
        alignas(32) double s[4];
        alignas(32) double c[4];
        _mm256_store_pd(s, sum);
        _mm256_store_pd(c, comp);
        for (int k = 0; k < 4; ++k) {
            acc.add(s[k]);
            acc.add(c[k]);
        }
    }
};

} // namespace

void exp4(const double* in, double* out)
{
    _mm256_storeu_pd(out, exp_pd(_mm256_loadu_pd(in)));
}

void sincos4(const double* in, double* sin_out, double* cos_out)
{
    __m256d s, c;
    sincos_pd(_mm256_loadu_pd(in), s, c);
    _mm256_storeu_pd(sin_out, s);
    _mm256_storeu_pd(cos_out, c);
}

ComplexSum phase_sum(std::span<const double> x, std::span<const double> y, double gamma,
                     double omega, double shift)
{
    const std::size_t n = x.size();
    const std::size_t body = n - n % 4;
    const __m256d vg = _mm256_set1_pd(-gamma);
    const __m256d vshift = _mm256_set1_pd(shift);
    const __m256d vomega = _mm256_set1_pd(omega);
    Neumaier4 re4, im4;
    for (std::size_t i = 0; i < body; i += 4) {
        const __m256d w =
            exp_pd(_mm256_mul_pd(vg, _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vshift)));
        __m256d s, c;
        sincos_pd(_mm256_mul_pd(vomega, _mm256_loadu_pd(y.data() + i)), s, c);
        re4.add(_mm256_mul_pd(w, c));
        im4.add(_mm256_mul_pd(w, s));
    }
    Neumaier re, im;
    re4.finish(re);
    im4.finish(im);
    for (std::size_t i = body; i < n; ++i) {
        const double w = std::exp(-gamma * (x[i] - shift));
        const double a = omega * y[i];
        re.add(w * std::cos(a));
        im.add(w * std::sin(a));
    }
    return {re.value(), im.value()};
}

double exp_sum(std::span<const double> d, double a)
{
    const std::size_t n = d.size();
    const std::size_t body = n - n % 4;
    const __m256d va = _mm256_set1_pd(-a);
    Neumaier4 s4;
    for (std::size_t i = 0; i < body; i += 4)
        s4.add(exp_pd(_mm256_mul_pd(va, _mm256_loadu_pd(d.data() + i))));
    Neumaier s;
    s4.finish(s);
    for (std::size_t i = body; i < n; ++i)
        s.add(std::exp(-a * d[i]));
    return s.value();
}

ComplexSum ecf_sum(std::span<const double> re, std::span<const double> im, double u, double v)
{
    const std::size_t n = re.size();
    const std::size_t body = n - n % 4;
    const __m256d vu = _mm256_set1_pd(u);
    const __m256d vv = _mm256_set1_pd(v);
    Neumaier4 c4, s4;
    for (std::size_t j = 0; j < body; j += 4) {
        const __m256d arg = _mm256_fmadd_pd(vu, _mm256_loadu_pd(re.data() + j),
                                            _mm256_mul_pd(vv, _mm256_loadu_pd(im.data() + j)));
        __m256d s, c;
        sincos_pd(arg, s, c);
        c4.add(c);
        s4.add(s);
    }
    Neumaier cs, ss;
    c4.finish(cs);
    s4.finish(ss);
    for (std::size_t j = body; j < n; ++j) {
        const double a = u * re[j] + v * im[j];
        cs.add(std::cos(a));
        ss.add(std::sin(a));
    }
    return {cs.value(), ss.value()};
}

} // namespace bbm::kernels::avx2
