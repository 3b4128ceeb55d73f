#include "bbm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbm/error.hpp"
#include "bbm/kernels.hpp"

namespace bbm::stats {

std::vector<std::complex<double>> empirical_cf(std::span<const std::complex<double>> samples,
                                               std::span<const std::array<double, 2>> points)
{
    if (samples.empty())
        throw InsufficientDataError("empirical_cf: no samples", 1);
    std::vector<double> re(samples.size());
    std::vector<double> im(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) {
        re[j] = samples[j].real();
        im[j] = samples[j].imag();
    }
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    std::vector<std::complex<double>> out;
    out.reserve(points.size());
    for (const auto& x : points) {
        const auto s = kernels::ecf_sum(re, im, x[0], x[1]);
        out.emplace_back(s.re * inv_n, s.im * inv_n);
    }
    return out;
}

std::complex<double> rotational_ecf(std::span<const double> re, std::span<const double> im,
                                    double r, std::size_t directions)
{
    if (re.empty())
        throw InsufficientDataError("rotational_ecf: no samples", 1);
    double sr = 0.0;
    double si = 0.0;
    for (std::size_t k = 0; k < directions; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(directions);
        const auto s = kernels::ecf_sum(re, im, r * std::cos(angle), r * std::sin(angle));
        sr += s.re;
        si += s.im;
    }
    const double scale = 1.0 / (static_cast<double>(directions) * static_cast<double>(re.size()));
    return {sr * scale, si * scale};
}

double hill_estimator(std::span<const double> values, std::size_t k)
{
    const std::size_t n = values.size();
    if (k < 2 || k >= n)
        throw DomainError("hill_estimator: need 2 <= k < n");
    std::vector<double> v(values.begin(), values.end());
    for (double x : v) {
        if (!(x > 0.0) || !std::isfinite(x))
            throw DomainError("hill_estimator: values must be positive and finite");
    }
    // v_(n-k) is the (k+1)-th largest
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(),
                     std::greater<>());
    const double threshold = v[k];
    std::sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), std::greater<>());
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        sum += std::log(v[i] / threshold);
    return static_cast<double>(k) / sum;
}

std::size_t default_hill_k(std::size_t n)
{
    auto k = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 2.0 / 3.0)));
    // guard against pow rounding just below an exact cube
    while ((k + 1) * (k + 1) * (k + 1) <= n * n)
        ++k;
    return k;
}

double kolmogorov_q(double lambda)
{
    if (lambda < 0.2)
        return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-17)
            break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double kuiper_q(double lambda)
{
    if (lambda < 0.4)
        return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double l2 = static_cast<double>(j * j) * lambda * lambda;
        const double term = (4.0 * l2 - 1.0) * std::exp(-2.0 * l2);
        sum += term;
        if (std::fabs(term) < 1e-17)
            break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_uniform_angle(std::span<const std::complex<double>> samples)
{
    std::vector<double> u;
    u.reserve(samples.size());
    for (const auto& z : samples) {
        if (z == std::complex<double>{0.0, 0.0})
            continue;
        double a = std::arg(z) / (2.0 * std::numbers::pi);
        if (a < 0.0)
            a += 1.0;
        if (a >= 1.0)
            a -= 1.0;
        u.push_back(a);
    }
    TestResult res;
    res.dropped = samples.size() - u.size();
    if (u.empty())
        throw InsufficientDataError("ks_uniform_angle: all samples are zero", 1);
    std::sort(u.begin(), u.end());
    const auto n = static_cast<double>(u.size());
    double d_plus = 0.0;
    double d_minus = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double fi = static_cast<double>(i);
        d_plus = std::max(d_plus, (fi + 1.0) / n - u[i]);
        d_minus = std::max(d_minus, u[i] - fi / n);
    }
    res.statistic = d_plus + d_minus;
    res.n = u.size();
    const double sn = std::sqrt(n);
    res.p_value = kuiper_q((sn + 0.155 + 0.24 / sn) * res.statistic);
    return res;
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty())
        throw InsufficientDataError("ks_two_sample: empty sample", 1);
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const auto n1 = static_cast<double>(x.size());
    const auto n2 = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v)
            ++i;
        while (j < y.size() && y[j] == v)
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
    }
    TestResult res;
    res.statistic = d;
    res.n = x.size() + y.size();
    const double en = std::sqrt(n1 * n2 / (n1 + n2));
    res.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
    return res;
}

TestResult rotation_invariance_test(std::span<const std::complex<double>> samples, double theta)
{
    if (samples.size() < rotation_test_min_samples)
        throw InsufficientDataError("rotation_invariance_test: too few samples",
                                    rotation_test_min_samples);
    const std::complex<double> rot = std::polar(1.0, theta);
    std::vector<double> even;
    std::vector<double> odd;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i % 2 == 0)
            even.push_back(samples[i].real());
        else
            odd.push_back((samples[i] * rot).real());
    }
    return ks_two_sample(even, odd);
}

Regression slope_regression(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size())
        throw DomainError("slope_regression: size mismatch");
    const std::size_t n = xs.size();
    if (n < 3)
        throw InsufficientDataError("slope_regression: too few points", 3);
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0))
        throw DomainError("slope_regression: xs are all equal");
    Regression r;
    r.n = n;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (r.intercept + r.slope * xs[i]);
        ssr += e * e;
    }
    r.stderr_slope = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    return r;
}

double quantile(std::vector<double> values, double q)
{
    if (values.empty())
        throw InsufficientDataError("quantile: no values", 1);
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values)
{
    return quantile(std::move(values), 0.5);
}

bool in_phase_two(double gamma, double beta)
{
    return gamma > 0.5 && beta > std::max(1.0 - gamma, 0.0);
}

std::vector<PhaseCell> phase_scan(std::span<const PhaseCellData> cells, double rel_tolerance)
{
    std::vector<PhaseCell> out;
    for (const auto& cell : cells) {
        std::vector<double> log_t;
        std::vector<double> med;
        for (const auto& [t, values] : cell.abs_raw_by_t) {
            std::vector<double> logs;
            for (double v : values) {
                if (v > 0.0 && std::isfinite(v))
                    logs.push_back(std::log(v));
            }
            if (logs.empty())
                continue;
            log_t.push_back(std::log(t));
            med.push_back(median(std::move(logs)));
        }
        if (log_t.size() < 2)
            throw InsufficientDataError("phase_scan: cell (" + std::to_string(cell.gamma) + ", " +
                                            std::to_string(cell.beta) + ") needs at least two t values",
                                        2);
        PhaseCell pc;
        pc.gamma = cell.gamma;
        pc.beta = cell.beta;
        pc.t_count = log_t.size();
        pc.expected_slope = -1.5 * cell.gamma;
        if (log_t.size() == 2) {
            pc.slope = (med[1] - med[0]) / (log_t[1] - log_t[0]);
        } else {
            const auto r = slope_regression(log_t, med);
            pc.slope = r.slope;
            pc.stderr_slope = r.stderr_slope;
        }
        pc.phase_two_consistent =
            std::fabs(pc.slope - pc.expected_slope) <= rel_tolerance * std::fabs(pc.expected_slope);
        out.push_back(pc);
    }
    return out;
}

} // namespace bbm::stats
