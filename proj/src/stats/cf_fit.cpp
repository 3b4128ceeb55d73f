#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "bbm/error.hpp"
#include "bbm/kernels.hpp"
#include "bbm/stats.hpp"

namespace bbm::stats {

namespace {

// Radial points for data normalized to unit median modulus.
std::vector<double> default_unit_grid()
{
    std::vector<double> q;
    constexpr int points = 24;
    const double lo = std::log(0.05);
    const double hi = std::log(4.0);
    for (int i = 0; i < points; ++i)
        q.push_back(std::exp(lo + (hi - lo) * i / (points - 1)));
    return q;
}

struct Prepared
{
    std::vector<double> re;
    std::vector<double> im;
    std::vector<double> d;
    std::size_t filtered = 0;
};

Prepared prepare(std::span<const std::complex<double>> z, std::span<const double> d)
{
    if (z.size() != d.size())
        throw DomainError("fit_stable_mixture: z and d differ in length");
    Prepared p;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(d[i] > 0.0) || !std::isfinite(d[i]) || !std::isfinite(z[i].real()) ||
            !std::isfinite(z[i].imag())) {
            ++p.filtered;
            continue;
        }
        p.re.push_back(z[i].real());
        p.im.push_back(z[i].imag());
        p.d.push_back(d[i]);
    }
    return p;
}

class Objective
{
  public:
    Objective(const Prepared& data, std::span<const double> grid, std::size_t directions)
        : data_(data), grid_(grid.begin(), grid.end())
    {
        for (double r : grid_)
            target_.push_back(rotational_ecf(data_.re, data_.im, r, directions));
    }

    double model(double c, double p, double r) const
    {
        return kernels::exp_sum(data_.d, c * std::pow(r, p)) / static_cast<double>(data_.d.size());
    }

    double residual(double c, double p) const
    {
        double sum = 0.0;
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            const double dr = target_[k].real() - model(c, p, grid_[k]);
            const double di = target_[k].imag();
            sum += dr * dr + di * di;
        }
        return sum;
    }

    const std::vector<std::complex<double>>& target() const { return target_; }
    const std::vector<double>& grid() const { return grid_; }

  private:
    const Prepared& data_;
    std::vector<double> grid_;
    std::vector<std::complex<double>> target_;
};

struct Vertex
{
    std::array<double, 2> x; // (log c, p)
    double f;
};

} // namespace

double cf_residual(std::span<const std::complex<double>> z, std::span<const double> d,
                   std::span<const double> grid, double c, double p, std::size_t directions)
{
    const auto data = prepare(z, d);
    if (data.d.empty())
        throw InsufficientDataError("cf_residual: no usable pairs", 1);
    return Objective(data, grid, directions).residual(c, p);
}

CfFit fit_stable_mixture(std::span<const std::complex<double>> z, std::span<const double> d,
                         const CfFitOptions& options)
{
    if (!(options.p_lo > 0.0 && options.p_hi > options.p_lo))
        throw DomainError("fit_stable_mixture: invalid p interval");
    const auto data = prepare(z, d);
    if (data.d.size() < cf_fit_min_pairs)
        throw InsufficientDataError("fit_stable_mixture: too few usable pairs (" +
                                        std::to_string(data.filtered) + " filtered)",
                                    cf_fit_min_pairs);

    // Work in units where the median modulus is 1; the fitted c transforms
    // back as c = c_unit * scale^p.
    std::vector<double> mod;
    mod.reserve(data.re.size());
    for (std::size_t i = 0; i < data.re.size(); ++i)
        mod.push_back(std::hypot(data.re[i], data.im[i]));
    const double scale = median(mod);
    if (!(scale > 0.0))
        throw DomainError("fit_stable_mixture: degenerate sample (median modulus 0)");

    Prepared unit = data;
    for (std::size_t i = 0; i < unit.re.size(); ++i) {
        unit.re[i] /= scale;
        unit.im[i] /= scale;
    }
    std::vector<double> grid;
    if (options.radial_grid.empty()) {
        grid = default_unit_grid();
    } else {
        for (double r : options.radial_grid)
            grid.push_back(r * scale);
    }
    const Objective objective(unit, grid, options.directions);

    const double p_lo = options.p_lo;
    const double p_hi = options.p_hi;
    auto eval = [&](const std::array<double, 2>& x) {
        if (x[1] < p_lo || x[1] > p_hi)
            return 1e6 + std::fabs(x[1] - std::clamp(x[1], p_lo, p_hi));
        return objective.residual(std::exp(x[0]), x[1]);
    };

    // Initial guess: p at the interval midpoint, c matching the ECF where it
    // is closest to 1/2.
    const double p0 = 0.5 * (p_lo + p_hi);
    double mean_d = 0.0;
    for (double v : unit.d)
        mean_d += v;
    mean_d /= static_cast<double>(unit.d.size());
    std::size_t k_half = 0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (std::fabs(objective.target()[k].real() - 0.5) <
            std::fabs(objective.target()[k_half].real() - 0.5))
            k_half = k;
    }
    const double phi_half = std::clamp(objective.target()[k_half].real(), 1e-3, 0.999);
    const double c0 = -std::log(phi_half) / (mean_d * std::pow(grid[k_half], p0));

    std::array<Vertex, 3> simplex;
    simplex[0].x = {std::log(c0), p0};
    simplex[1].x = {std::log(c0) + 0.5, p0};
    simplex[2].x = {std::log(c0), std::min(p0 + 0.25 * (p_hi - p_lo), p_hi)};
    for (auto& v : simplex)
        v.f = eval(v.x);

    CfFit fit;
    std::size_t it = 0;
    for (; it < options.max_iterations; ++it) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const double spread = simplex[2].f - simplex[0].f;
        double size = 0.0;
        for (int k = 1; k < 3; ++k)
            for (int j = 0; j < 2; ++j)
                size = std::max(size, std::fabs(simplex[k].x[j] - simplex[0].x[j]));
        if (spread <= 1e-14 * (1.0 + simplex[0].f) && size < 1e-8) {
            fit.converged = true;
            break;
        }

        std::array<double, 2> centroid{};
        for (int j = 0; j < 2; ++j)
            centroid[j] = 0.5 * (simplex[0].x[j] + simplex[1].x[j]);
        auto along = [&](double coef) {
            std::array<double, 2> x{};
            for (int j = 0; j < 2; ++j)
                x[j] = centroid[j] + coef * (simplex[2].x[j] - centroid[j]);
            return Vertex{x, eval(x)};
        };

        const Vertex reflected = along(-1.0);
        if (reflected.f < simplex[0].f) {
            const Vertex expanded = along(-2.0);
            simplex[2] = expanded.f < reflected.f ? expanded : reflected;
        } else if (reflected.f < simplex[1].f) {
            simplex[2] = reflected;
        } else {
            const Vertex contracted =
                reflected.f < simplex[2].f ? along(-0.5) : along(0.5);
            if (contracted.f < std::min(reflected.f, simplex[2].f)) {
                simplex[2] = contracted;
            } else {
                for (int k = 1; k < 3; ++k) {
                    for (int j = 0; j < 2; ++j)
                        simplex[k].x[j] = simplex[0].x[j] + 0.5 * (simplex[k].x[j] - simplex[0].x[j]);
                    simplex[k].f = eval(simplex[k].x);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });

    const double c_unit = std::exp(simplex[0].x[0]);
    fit.p_hat = simplex[0].x[1];
    fit.c_hat = c_unit * std::pow(scale, fit.p_hat);
    fit.residual = simplex[0].f;
    fit.iterations = it;
    fit.n_used = unit.d.size();
    fit.n_filtered = data.filtered;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        fit.grid.push_back(grid[k] / scale);
        fit.ecf.push_back(objective.target()[k].real());
        fit.model.push_back(objective.model(c_unit, fit.p_hat, grid[k]));
    }
    return fit;
}

} // namespace bbm::stats
