#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace bbm::stats {

struct TestResult
{
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    std::size_t dropped = 0; ///< samples removed before testing (e.g. zeros)
};

struct Regression
{
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::size_t n = 0;
};

struct CfFit
{
    double c_hat = 0.0;
    double p_hat = 0.0;
    double residual = 0.0;
    std::vector<double> grid;       ///< radial points, in units of the input z
    std::vector<double> ecf;        ///< rotationally averaged ECF (real part) on the grid
    std::vector<double> model;      ///< fitted mixture model on the grid
    bool converged = false;
    std::size_t iterations = 0;
    std::size_t n_used = 0;
    std::size_t n_filtered = 0;     ///< pairs dropped for d <= 0 or non-finite input
};

struct CfFitOptions
{
    /// Radial points. Empty = default grid scaled by the median |z|.
    std::vector<double> radial_grid;
    double p_lo = 0.5;
    double p_hi = 2.0;
    std::size_t directions = 16;
    std::size_t max_iterations = 2000;
};

inline constexpr std::size_t cf_fit_min_pairs = 100;
inline constexpr std::size_t rotation_test_min_samples = 200;

/// phi(x) = (1/n) sum_j exp(i <x, z_j>), z viewed as a planar vector.
std::vector<std::complex<double>> empirical_cf(std::span<const std::complex<double>> samples,
                                               std::span<const std::array<double, 2>> points);

/// ECF averaged over `directions` equispaced directions at radius r.
std::complex<double> rotational_ecf(std::span<const double> re, std::span<const double> im,
                                    double r, std::size_t directions);

/// Fit E[exp(i<x,z>)] = (1/n) sum_j exp(-c d_j |x|^p) by derivative-free
/// least squares over (log c, p).
CfFit fit_stable_mixture(std::span<const std::complex<double>> z, std::span<const double> d,
                         const CfFitOptions& options = {});

/// Residual of the mixture model at (c, p) against the rotationally averaged
/// ECF of z on `grid`.
double cf_residual(std::span<const std::complex<double>> z, std::span<const double> d,
                   std::span<const double> grid, double c, double p, std::size_t directions = 16);

/// Hill estimator of the tail index a in P(V > v) ~ v^{-a}, from the k
/// largest values.
double hill_estimator(std::span<const double> values, std::size_t k);

/// floor(n^{2/3})
std::size_t default_hill_k(std::size_t n);

/// Uniformity of arg(z) / 2 pi on the circle. Uses Kuiper's statistic
/// V = D+ + D-, which is invariant under rotation of all samples; zeros are
/// dropped.
TestResult ks_uniform_angle(std::span<const std::complex<double>> samples);

/// Rotate the odd-index half by e^{i theta} and compare real parts of the two
/// halves with a two-sample Kolmogorov-Smirnov test.
TestResult rotation_invariance_test(std::span<const std::complex<double>> samples, double theta);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov survival function Q_KS(lambda).
double kolmogorov_q(double lambda);

/// Asymptotic Kuiper survival function Q_KP(lambda).
double kuiper_q(double lambda);

/// Ordinary least squares y = slope x + intercept.
Regression slope_regression(std::span<const double> xs, std::span<const double> ys);

double median(std::vector<double> values);

/// Linear-interpolation quantile (type 7), q in [0, 1].
double quantile(std::vector<double> values, double q);

/// One (gamma, beta) cell of a phase scan: |raw partition| samples per t.
struct PhaseCellData
{
    double gamma = 0.0;
    double beta = 0.0;
    std::map<double, std::vector<double>> abs_raw_by_t;
};

struct PhaseCell
{
    double gamma = 0.0;
    double beta = 0.0;
    double slope = 0.0;          ///< d median ln|raw| / d ln t
    double stderr_slope = 0.0;
    double expected_slope = 0.0; ///< -3 gamma / 2
    bool phase_two_consistent = false;
    std::size_t t_count = 0;
};

/// Classify each cell by whether median ln|raw| scales like t^{-3 gamma / 2}
/// within relative tolerance `rel_tolerance`.
std::vector<PhaseCell> phase_scan(std::span<const PhaseCellData> cells, double rel_tolerance);

/// Whether (gamma, beta) lies in the glassy region gamma > 1/2, beta > (1 - gamma)_+.
bool in_phase_two(double gamma, double beta);

} // namespace bbm::stats
