#pragma once

#include <cstddef>
#include <numbers>
#include <string>

namespace bbm::gates {

// Tolerances and pass/fail gates used by the CLI reports and the acceptance
// suite. Bump `version` whenever a value changes; reports echo this file.

inline constexpr const char* version = "1";

inline constexpr double oracle_se = 4.0;            // |mean - oracle| <= k SE
inline constexpr double overlap_rel = 1e-12;        // recursion vs brute force
inline constexpr double prune_factor = 10.0;        // |dZ| <= factor * certificate
inline constexpr double hill_rel = 0.25;            // Hill vs 1/gamma
inline constexpr std::size_t tails_min_samples = 1000;
inline constexpr double cf_p_abs = 0.2;             // p_hat vs 1/gamma
inline constexpr double cf_synthetic_rel = 0.10;    // fitter recovery of (c, p)
inline constexpr double isotropy_p_min = 0.01;
inline constexpr double rotation_theta = std::numbers::pi / 3.0;
inline constexpr double ppp_window_lo = 0.0;
inline constexpr double ppp_window_hi = 3.0;
inline constexpr int ppp_bins = 12;
inline constexpr double ppp_slope = 1.0;
inline constexpr double ppp_slope_abs = 0.3;
inline constexpr double norm_exponent_rel = 0.25;   // slope vs -3 gamma / 2
inline constexpr double phase_scan_rel = 0.25;
inline constexpr double bramson_median_spread = 0.6;
inline constexpr double bramson_tail_lo = -6.0;
inline constexpr double bramson_tail_hi = -2.0;
inline constexpr int bramson_tail_points = 9;
inline constexpr double bramson_tail_slope = 1.0;
inline constexpr double bramson_tail_slope_abs = 0.3;
inline constexpr double infimum_se = 3.0;           // one-sided
inline constexpr int infimum_k_max = 5;

/// Plain-text listing of every gate, one `name = value` per line.
std::string describe();

} // namespace bbm::gates
