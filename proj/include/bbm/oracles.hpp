#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bbm::oracles {

/// Closed-form expectations of the shifted BBM, from the many-to-one
/// identity E[sum F(X_i)] = e^t E[F(sqrt(2) B_t + 2t)] and its pair extension
/// (pairs splitting at time s carry density 2 e^{2t - s} ds).
struct OracleValue
{
    std::string name;
    double t = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    double value = 0.0;
    std::string derivation;
};

/// E N(t) = e^t
double expected_count(double t);

/// (E sum e^{-X}, E sum X e^{-X}) = (1, 0)
std::pair<double, double> expected_critical(double t);

/// E sum e^{-gamma X} = e^{(1 - gamma)^2 t}
double expected_additive(double t, double gamma);

/// E sum e^{-gamma X + i sqrt(2) beta Ybar} = e^{((1 - gamma)^2 - beta^2) t}, real
double expected_partition(double t, double gamma, double beta);

/// E sum_{i,j} e^{-gamma (X_i + X_j) - 2 beta^2 (t - tau_ij)}
///   = e^{(2 gamma - 1)^2 t}
///   + 2 e^{2((1-gamma)^2 - beta^2) t} (e^{a t} - 1) / a,   a = 2 gamma^2 + 2 beta^2 - 1
/// with the a -> 0 limit 2 t e^{2((1-gamma)^2 - beta^2) t} for the second term.
double expected_second_moment(double t, double gamma, double beta);

/// All oracle values for one t over the given grids, tagged for reports.
std::vector<OracleValue> oracle_table(double t, const std::vector<double>& gammas,
                                      const std::vector<double>& betas);

} // namespace bbm::oracles
