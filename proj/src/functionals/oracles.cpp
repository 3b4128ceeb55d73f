#include "bbm/oracles.hpp"

#include <cmath>

#include "bbm/error.hpp"

namespace bbm::oracles {

namespace {

void require_nonnegative(double t)
{
    if (!(t >= 0.0))
        throw DomainError("oracle: t must be nonnegative");
}

} // namespace

double expected_count(double t)
{
    require_nonnegative(t);
    return std::exp(t);
}

std::pair<double, double> expected_critical(double t)
{
    if (!(t > 0.0))
        throw DomainError("expected_critical: t must be positive");
    return {1.0, 0.0};
}

double expected_additive(double t, double gamma)
{
    require_nonnegative(t);
    const double d = 1.0 - gamma;
    return std::exp(d * d * t);
}

double expected_partition(double t, double gamma, double beta)
{
    require_nonnegative(t);
    const double d = 1.0 - gamma;
    return std::exp((d * d - beta * beta) * t);
}

double expected_second_moment(double t, double gamma, double beta)
{
    require_nonnegative(t);
    const double diag_rate = (2.0 * gamma - 1.0) * (2.0 * gamma - 1.0);
    const double pair_rate = 2.0 * ((1.0 - gamma) * (1.0 - gamma) - beta * beta);
    const double a = 2.0 * gamma * gamma + 2.0 * beta * beta - 1.0;
    // (e^{a t} - 1) / a, continuous through a = 0
    const double integral = std::fabs(a * t) < 1e-8 ? t * (1.0 + 0.5 * a * t) : std::expm1(a * t) / a;
    return std::exp(diag_rate * t) + 2.0 * std::exp(pair_rate * t) * integral;
}

std::vector<OracleValue> oracle_table(double t, const std::vector<double>& gammas,
                                      const std::vector<double>& betas)
{
    std::vector<OracleValue> out;
    out.push_back({"count", t, 0.0, 0.0, expected_count(t), "many-to-one, F=1"});
    const auto [w, d] = expected_critical(t);
    out.push_back({"critical_additive", t, 1.0, 0.0, w, "many-to-one, critical shift"});
    out.push_back({"derivative", t, 1.0, 0.0, d, "many-to-one, critical shift"});
    for (double g : gammas)
        out.push_back({"additive", t, g, 0.0, expected_additive(t, g), "many-to-one"});
    for (double g : gammas) {
        for (double b : betas)
            out.push_back({"partition", t, g, b, expected_partition(t, g, b), "many-to-one"});
    }
    for (double g : gammas) {
        for (double b : betas)
            out.push_back({"overlap", t, g, b, expected_second_moment(t, g, b), "many-to-two"});
    }
    return out;
}

} // namespace bbm::oracles
