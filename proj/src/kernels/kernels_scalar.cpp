#include <cmath>
#include <cstddef>

#include "bbm/kernels.hpp"
#include "neumaier.hpp"

namespace bbm::kernels::scalar {

ComplexSum phase_sum(std::span<const double> x, std::span<const double> y, double gamma,
                     double omega, double shift)
{
    Neumaier re;
    Neumaier im;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = std::exp(-gamma * (x[i] - shift));
        const double a = omega * y[i];
        re.add(w * std::cos(a));
        im.add(w * std::sin(a));
    }
    return {re.value(), im.value()};
}

double exp_sum(std::span<const double> d, double a)
{
    Neumaier s;
    for (double v : d)
        s.add(std::exp(-a * v));
    return s.value();
}

ComplexSum ecf_sum(std::span<const double> re, std::span<const double> im, double u, double v)
{
    Neumaier c;
    Neumaier s;
    for (std::size_t j = 0; j < re.size(); ++j) {
        const double a = u * re[j] + v * im[j];
        c.add(std::cos(a));
        s.add(std::sin(a));
    }
    return {c.value(), s.value()};
}

} // namespace bbm::kernels::scalar
