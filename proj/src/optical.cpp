#include "coldcloud/optical.hpp"

#include <cmath>
#include <stdexcept>

namespace coldcloud {

void OpticalParams::validate() const
{
    if (!std::isfinite(delta))
        throw std::invalid_argument("optical: delta must be finite");
    if (!(s_m0 >= 0.0) || !std::isfinite(s_m0))
        throw std::invalid_argument("optical: s_m0 must be >= 0");
}

std::complex<double> linear_polarizability(const OpticalParams& opt) noexcept
{
    return 1.0 / std::complex<double>(1.0, opt.delta);
}

} // namespace coldcloud
