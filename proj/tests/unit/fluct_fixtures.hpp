#pragma once

#include "coldcloud/effnum.hpp"

#include <cmath>
#include <numbers>

namespace testing {

// Inputs with prescribed tau_r, tau_w and zeta = tau_r^2 / tau_g^2 at sigma_v = 0.1 m/s,
// with a wavelength giving a very long Rayleigh length.
inline coldcloud::EffNumInputs fluct_inputs(double tau_r, double tau_w, double zeta, double n_total = 1e6)
{
    const double sv = 0.1;
    const double g = zeta > 0.0 ? 2.0 * std::numbers::sqrt2 * sv * std::sqrt(zeta) / tau_r : 0.0;
    const double w0 = 2.0 * sv * tau_w;
    return {coldcloud::CloudParams(n_total, tau_r * sv, sv, g), coldcloud::BeamParams(w0, 1e-12)};
}

} // namespace testing
