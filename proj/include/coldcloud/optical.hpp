#pragma once

#include <complex>

namespace coldcloud {

/// Probe-light parameters: detuning normalized to the dipole decay rate, and
/// the saturation parameter on the beam axis at the waist.
struct OpticalParams
{
    double delta = 0.0;
    double s_m0 = 0.0;

    /// Throws std::invalid_argument if s_m0 < 0 or a field is not finite.
    void validate() const;
};

/// alpha_l = 1 / (1 + i delta)
[[nodiscard]] std::complex<double> linear_polarizability(const OpticalParams& opt) noexcept;

} // namespace coldcloud
