#pragma once

#include "coldcloud/vec3.hpp"

#include <complex>

namespace coldcloud {

/// Gaussian TEM00 probe beam propagating along +x, waist at x = 0.
class BeamParams
{
public:
    /// Throws std::invalid_argument unless waist > 0 and wavelength > 0 (SI metres).
    BeamParams(double waist, double wavelength);

    [[nodiscard]] double waist() const noexcept { return w0_; }
    [[nodiscard]] double wavelength() const noexcept { return lambda_; }
    /// l_R = pi w0^2 / lambda
    [[nodiscard]] double rayleigh_length() const noexcept { return rayleigh_; }

private:
    double w0_;
    double lambda_;
    double rayleigh_;
};

/// w(x)^2 = w0^2 (1 + x^2 / l_R^2)
[[nodiscard]] double beam_size_squared(const BeamParams& b, double x) noexcept;
[[nodiscard]] double beam_size(const BeamParams& b, double x) noexcept;

/// Effective section S(x) = pi w(x)^2 / 2, chosen so that |u|^2 = f / S.
[[nodiscard]] double beam_section(const BeamParams& b, double x) noexcept;

/// Transverse weight f(r) = exp(-2 (y^2 + z^2) / w(x)^2); 1 on axis.
[[nodiscard]] double weight(const BeamParams& b, const Vec3& r) noexcept;

/// f(r)^j, evaluated as the weight of a beam whose w^2 is divided by j.
[[nodiscard]] double weight_power(const BeamParams& b, const Vec3& r, double j) noexcept;

/// Phase of the propagating mode: -2 pi x / lambda + atan(x / l_R)
/// - (pi / lambda) (y^2 + z^2) x / (x^2 + l_R^2).
[[nodiscard]] double mode_phase(const BeamParams& b, const Vec3& r) noexcept;

/// Normalized mode u(r) = sqrt(2/pi) / w(x) exp(-(y^2+z^2)/w(x)^2 - i phi(r)), in 1/m.
[[nodiscard]] std::complex<double> mode_amplitude(const BeamParams& b, const Vec3& r) noexcept;

} // namespace coldcloud
