#include "coldcloud/beam.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace coldcloud {

using std::numbers::pi;

BeamParams::BeamParams(double waist, double wavelength) : w0_(waist), lambda_(wavelength)
{
    if (!(waist > 0.0) || !std::isfinite(waist))
        throw std::invalid_argument("beam: w0 must be a positive finite length, got " +
                                    std::to_string(waist));
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw std::invalid_argument("beam: lambda must be a positive finite length, got " +
                                    std::to_string(wavelength));
    rayleigh_ = pi * w0_ * w0_ / lambda_;
}

double beam_size_squared(const BeamParams& b, double x) noexcept
{
    const double q = x / b.rayleigh_length();
    return b.waist() * b.waist() * (1.0 + q * q);
}

double beam_size(const BeamParams& b, double x) noexcept { return std::sqrt(beam_size_squared(b, x)); }

double beam_section(const BeamParams& b, double x) noexcept
{
    return 0.5 * pi * beam_size_squared(b, x);
}

double weight(const BeamParams& b, const Vec3& r) noexcept
{
    return std::exp(-2.0 * r.transverse2() / beam_size_squared(b, r.x));
}

double weight_power(const BeamParams& b, const Vec3& r, double j) noexcept
{
    const double w2 = beam_size_squared(b, r.x) / j;
    return std::exp(-2.0 * r.transverse2() / w2);
}

double mode_phase(const BeamParams& b, const Vec3& r) noexcept
{
    const double lr = b.rayleigh_length();
    const double lambda = b.wavelength();
    return -2.0 * pi * r.x / lambda + std::atan(r.x / lr) -
           (pi / lambda) * r.transverse2() * r.x / (r.x * r.x + lr * lr);
}

std::complex<double> mode_amplitude(const BeamParams& b, const Vec3& r) noexcept
{
    const double w2 = beam_size_squared(b, r.x);
    const double modulus = std::sqrt(2.0 / pi) / std::sqrt(w2) * std::exp(-r.transverse2() / w2);
    return std::polar(modulus, -mode_phase(b, r));
}

} // namespace coldcloud
