#include "coldcloud/effnum.hpp"

#include "coldcloud/errors.hpp"
#include "coldcloud/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace coldcloud {

using std::numbers::pi;

namespace {

// Half-width of the longitudinal integration window in units of the cloud rms size.
constexpr double kLongitudinalCut = 10.0;

double gravity_exponent_numerator(const CloudParams& c, double t)
{
    const double g = c.gravity();
    return 0.5 * g * g * std::pow(t, 4);
}

template <class F>
double integrate_along_axis(const EffNumInputs& in, double t, double rel_tol, F&& integrand)
{
    const double half = kLongitudinalCut * std::sqrt(in.cloud.spread_squared(t));
    return quad::integrate_with_breaks(integrand, -half, half, {0.0}, {.rel_tol = rel_tol}).value;
}

} // namespace

double coupling_area(const BeamParams& b) noexcept
{
    return 3.0 * b.wavelength() * b.wavelength() / (4.0 * pi);
}

double column_number_density(const EffNumInputs& in, double x, double t)
{
    detail::require_nonnegative_time(t, "column_number_density");
    const double s2 = in.cloud.spread_squared(t);
    return in.cloud.n_total() / std::sqrt(2.0 * pi * s2) * std::exp(-x * x / (2.0 * s2));
}

double layer_number_density(const EffNumInputs& in, double x, double t, double order)
{
    const double column = column_number_density(in, x, t);
    const double w2 = beam_size_squared(in.beam, x) / order;
    const double d = 4.0 * in.cloud.spread_squared(t) + w2;
    return column * w2 / d * std::exp(-gravity_exponent_numerator(in.cloud, t) / d);
}

double sigma_general(const EffNumInputs& in, double t, double rel_tol)
{
    detail::require_nonnegative_time(t, "sigma_general");
    return integrate_along_axis(in, t, rel_tol, [&](double x) {
        return layer_number_density(in, x, t) / beam_section(in.beam, x);
    });
}

double weighted_number_general(const EffNumInputs& in, double t, double order, double rel_tol)
{
    detail::require_nonnegative_time(t, "weighted_number_general");
    return integrate_along_axis(in, t, rel_tol,
                                [&](double x) { return layer_number_density(in, x, t, order); });
}

double sigma_small_waist(const EffNumInputs& in, double t)
{
    detail::require_nonnegative_time(t, "sigma_small_waist");
    const TimeScales ts = time_scales(in.cloud, in.beam);
    const double sv2 = in.cloud.sigma_v() * in.cloud.sigma_v();
    const double den = ts.tau_r * ts.tau_r + t * t;
    return in.cloud.n_total() / (2.0 * pi * sv2 * den) *
           std::exp(-std::pow(t, 4) * ts.inv_tau_g2() / den);
}

double sigma_long_rayleigh(const EffNumInputs& in, double t)
{
    detail::require_nonnegative_time(t, "sigma_long_rayleigh");
    const TimeScales ts = time_scales(in.cloud, in.beam);
    const double sv2 = in.cloud.sigma_v() * in.cloud.sigma_v();
    const double tw = ts.tau_w0();
    const double den = ts.tau_r * ts.tau_r + tw * tw + t * t;
    return in.cloud.n_total() / (2.0 * pi * sv2 * den) *
           std::exp(-std::pow(t, 4) * ts.inv_tau_g2() / den);
}

double sigma_high_temperature(const EffNumInputs& in, double t)
{
    detail::require_nonnegative_time(t, "sigma_high_temperature");
    const TimeScales ts = time_scales(in.cloud, in.beam);
    const double sv2 = in.cloud.sigma_v() * in.cloud.sigma_v();
    const double den = ts.tau_r * ts.tau_r + t * t;
    return in.cloud.n_total() / (2.0 * pi * sv2 * den) * std::exp(-t * t * ts.inv_tau_g2());
}

std::complex<double> field_shift(const BeamParams& b, const OpticalParams& opt, double sigma) noexcept
{
    return -coupling_area(b) * sigma * linear_polarizability(opt);
}

std::complex<double> linear_field_shift(const EffNumInputs& in, const OpticalParams& opt, double t)
{
    return field_shift(in.beam, opt, sigma_general(in, t));
}

} // namespace coldcloud
