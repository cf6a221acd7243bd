#include "coldcloud/cloud.hpp"

#include "coldcloud/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace coldcloud {

using std::numbers::pi;

namespace {

void require(bool ok, const std::string& msg)
{
    if (!ok)
        throw std::invalid_argument("cloud: " + msg);
}

} // namespace

CloudParams::CloudParams(double n_total, double sigma_r, double sigma_v, double gravity)
    : n_total_(n_total), sigma_r_(sigma_r), sigma_v_(sigma_v), g_(gravity)
{
    require(n_total >= 0.0 && std::isfinite(n_total), "n_total must be >= 0");
    require(sigma_r > 0.0 && std::isfinite(sigma_r), "sigma_r must be > 0");
    require(sigma_v > 0.0 && std::isfinite(sigma_v), "sigma_v must be > 0 (a frozen cloud is degenerate)");
    require(gravity >= 0.0 && std::isfinite(gravity), "g must be a nonnegative magnitude");
}

CloudParams CloudParams::from_temperature(double n_total, double sigma_r, double temperature,
                                          double mass, double gravity)
{
    require(temperature > 0.0, "temperature must be > 0");
    require(mass > 0.0, "mass must be > 0");
    return {n_total, sigma_r, std::sqrt(kBoltzmann * temperature / mass), gravity};
}

double TimeScales::tau_w(double x) const noexcept
{
    const double q = x / rayleigh_length;
    return waist * std::sqrt(1.0 + q * q) / (2.0 * sigma_v);
}

double TimeScales::inv_tau_g2() const noexcept
{
    return tau_g ? 1.0 / (*tau_g * *tau_g) : 0.0;
}

double TimeScales::tau_g_or_inf() const noexcept
{
    return tau_g.value_or(std::numeric_limits<double>::infinity());
}

double ballistic_time(const CloudParams& c) noexcept { return c.sigma_r() / c.sigma_v(); }

std::optional<double> fall_time(const CloudParams& c) noexcept
{
    if (!c.has_gravity())
        return std::nullopt;
    return 2.0 * std::numbers::sqrt2 * c.sigma_v() / c.gravity();
}

TimeScales time_scales(const CloudParams& c, const BeamParams& b)
{
    TimeScales ts;
    ts.tau_r = ballistic_time(c);
    ts.tau_g = fall_time(c);
    ts.sigma_v = c.sigma_v();
    ts.waist = b.waist();
    ts.rayleigh_length = b.rayleigh_length();
    return ts;
}

double phase_space_density(const CloudParams& c, const Vec3& r, const Vec3& v, double t)
{
    detail::require_nonnegative_time(t, "phase_space_density");
    // Back-propagate to the release instant; g points along -z.
    const Vec3 gvec{0.0, 0.0, -c.gravity()};
    const Vec3 r0 = r - v * t + gvec * (0.5 * t * t);
    const Vec3 v0 = v - gvec * t;
    const double sr2 = c.sigma_r() * c.sigma_r();
    const double sv2 = c.sigma_v() * c.sigma_v();
    const double norm = c.n_total() / std::pow(2.0 * pi * c.sigma_r() * c.sigma_v(), 3);
    return norm * std::exp(-r0.norm2() / (2.0 * sr2) - v0.norm2() / (2.0 * sv2));
}

double density(const CloudParams& c, const Vec3& r, double t)
{
    detail::require_nonnegative_time(t, "density");
    const double s2 = c.spread_squared(t);
    const Vec3 d = r - c.center(t);
    return c.n_total() / std::pow(2.0 * pi * s2, 1.5) * std::exp(-d.norm2() / (2.0 * s2));
}

double center_density(const CloudParams& c, double t)
{
    detail::require_nonnegative_time(t, "center_density");
    const double tr = ballistic_time(c);
    const auto tg = fall_time(c);
    const double peak = c.n_total() / std::pow(2.0 * pi * c.sigma_r() * c.sigma_r(), 1.5);
    const double lorentz = tr * tr / (tr * tr + t * t);
    const double expo = tg ? -std::pow(t, 4) / (*tg * *tg * (tr * tr + t * t)) : 0.0;
    return peak * std::pow(lorentz, 1.5) * std::exp(expo);
}

double center_density_long_time(const CloudParams& c, double t)
{
    detail::require_nonnegative_time(t, "center_density_long_time");
    const double tr = ballistic_time(c);
    const auto tg = fall_time(c);
    const double peak = c.n_total() / std::pow(2.0 * pi * c.sigma_r() * c.sigma_r(), 1.5);
    const double lorentz = tr * tr / (tr * tr + t * t);
    const double expo = tg ? -t * t / (*tg * *tg) : 0.0;
    return peak * std::pow(lorentz, 1.5) * std::exp(expo);
}

} // namespace coldcloud
