#pragma once

#include "coldcloud/beam.hpp"
#include "coldcloud/vec3.hpp"

#include <optional>

namespace coldcloud {

inline constexpr double kBoltzmann = 1.380649e-23; // J/K

/// Initial Gaussian phase-space distribution of a released cloud. Gravity is a
/// magnitude acting along -z.
class CloudParams
{
public:
    /// Throws std::invalid_argument unless n_total >= 0, sigma_r > 0, sigma_v > 0, g >= 0.
    CloudParams(double n_total, double sigma_r, double sigma_v, double gravity);

    /// sigma_v^2 = k_B T / m
    static CloudParams from_temperature(double n_total, double sigma_r, double temperature,
                                        double mass, double gravity);

    [[nodiscard]] double n_total() const noexcept { return n_total_; }
    [[nodiscard]] double sigma_r() const noexcept { return sigma_r_; }
    [[nodiscard]] double sigma_v() const noexcept { return sigma_v_; }
    [[nodiscard]] double gravity() const noexcept { return g_; }
    [[nodiscard]] bool has_gravity() const noexcept { return g_ > 0.0; }

    /// Per-axis position variance at time t: sigma_r^2 + sigma_v^2 t^2.
    [[nodiscard]] double spread_squared(double t) const noexcept
    {
        return sigma_r_ * sigma_r_ + sigma_v_ * sigma_v_ * t * t;
    }
    /// Free-fall displacement of the cloud center, (0, 0, -g t^2 / 2).
    [[nodiscard]] Vec3 center(double t) const noexcept { return {0.0, 0.0, -0.5 * g_ * t * t}; }

    CloudParams with_n_total(double n) const { return {n, sigma_r_, sigma_v_, g_}; }
    CloudParams with_gravity(double g) const { return {n_total_, sigma_r_, sigma_v_, g}; }

private:
    double n_total_;
    double sigma_r_;
    double sigma_v_;
    double g_;
};

/// Characteristic times. tau_g is empty without gravity; every gravitational
/// exponent is written as t^n * inv_tau_g2() so it is exactly zero in that case.
struct TimeScales
{
    double tau_r = 0.0;
    std::optional<double> tau_g;
    double sigma_v = 0.0;
    double waist = 0.0;
    double rayleigh_length = 0.0;

    /// tau_w(x) = w(x) / (2 sigma_v)
    [[nodiscard]] double tau_w(double x) const noexcept;
    [[nodiscard]] double tau_w0() const noexcept { return waist / (2.0 * sigma_v); }
    /// 1 / tau_g^2, or 0 without gravity.
    [[nodiscard]] double inv_tau_g2() const noexcept;
    /// zeta = tau_r^2 / tau_g^2
    [[nodiscard]] double zeta() const noexcept { return tau_r * tau_r * inv_tau_g2(); }
    /// +infinity when there is no gravity.
    [[nodiscard]] double tau_g_or_inf() const noexcept;
};

[[nodiscard]] TimeScales time_scales(const CloudParams& c, const BeamParams& b);

/// tau_r = sigma_r / sigma_v
[[nodiscard]] double ballistic_time(const CloudParams& c) noexcept;
/// tau_g = 2 sqrt(2) sigma_v / g; empty when g = 0.
[[nodiscard]] std::optional<double> fall_time(const CloudParams& c) noexcept;

/// pi(r, v, t) = pi(r - v t + g t^2 / 2, v - g t, 0) with the Gaussian at t = 0.
[[nodiscard]] double phase_space_density(const CloudParams& c, const Vec3& r, const Vec3& v, double t);

/// rho(r, t) = N / [2 pi s(t)]^{3/2} exp(-(r - center(t))^2 / (2 s(t))), s = spread_squared(t).
[[nodiscard]] double density(const CloudParams& c, const Vec3& r, double t);

/// rho(0, t) through the closed form in tau_r, tau_g.
[[nodiscard]] double center_density(const CloudParams& c, double t);

/// Long-time approximation of center_density where the gravity exponent is t^2 / tau_g^2.
[[nodiscard]] double center_density_long_time(const CloudParams& c, double t);

} // namespace coldcloud
