#pragma once

#include "coldcloud/beam.hpp"
#include "coldcloud/cloud.hpp"
#include "coldcloud/errors.hpp"
#include "coldcloud/optical.hpp"

#include <complex>

namespace coldcloud {

struct EffNumInputs
{
    CloudParams cloud;
    BeamParams beam;
};

/// Resonant cross-section per unit polarizability, 3 lambda^2 / (4 pi).
[[nodiscard]] double coupling_area(const BeamParams& b) noexcept;

/// dN/dx: atoms of the whole cloud per unit length along the beam axis.
[[nodiscard]] double column_number_density(const EffNumInputs& in, double x, double t);

/// dn^(j)/dx: Gaussian-weighted atoms per unit length seen by the beam with w^2
/// replaced by w^2 / j. Order 1 is the ordinary effective layer density.
[[nodiscard]] double layer_number_density(const EffNumInputs& in, double x, double t, double order = 1.0);

/// sigma(t) = integral of dn(x, t) / S(x) over x, by adaptive quadrature on
/// |x| <= 10 sqrt(spread_squared(t)). Valid for any w/sigma_r and sigma_r/l_R.
/// Throws QuadratureError if rel_tol is not reached.
[[nodiscard]] double sigma_general(const EffNumInputs& in, double t, double rel_tol = 1e-9);

/// Total weighted number n^(j)(t) = integral of dn^(j)/dx over x (no 1/S).
[[nodiscard]] double weighted_number_general(const EffNumInputs& in, double t, double order = 1.0,
                                             double rel_tol = 1e-9);

// Closed forms for limiting regimes. None of them checks that its regime holds.

/// Small waist (w << sigma_r), any sigma_r / l_R.
[[nodiscard]] double sigma_small_waist(const EffNumInputs& in, double t);
/// Long Rayleigh length (sigma_r << l_R), any w / sigma_r.
[[nodiscard]] double sigma_long_rayleigh(const EffNumInputs& in, double t);
/// tau_w << tau_r << tau_g.
[[nodiscard]] double sigma_high_temperature(const EffNumInputs& in, double t);

/// dA/A = -alpha_l (3 lambda^2 / 4 pi) sigma for a given effective areal density.
[[nodiscard]] std::complex<double> field_shift(const BeamParams& b, const OpticalParams& opt,
                                               double sigma) noexcept;

/// Linear relative field change produced by the cloud at time t, using sigma_general.
[[nodiscard]] std::complex<double> linear_field_shift(const EffNumInputs& in, const OpticalParams& opt,
                                                      double t);

} // namespace coldcloud
