#pragma once

#include "coldcloud/effnum.hpp"
#include "coldcloud/errors.hpp"
#include "coldcloud/optical.hpp"

#include <complex>

namespace coldcloud {

/// alpha = alpha_l / (1 + 2 s). Throws std::invalid_argument for s < 0.
[[nodiscard]] std::complex<double> polarizability(const OpticalParams& opt, double s_local);

/// On-axis saturation at x: s_m(x) = s_m0 w0^2 / w(x)^2.
[[nodiscard]] double saturation_on_axis(const OpticalParams& opt, const BeamParams& b, double x) noexcept;

/// ln(1 + 2 s) / (2 s), continuous at s = 0.
[[nodiscard]] double saturation_log_factor(double s) noexcept;

/// How a saturated layer density was evaluated.
enum class SaturatedLayerMethod { series, log_reduction, quadrature };

struct SaturatedLayer
{
    double value = 0.0;
    SaturatedLayerMethod method = SaturatedLayerMethod::series;
    int terms = 0;
};

/// Above this value of 2 s_m(x) the power series in s_m is not used.
inline constexpr double kSaturationSeriesLimit = 0.8;

/// dn_s/dx by the power series sum_k (-2 s_m)^k dn^(1+k)/dx. Throws SeriesError
/// when the series fails to converge within 200 terms.
[[nodiscard]] SaturatedLayer saturated_layer_series(const EffNumInputs& in, const OpticalParams& opt,
                                                    double x, double t);

/// dn_s/dx by direct 2D quadrature of f / (1 + 2 s_m f) rho over the transverse plane.
[[nodiscard]] SaturatedLayer saturated_layer_quadrature(const EffNumInputs& in, const OpticalParams& opt,
                                                        double x, double t);

/// dn_s/dx choosing the series when 2 s_m(x) < kSaturationSeriesLimit, otherwise the exact
/// log reduction for a transversally uniform cloud (w(x)^2 <= 1e-9 * 4 spread) or quadrature.
[[nodiscard]] SaturatedLayer saturated_layer_density(const EffNumInputs& in, const OpticalParams& opt,
                                                     double x, double t);

/// sigma_s(t) = integral of dn_s(x, t) / S(x) over x.
[[nodiscard]] double sigma_saturated_general(const EffNumInputs& in, const OpticalParams& opt, double t,
                                             double rel_tol = 1e-9);

/// sigma_s = sigma(t) ln(1 + 2 s_m0) / (2 s_m0), valid for w << sigma_r << l_R.
/// sigma(t) is taken from sigma_long_rayleigh.
[[nodiscard]] double sigma_saturated_closed(const EffNumInputs& in, const OpticalParams& opt, double t);

/// dA/A with the saturated effective density (sigma_saturated_general).
[[nodiscard]] std::complex<double> nonlinear_field_shift(const EffNumInputs& in, const OpticalParams& opt,
                                                         double t);

} // namespace coldcloud
