#include "coldcloud/saturation.hpp"

#include "coldcloud/errors.hpp"
#include "coldcloud/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace coldcloud {

using std::numbers::pi;

namespace {

constexpr int kMaxSeriesTerms = 200;
constexpr double kSeriesRelStop = 1e-12;
// A cloud this much wider than the beam is treated as uniform across it.
constexpr double kUniformCloudRatio = 1e-9;

// Gaussian transverse profiles are cut where exp(-2 r^2 / w^2) < e^-128 and at
// 10 rms of the cloud.
constexpr double kBeamCut = 8.0;
constexpr double kCloudCut = 10.0;

} // namespace

std::complex<double> polarizability(const OpticalParams& opt, double s_local)
{
    if (!(s_local >= 0.0))
        throw std::invalid_argument("polarizability: saturation must be >= 0");
    return linear_polarizability(opt) / (1.0 + 2.0 * s_local);
}

double saturation_on_axis(const OpticalParams& opt, const BeamParams& b, double x) noexcept
{
    return opt.s_m0 * b.waist() * b.waist() / beam_size_squared(b, x);
}

double saturation_log_factor(double s) noexcept
{
    const double a = 2.0 * s;
    if (a == 0.0)
        return 1.0;
    return std::log1p(a) / a;
}

SaturatedLayer saturated_layer_series(const EffNumInputs& in, const OpticalParams& opt, double x, double t)
{
    detail::require_nonnegative_time(t, "saturated_layer_series");
    const double a = 2.0 * saturation_on_axis(opt, in.beam, x);
    SaturatedLayer out{.value = 0.0, .method = SaturatedLayerMethod::series, .terms = 0};
    double power = 1.0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        const double term = power * layer_number_density(in, x, t, 1.0 + k);
        out.value += term;
        out.terms = k + 1;
        if (std::abs(term) <= kSeriesRelStop * std::abs(out.value))
            return out;
        power *= -a;
        if (power == 0.0)
            return out;
    }
    throw SeriesError("saturated_layer_series: no convergence for 2 s_m = " + std::to_string(a),
                      kMaxSeriesTerms);
}

SaturatedLayer saturated_layer_quadrature(const EffNumInputs& in, const OpticalParams& opt, double x,
                                          double t)
{
    detail::require_nonnegative_time(t, "saturated_layer_quadrature");
    const double a = 2.0 * saturation_on_axis(opt, in.beam, x);
    const double w2 = beam_size_squared(in.beam, x);
    const double w = std::sqrt(w2);
    const double s2 = in.cloud.spread_squared(t);
    const double s = std::sqrt(s2);
    const double zc = in.cloud.center(t).z;
    const double column = column_number_density(in, x, t);
    const double norm = column / (2.0 * pi * s2);

    const double ylim = std::min(kBeamCut * w, kCloudCut * s);
    const double zlo = std::max(-kBeamCut * w, zc - kCloudCut * s);
    const double zhi = std::min(kBeamCut * w, zc + kCloudCut * s);
    SaturatedLayer out{.value = 0.0, .method = SaturatedLayerMethod::quadrature, .terms = 0};
    if (!(zlo < zhi) || column == 0.0)
        return out;

    auto inner = [&](double z) {
        const double dz = z - zc;
        const double fz = std::exp(-2.0 * z * z / w2);
        const double gz = std::exp(-dz * dz / (2.0 * s2));
        auto integrand = [&](double y) {
            const double f = std::exp(-2.0 * y * y / w2) * fz;
            return f / (1.0 + a * f) * std::exp(-y * y / (2.0 * s2));
        };
        return gz * quad::integrate_with_breaks(integrand, -ylim, ylim, {0.0}, {.rel_tol = 1e-10}).value;
    };
    out.value = norm * quad::integrate_with_breaks(inner, zlo, zhi, {0.0, zc}, {.rel_tol = 1e-10}).value;
    return out;
}

SaturatedLayer saturated_layer_density(const EffNumInputs& in, const OpticalParams& opt, double x, double t)
{
    const double sm = saturation_on_axis(opt, in.beam, x);
    if (2.0 * sm < kSaturationSeriesLimit)
        return saturated_layer_series(in, opt, x, t);

    const double w2 = beam_size_squared(in.beam, x);
    const double s2 = in.cloud.spread_squared(t);
    if (w2 <= kUniformCloudRatio * 4.0 * s2) {
        // Density at the axis times the exact transverse integral S ln(1 + 2 s_m) / (2 s_m).
        const double zc = in.cloud.center(t).z;
        const double rho_axis =
            column_number_density(in, x, t) / (2.0 * pi * s2) * std::exp(-zc * zc / (2.0 * s2));
        return {.value = rho_axis * beam_section(in.beam, x) * saturation_log_factor(sm),
                .method = SaturatedLayerMethod::log_reduction,
                .terms = 0};
    }
    return saturated_layer_quadrature(in, opt, x, t);
}

double sigma_saturated_general(const EffNumInputs& in, const OpticalParams& opt, double t, double rel_tol)
{
    detail::require_nonnegative_time(t, "sigma_saturated_general");
    opt.validate();
    const double half = 10.0 * std::sqrt(in.cloud.spread_squared(t));
    std::vector<double> breaks{0.0};
    // Points where the evaluation switches from quadrature to the series.
    const double ratio = 2.0 * opt.s_m0 / kSaturationSeriesLimit;
    if (ratio > 1.0) {
        const double xs = in.beam.rayleigh_length() * std::sqrt(ratio - 1.0);
        breaks.push_back(xs);
        breaks.push_back(-xs);
    }
    auto integrand = [&](double x) {
        return saturated_layer_density(in, opt, x, t).value / beam_section(in.beam, x);
    };
    return quad::integrate_with_breaks(integrand, -half, half, breaks, {.rel_tol = rel_tol}).value;
}

double sigma_saturated_closed(const EffNumInputs& in, const OpticalParams& opt, double t)
{
    opt.validate();
    return sigma_long_rayleigh(in, t) * saturation_log_factor(opt.s_m0);
}

std::complex<double> nonlinear_field_shift(const EffNumInputs& in, const OpticalParams& opt, double t)
{
    return field_shift(in.beam, opt, sigma_saturated_general(in, opt, t));
}

} // namespace coldcloud
