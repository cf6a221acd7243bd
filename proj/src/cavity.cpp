#include "coldcloud/cavity.hpp"

#include "coldcloud/fluct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coldcloud {

CavityParams::CavityParams(double kappa, double round_trip_time) : kappa_(kappa), tau_c_(round_trip_time)
{
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw std::invalid_argument("cavity: kappa must be > 0");
    if (!(round_trip_time > 0.0) || !std::isfinite(round_trip_time))
        throw std::invalid_argument("cavity: tau_c must be > 0");
    if (!(mirror_transmission() <= 1.0))
        throw std::invalid_argument("cavity: 2 kappa tau_c = " + std::to_string(mirror_transmission()) +
                                    " is not a transmission in (0, 1]");
}

namespace {

double coupling_per_section(const BeamParams& b) { return coupling_area(b) / beam_section(b, 0.0); }

void require_detuned(const OpticalParams& opt, const char* where)
{
    if (opt.delta == 0.0)
        throw std::domain_error(std::string(where) + ": the dispersive shift is undefined at delta = 0");
}

} // namespace

double cooperativity(const CavityParams& cav, const BeamParams& b, double n)
{
    if (!(n >= 0.0))
        throw std::invalid_argument("cooperativity: atom number must be >= 0");
    return coupling_per_section(b) * n / cav.mirror_transmission();
}

DetuningShift detuning_shift(const CavityParams& cav, const BeamParams& b, const OpticalParams& opt, double n)
{
    require_detuned(opt, "detuning_shift");
    DetuningShift out;
    out.via_cooperativity = 2.0 * cav.kappa() * cooperativity(cav, b, n) / opt.delta;
    out.via_number = coupling_per_section(b) * n / (opt.delta * cav.round_trip_time());
    out.dispersive = std::abs(opt.delta) >= kDispersiveDetuning;
    return out;
}

DetuningSpectrum detuning_spectrum(const CavityParams& cav, const BeamParams& b, const OpticalParams& opt,
                                   const EffNumInputs& in, double T, double omega)
{
    require_detuned(opt, "detuning_spectrum");
    const ScaledFluctParams p = scaled_fluct_params(in, T, N0Form::small_waist);
    const double tau_w = time_scales(in.cloud, in.beam).tau_w0();
    const SeriesResult s_nn = spectrum_series(p, tau_w, omega);
    const SeriesResult s_bar = normalized_spectrum(p, tau_w, omega);
    const double k = coupling_per_section(b);
    const double dt = opt.delta * cav.round_trip_time();
    const double coop = cooperativity(cav, b, mean_number_small_waist(in, T));

    DetuningSpectrum out;
    out.from_number_spectrum = k * k * s_nn.value / (dt * dt);
    out.from_cooperativity =
        cav.kappa() * coop / (opt.delta * opt.delta) * k * s_bar.value / cav.round_trip_time();
    out.dispersive = std::abs(opt.delta) >= kDispersiveDetuning;
    out.terms = std::max(s_nn.terms, s_bar.terms);
    return out;
}

LinearRegimeCheck detuning_linear_regime(const CavityParams& cav, const BeamParams& b, const OpticalParams& opt,
                                         const EffNumInputs& in, double T)
{
    LinearRegimeCheck out;
    out.peak = detuning_spectrum(cav, b, opt, in, T, 0.0).value();
    out.kappa = cav.kappa();
    out.linear = out.peak < out.kappa;
    return out;
}

} // namespace coldcloud
