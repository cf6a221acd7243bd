#pragma once

#include "coldcloud/effnum.hpp"
#include "coldcloud/optical.hpp"

namespace coldcloud {

/// Field decay rate kappa [rad/s] and round-trip time tau_c [s]. 2 kappa tau_c is
/// the intensity transmission of the coupling mirror and must lie in (0, 1].
class CavityParams
{
public:
    CavityParams(double kappa, double round_trip_time);

    [[nodiscard]] double kappa() const noexcept { return kappa_; }
    [[nodiscard]] double round_trip_time() const noexcept { return tau_c_; }
    [[nodiscard]] double mirror_transmission() const noexcept { return 2.0 * kappa_ * tau_c_; }

private:
    double kappa_;
    double tau_c_;
};

/// Below this |delta| the dispersive formulas are flagged as outside their regime.
inline constexpr double kDispersiveDetuning = 3.0;

/// C = (3 lambda^2 / (4 pi S)) n / (2 kappa tau_c), S the waist section.
[[nodiscard]] double cooperativity(const CavityParams& cav, const BeamParams& b, double n);

struct DetuningShift
{
    double via_cooperativity = 0.0; ///< 2 kappa C / delta
    double via_number = 0.0;        ///< (3 lambda^2 / 4 pi S) n / (delta tau_c)
    bool dispersive = false;        ///< |delta| >= kDispersiveDetuning

    [[nodiscard]] double value() const noexcept { return via_cooperativity; }
};

/// Cavity detuning shift Phi [rad/s] for n effective atoms. Throws
/// std::domain_error for delta = 0.
[[nodiscard]] DetuningShift detuning_shift(const CavityParams& cav, const BeamParams& b,
                                           const OpticalParams& opt, double n);

struct DetuningSpectrum
{
    double from_number_spectrum = 0.0; ///< (3 lambda^2 / 4 pi S)^2 S_NN / (delta tau_c)^2
    double from_cooperativity = 0.0;   ///< kappa C(T) / delta^2 (3 lambda^2 / 4 pi S) Sbar_NN / tau_c
    bool dispersive = false;
    int terms = 0;

    [[nodiscard]] double value() const noexcept { return from_number_spectrum; }
};

/// S_PhiPhi(T, omega) from the quasistationary number spectrum. C(T) uses
/// mean_number_small_waist, the regime in which S_NN = n(T) Sbar_NN / 2.
[[nodiscard]] DetuningSpectrum detuning_spectrum(const CavityParams& cav, const BeamParams& b,
                                                 const OpticalParams& opt, const EffNumInputs& in,
                                                 double T, double omega);

struct LinearRegimeCheck
{
    double peak = 0.0;  ///< S_PhiPhi(T, 0), the spectral maximum
    double kappa = 0.0;
    bool linear = false; ///< peak < kappa
};

/// Compares the detuning-noise peak with the cavity linewidth kappa.
[[nodiscard]] LinearRegimeCheck detuning_linear_regime(const CavityParams& cav, const BeamParams& b,
                                                       const OpticalParams& opt, const EffNumInputs& in,
                                                       double T);

} // namespace coldcloud
