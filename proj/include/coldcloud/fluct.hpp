#pragma once

// Statistics of the weighted atom number N(t) = sum_i f(r_i(t)) for a cloud with
// Poissonian initial occupation, in the long-Rayleigh-length regime (S independent of x).

#include "coldcloud/effnum.hpp"
#include "coldcloud/errors.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coldcloud {

/// <N(t)> = N tau_w^2 / (tau_r^2 + tau_w^2 + t^2) exp[-t^4 / (tau_g^2 (tau_r^2 + tau_w^2 + t^2))]
[[nodiscard]] double mean_number(const EffNumInputs& in, double t);

/// Small-waist form of the mean: tau_w^2 dropped next to tau_r^2 + t^2 (equals
/// sigma_small_waist * S at the waist).
[[nodiscard]] double mean_number_small_waist(const EffNumInputs& in, double t);

/// <N(t), N(t)>: the mean with w^2 -> w^2 / 2.
[[nodiscard]] double variance(const EffNumInputs& in, double t);

/// <N(t), N(t')> with T = (t + t') / 2 and tau = t - t'. Both t and t' must be >= 0.
[[nodiscard]] double covariance_exact(const EffNumInputs& in, double T, double tau);

/// Same as covariance_exact, addressed by the two times.
[[nodiscard]] double covariance_at(const EffNumInputs& in, double t1, double t2);

enum class N0Form {
    exact,      ///< N tau_w^2 / (tau_r^2 + tau_w^2)
    small_waist ///< N tau_w^2 / tau_r^2
};

/// Parameters of the quasistationary covariance at mean time T.
struct ScaledFluctParams
{
    double T = 0.0;
    double n0 = 0.0;
    double alpha_T2 = 2.0; ///< 2 [1 + (T/tau_r)^2]
    double a_T = 0.0;      ///< (T/tau_r)^2 [4 + (T/tau_r)^2]
    double b_T = 0.0;      ///< 2 (T/tau_r)^2 [2 + (T/tau_r)^2]^2
    double zeta = 0.0;     ///< tau_r^2 / tau_g^2

    [[nodiscard]] double alpha_T() const noexcept;
};

[[nodiscard]] ScaledFluctParams scaled_fluct_params(const EffNumInputs& in, double T,
                                                    N0Form form = N0Form::small_waist);

/// n0 L exp[-zeta (a_T - b_T L)], L = 1 / ((tau/tau_w)^2 + alpha_T^2).
[[nodiscard]] double covariance_quasistationary(const ScaledFluctParams& p, double tau_w, double tau);

struct SeriesResult
{
    double value = 0.0;
    int terms = 0;
};

/// Upper bound on the number of terms summed by the adaptive series below.
inline constexpr int kSeriesTermCap = 200;

/// Power series of the quasistationary covariance in the Lorentzian L. With kmax
/// empty the sum stops once a term falls below 1e-12 of the partial sum (past the
/// largest term); SeriesError if that takes more than kSeriesTermCap terms.
[[nodiscard]] SeriesResult covariance_series(const ScaledFluctParams& p, double tau_w, double tau,
                                             std::optional<int> kmax = std::nullopt);

/// p_k(x) = sum_{j=0}^{k} (2x)^j (2k - j)! / (j! (k - j)!)
[[nodiscard]] double pk_polynomial(int k, double x);
/// log p_k(x); factorials go through lgamma above k = 15.
[[nodiscard]] double log_pk_polynomial(int k, double x);

/// Gravity-free spectrum n0 (pi tau_w / alpha_T) exp(-alpha_T |omega| tau_w).
[[nodiscard]] double spectrum_exponential(const ScaledFluctParams& p, double tau_w, double omega);

/// S_NN(T, omega): Fourier transform of the quasistationary covariance,
/// n0 (pi tau_w / alpha_T) e^{-x} e^{-zeta a_T} sum_k (zeta b_T / (4 alpha_T^2))^k p_k(x) / (k!)^2,
/// x = alpha_T |omega| tau_w.
[[nodiscard]] SeriesResult spectrum_series(const ScaledFluctParams& p, double tau_w, double omega,
                                           std::optional<int> kmax = std::nullopt);

/// S_NN(T, omega) / C_NN(T, 0); integrates to 1 over d omega / 2 pi.
[[nodiscard]] SeriesResult normalized_spectrum(const ScaledFluctParams& p, double tau_w, double omega,
                                               std::optional<int> kmax = std::nullopt);

/// Zero-frequency value of normalized_spectrum through the (2k)! / (k!)^3 series.
[[nodiscard]] SeriesResult normalized_spectrum_peak(const ScaledFluctParams& p, double tau_w);

struct NumericSpectrum
{
    std::vector<double> values;
    /// Estimated contribution of the covariance tails outside the grid.
    double truncation_bound = 0.0;
    std::vector<std::string> warnings;
};

/// Trapezoidal cosine transform of a sampled even covariance over a symmetric,
/// strictly increasing delay grid.
[[nodiscard]] NumericSpectrum cosine_transform(std::span<const double> tau, std::span<const double> cov,
                                               std::span<const double> omega);

/// cosine_transform of covariance_exact(T, .) with grid diagnostics against the
/// correlation width alpha_T tau_w. The grid must satisfy |tau| <= 2 T.
[[nodiscard]] NumericSpectrum spectrum_numeric(const EffNumInputs& in, double T,
                                               std::span<const double> tau_grid,
                                               std::span<const double> omega);

} // namespace coldcloud
