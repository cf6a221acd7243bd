#include "coldcloud/fluct.hpp"

#include "coldcloud/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace coldcloud {

using std::numbers::pi;

namespace {

constexpr double kSeriesRelStop = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// exp() of anything below this is zero in double precision.
constexpr double kLogUnderflow = -746.0;

// Running log(sum exp(l_i)) that never forms the (possibly overflowing) terms.
class LogSum
{
public:
    void add(double log_term)
    {
        if (log_term == kNegInf)
            return;
        if (log_term <= max_) {
            scaled_ += std::exp(log_term - max_);
        } else {
            scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        }
    }
    [[nodiscard]] double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(scaled_); }

private:
    double max_ = kNegInf;
    double scaled_ = 0.0;
};

// Sums exp(prefix + log_term(k)). Adaptive mode stops once a term is past the
// maximum and below kSeriesRelStop of the partial sum.
template <class LogTerm>
SeriesResult sum_log_series(double log_prefix, std::optional<int> kmax, LogTerm&& log_term,
                            const char* what)
{
    if (kmax && *kmax < 0)
        throw std::invalid_argument(std::string(what) + ": kmax must be >= 0");
    LogSum sum;
    const int last = kmax ? *kmax : kSeriesTermCap - 1;
    double prev = kNegInf;
    for (int k = 0; k <= last; ++k) {
        const double lt = log_term(k);
        sum.add(lt);
        if (!kmax) {
            const bool decreasing = k > 0 && lt <= prev;
            if (lt == kNegInf || (decreasing && lt - sum.value() < std::log(kSeriesRelStop)))
                return {std::exp(log_prefix + sum.value()), k + 1};
        }
        prev = lt;
    }
    if (!kmax)
        throw SeriesError(std::string(what) + ": no convergence within " + std::to_string(kSeriesTermCap) +
                              " terms",
                          kSeriesTermCap);
    return {std::exp(log_prefix + sum.value()), last + 1};
}

struct Scales
{
    double tr2;
    double tw2;
    double inv_tg2;
};

Scales scales_of(const EffNumInputs& in)
{
    const TimeScales ts = time_scales(in.cloud, in.beam);
    const double tw = ts.tau_w0();
    return {ts.tau_r * ts.tau_r, tw * tw, ts.inv_tau_g2()};
}

// N tw^2 / den * exp(-t^4 / (tau_g^2 den)) with den = tr2 + tw2 + t^2; shared by
// the mean and (with tw2 halved) the variance.
double lorentz_gauss(double n_total, double tw2, double den, double t, double inv_tg2)
{
    return n_total * tw2 / den * std::exp(-std::pow(t, 4) * inv_tg2 / den);
}

} // namespace

double mean_number(const EffNumInputs& in, double t)
{
    detail::require_nonnegative_time(t, "mean_number");
    const Scales s = scales_of(in);
    return lorentz_gauss(in.cloud.n_total(), s.tw2, s.tr2 + s.tw2 + t * t, t, s.inv_tg2);
}

double mean_number_small_waist(const EffNumInputs& in, double t)
{
    detail::require_nonnegative_time(t, "mean_number_small_waist");
    const Scales s = scales_of(in);
    return lorentz_gauss(in.cloud.n_total(), s.tw2, s.tr2 + t * t, t, s.inv_tg2);
}

double variance(const EffNumInputs& in, double t)
{
    detail::require_nonnegative_time(t, "variance");
    const Scales s = scales_of(in);
    // N tw^2 / (2 tr^2 + tw^2 + 2 t^2) exp[-2 t^4 / (tg^2 (2 tr^2 + tw^2 + 2 t^2))]
    const double den = s.tr2 + 0.5 * s.tw2 + t * t;
    return 0.5 * lorentz_gauss(in.cloud.n_total(), s.tw2, den, t, s.inv_tg2);
}

double covariance_exact(const EffNumInputs& in, double T, double tau)
{
    const double t1 = T + 0.5 * tau;
    const double t2 = T - 0.5 * tau;
    if (!(t1 >= 0.0) || !(t2 >= 0.0))
        throw std::domain_error("covariance_exact: both times T +/- tau/2 must be >= 0");
    const Scales s = scales_of(in);
    const double T2 = T * T;
    const double tau2 = tau * tau;
    const double n0 = in.cloud.n_total() * s.tw2 / (s.tr2 + s.tw2);
    const double half_width = tau2 + 2.0 * s.tw2;
    const double d = 2.0 * s.tw2 * T2 + (s.tr2 + 0.5 * s.tw2) * half_width;
    const double lorentz = s.tw2 * (s.tr2 + s.tw2) / d;
    // (t t')^2 = (T^2 - tau^2/4)^2
    const double prod = T2 - 0.25 * tau2;
    const double m = (prod * prod * half_width + 4.0 * (s.tr2 + s.tw2) * T2 * tau2) * s.inv_tg2 / d;
    return n0 * lorentz * std::exp(-m);
}

double covariance_at(const EffNumInputs& in, double t1, double t2)
{
    return covariance_exact(in, 0.5 * (t1 + t2), t1 - t2);
}

double ScaledFluctParams::alpha_T() const noexcept { return std::sqrt(alpha_T2); }

ScaledFluctParams scaled_fluct_params(const EffNumInputs& in, double T, N0Form form)
{
    detail::require_nonnegative_time(T, "scaled_fluct_params");
    const Scales s = scales_of(in);
    const double u = T * T / s.tr2;
    ScaledFluctParams p;
    p.T = T;
    p.n0 = in.cloud.n_total() * s.tw2 / (form == N0Form::exact ? s.tr2 + s.tw2 : s.tr2);
    p.alpha_T2 = 2.0 * (1.0 + u);
    p.a_T = u * (4.0 + u);
    p.b_T = 2.0 * u * (2.0 + u) * (2.0 + u);
    p.zeta = s.tr2 * s.inv_tg2;
    return p;
}

double covariance_quasistationary(const ScaledFluctParams& p, double tau_w, double tau)
{
    const double q = tau / tau_w;
    const double lorentz = 1.0 / (q * q + p.alpha_T2);
    return p.n0 * lorentz * std::exp(-p.zeta * (p.a_T - p.b_T * lorentz));
}

SeriesResult covariance_series(const ScaledFluctParams& p, double tau_w, double tau, std::optional<int> kmax)
{
    const double q = tau / tau_w;
    const double lorentz = 1.0 / (q * q + p.alpha_T2);
    if (p.n0 == 0.0)
        return {0.0, 1};
    const double log_prefix = std::log(p.n0) - p.zeta * p.a_T + std::log(lorentz);
    const double r = p.zeta * p.b_T * lorentz;
    const double log_r = r > 0.0 ? std::log(r) : kNegInf;
    return sum_log_series(log_prefix, kmax, [&](int k) {
        if (k == 0)
            return 0.0;
        return k * log_r - std::lgamma(k + 1.0);
    }, "covariance_series");
}

double log_pk_polynomial(int k, double x)
{
    if (k < 0)
        throw std::invalid_argument("pk_polynomial: k must be >= 0");
    if (x < 0.0)
        throw std::invalid_argument("pk_polynomial: x must be >= 0");
    if (k <= 15)
        return std::log(pk_polynomial(k, x));
    if (x == 0.0)
        return std::lgamma(2.0 * k + 1.0) - std::lgamma(k + 1.0);
    LogSum sum;
    const double log2x = std::log(2.0 * x);
    for (int j = 0; j <= k; ++j)
        sum.add(j * log2x + std::lgamma(2.0 * k - j + 1.0) - std::lgamma(j + 1.0) -
                std::lgamma(static_cast<double>(k - j) + 1.0));
    return sum.value();
}

double pk_polynomial(int k, double x)
{
    if (k < 0)
        throw std::invalid_argument("pk_polynomial: k must be >= 0");
    if (x < 0.0)
        throw std::invalid_argument("pk_polynomial: x must be >= 0");
    if (k > 15)
        return std::exp(log_pk_polynomial(k, x));
    // 30! is the largest factorial needed here.
    static const auto fact = [] {
        std::array<double, 31> f{};
        f[0] = 1.0;
        for (std::size_t i = 1; i < f.size(); ++i)
            f[i] = f[i - 1] * static_cast<double>(i);
        return f;
    }();
    double sum = 0.0;
    double pw = 1.0;
    for (int j = 0; j <= k; ++j) {
        sum += pw * fact[2 * k - j] / (fact[j] * fact[k - j]);
        pw *= 2.0 * x;
    }
    return sum;
}

double spectrum_exponential(const ScaledFluctParams& p, double tau_w, double omega)
{
    const double a = p.alpha_T();
    return p.n0 * pi * tau_w / a * std::exp(-a * std::abs(omega) * tau_w);
}

namespace {

SeriesResult spectral_sum(const ScaledFluctParams& p, double tau_w, double omega, double log_prefix,
                          std::optional<int> kmax, const char* what)
{
    const double x = p.alpha_T() * std::abs(omega) * tau_w;
    const double c = p.zeta * p.b_T / (4.0 * p.alpha_T2);
    const double log_c = c > 0.0 ? std::log(c) : kNegInf;
    if (!kmax && c > 0.0) {
        // p_k(x) <= (2x + 2k)^k, so the sum is below I0(4 sqrt(c x)) plus a bounded
        // k-only part. Deep in the tail the whole value underflows.
        const double e = std::numbers::e;
        const double log_bound = std::log(2.0) + std::max(4.0 * std::sqrt(c * x),
                                                          4.0 * c * e + std::log1p(8.0 * c * e * e));
        if (log_prefix - x + log_bound < kLogUnderflow)
            return {0.0, 1};
    }
    return sum_log_series(log_prefix - x, kmax, [&](int k) {
        if (k == 0)
            return 0.0;
        return k * log_c + log_pk_polynomial(k, x) - 2.0 * std::lgamma(k + 1.0);
    }, what);
}

} // namespace

SeriesResult spectrum_series(const ScaledFluctParams& p, double tau_w, double omega, std::optional<int> kmax)
{
    if (p.n0 == 0.0)
        return {0.0, 1};
    const double log_prefix = std::log(p.n0 * pi * tau_w / p.alpha_T()) - p.zeta * p.a_T;
    return spectral_sum(p, tau_w, omega, log_prefix, kmax, "spectrum_series");
}

SeriesResult normalized_spectrum(const ScaledFluctParams& p, double tau_w, double omega,
                                 std::optional<int> kmax)
{
    const double log_prefix = std::log(pi * p.alpha_T() * tau_w) - p.zeta * p.b_T / p.alpha_T2;
    return spectral_sum(p, tau_w, omega, log_prefix, kmax, "normalized_spectrum");
}

SeriesResult normalized_spectrum_peak(const ScaledFluctParams& p, double tau_w)
{
    const double c = p.zeta * p.b_T / (4.0 * p.alpha_T2);
    const double log_prefix = std::log(pi * p.alpha_T() * tau_w) - p.zeta * p.b_T / p.alpha_T2;
    if (c == 0.0)
        return {std::exp(log_prefix), 1};
    // term_{k+1} / term_k = c (2k+1)(2k+2) / (k+1)^3
    const double log_c = std::log(c);
    double log_term = 0.0;
    int last_k = 0;
    auto term = [&](int k) {
        for (; last_k < k; ++last_k) {
            const double kk = last_k;
            log_term += log_c + std::log((2.0 * kk + 1.0) * (2.0 * kk + 2.0)) - 3.0 * std::log(kk + 1.0);
        }
        return log_term;
    };
    return sum_log_series(log_prefix, std::nullopt, term, "normalized_spectrum_peak");
}

NumericSpectrum cosine_transform(std::span<const double> tau, std::span<const double> cov,
                                 std::span<const double> omega)
{
    const std::size_t n = tau.size();
    if (n < 3 || cov.size() != n)
        throw std::invalid_argument("cosine_transform: need >= 3 delays with one covariance value each");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(tau[i + 1] > tau[i]))
            throw std::invalid_argument("cosine_transform: delay grid must be strictly increasing");
    const double span_half = 0.5 * (tau[n - 1] - tau[0]);
    for (std::size_t i = 0; i < n / 2; ++i)
        if (std::abs(tau[i] + tau[n - 1 - i]) > 1e-9 * span_half)
            throw std::invalid_argument("cosine_transform: delay grid must be symmetric about 0");

    NumericSpectrum out;
    out.values.reserve(omega.size());
    for (double w : omega) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i)
            acc += 0.5 * (tau[i + 1] - tau[i]) *
                   (std::cos(w * tau[i]) * cov[i] + std::cos(w * tau[i + 1]) * cov[i + 1]);
        out.values.push_back(acc);
    }

    // Tails assumed to fall off at least like 1/tau^2: integral beyond the edge <= C(edge) * edge.
    const double edge = std::max(std::abs(cov.front()) * std::abs(tau.front()),
                                 std::abs(cov.back()) * std::abs(tau.back()));
    out.truncation_bound = 2.0 * edge;
    const double peak = *std::max_element(cov.begin(), cov.end(),
                                          [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (std::max(std::abs(cov.front()), std::abs(cov.back())) > 1e-3 * std::abs(peak)) {
        std::ostringstream msg;
        msg << "covariance has not decayed at the grid edge; truncation bound " << out.truncation_bound;
        out.warnings.push_back(msg.str());
    }
    return out;
}

NumericSpectrum spectrum_numeric(const EffNumInputs& in, double T, std::span<const double> tau_grid,
                                 std::span<const double> omega)
{
    std::vector<double> cov;
    cov.reserve(tau_grid.size());
    for (double tau : tau_grid)
        cov.push_back(covariance_exact(in, T, tau));
    NumericSpectrum out = cosine_transform(tau_grid, cov, omega);

    const double tau_w = time_scales(in.cloud, in.beam).tau_w0();
    const double width = scaled_fluct_params(in, T).alpha_T() * tau_w;
    const double reach = tau_grid.back();
    if (reach < 20.0 * width) {
        std::ostringstream msg;
        msg << "delay grid covers " << reach / width << " correlation widths (< 20); truncation bound "
            << out.truncation_bound;
        out.warnings.push_back(msg.str());
    }
    double max_step = 0.0;
    for (std::size_t i = 0; i + 1 < tau_grid.size(); ++i)
        max_step = std::max(max_step, tau_grid[i + 1] - tau_grid[i]);
    if (max_step > 0.25 * width) {
        std::ostringstream msg;
        msg << "delay step " << max_step << " s exceeds a quarter correlation width (" << width << " s)";
        out.warnings.push_back(msg.str());
    }
    return out;
}

} // namespace coldcloud
