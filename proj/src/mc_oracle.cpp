#include "coldcloud/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace coldcloud::mc {

std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return mix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

namespace {

std::uint64_t poisson_inversion(double mean, Engine& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double limit = std::exp(-mean);
    double prod = 1.0;
    std::uint64_t k = 0;
    for (;;) {
        prod *= u(rng);
        if (prod <= limit)
            return k;
        ++k;
    }
}

// W. Hormann, "The transformed rejection method for generating Poisson random
// variables", Insurance: Mathematics and Economics 12 (1993).
std::uint64_t poisson_ptrs(double mean, Engine& rng)
{
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double U = u01(rng) - 0.5;
        const double V = u01(rng);
        const double us = 0.5 - std::abs(U);
        const double k = std::floor((2.0 * a / us + b) * U + mean + 0.43);
        if (us >= 0.07 && V <= vr)
            return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && V > us))
            continue;
        if (std::log(V) + std::log(invalpha) - std::log(a / (us * us) + b)
            <= -mean + k * loglam - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(k);
    }
}

} // namespace

std::uint64_t sample_poisson(double mean, Engine& rng)
{
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("sample_poisson: mean must be finite and non-negative");
    if (mean == 0.0)
        return 0;
    if (mean < 30.0)
        return poisson_inversion(mean, rng);
    if (mean <= 1e6)
        return poisson_ptrs(mean, rng);
    std::normal_distribution<double> z(0.0, 1.0);
    const double k = std::floor(mean + std::sqrt(mean) * z(rng) + 0.5);
    return k < 0.0 ? 0 : static_cast<std::uint64_t>(k);
}

namespace {

// One code path for drawing atoms, shared by sample_cloud and the ensemble loops.
template <class Visit>
void for_each_atom(const CloudParams& c, std::uint64_t seed, Visit&& visit)
{
    Engine rng(seed);
    const std::uint64_t n = sample_poisson(c.n_total(), rng);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sr = c.sigma_r();
    const double sv = c.sigma_v();
    for (std::uint64_t i = 0; i < n; ++i) {
        Vec3 r;
        Vec3 v;
        r.x = sr * gauss(rng);
        r.y = sr * gauss(rng);
        r.z = sr * gauss(rng);
        v.x = sv * gauss(rng);
        v.y = sv * gauss(rng);
        v.z = sv * gauss(rng);
        visit(r, v);
    }
}

void validate(std::span<const double> times, const EnsembleOptions& opt)
{
    if (times.empty())
        throw std::invalid_argument("mc: at least one time is required");
    for (double t : times)
        if (!std::isfinite(t) || t < 0.0)
            throw std::domain_error("mc: times must be finite and non-negative");
    if (opt.realizations < 2)
        throw std::invalid_argument("mc: at least two realizations are required");
}

// Fills samples[r * m + k] with the weighted count of realization r at times[k].
template <class Weight>
std::vector<double> run_ensemble(const CloudParams& c, std::span<const double> times,
                                 const EnsembleOptions& opt, const Weight& weight)
{
    const std::size_t m = times.size();
    const std::size_t n = opt.realizations;
    std::vector<double> samples(n * m, 0.0);
    const double g = c.gravity();

    auto one = [&](std::size_t r) {
        double* row = samples.data() + r * m;
        for_each_atom(c, substream_seed(opt.seed, r), [&](const Vec3& r0, const Vec3& v0) {
            for (std::size_t k = 0; k < m; ++k)
                row[k] += weight(propagate(r0, v0, g, times[k]));
        });
    };

    unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t r = 0; r < n; ++r)
            one(r);
        return samples;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                try {
                    for (std::size_t r = next.fetch_add(1); r < n; r = next.fetch_add(1))
                        one(r);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(n);
                }
            });
    }
    if (failure)
        std::rethrow_exception(failure);
    return samples;
}

// Pairwise summation over a contiguous range.
double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

struct Column
{
    std::vector<double> centered;
    double mean;
};

Column column(const std::vector<double>& samples, std::size_t m, std::size_t k, std::size_t n)
{
    Column col;
    col.centered.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        col.centered[i] = samples[i * m + k];
    col.mean = pairwise_sum(col.centered) / static_cast<double>(n);
    for (double& x : col.centered)
        x -= col.mean;
    return col;
}

// Sample covariance of two centered columns and its leave-one-out jackknife error.
// With p_i = a_i b_i, the leave-one-out estimate is (S - p_i n/(n-1)) / (n-2), so the
// jackknife variance reduces to (n-1)/n * (n/((n-1)(n-2)))^2 * sum (p_i - pbar)^2.
std::pair<double, double> covariance_with_se(const std::vector<double>& a, const std::vector<double>& b)
{
    const std::size_t n = a.size();
    const double nd = static_cast<double>(n);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = a[i] * b[i];
    const double s = pairwise_sum(p);
    const double cov = s / (nd - 1.0);
    if (n < 3)
        return {cov, std::numeric_limits<double>::infinity()};
    const double pbar = s / nd;
    for (double& x : p)
        x = (x - pbar) * (x - pbar);
    const double ss = pairwise_sum(p);
    const double f = nd / ((nd - 1.0) * (nd - 2.0));
    return {cov, std::sqrt((nd - 1.0) / nd * f * f * ss)};
}

} // namespace

Vec3 propagate(const Vec3& r0, const Vec3& v0, double g, double t)
{
    return {r0.x + v0.x * t, r0.y + v0.y * t, r0.z + v0.z * t - 0.5 * g * t * t};
}

Realization sample_cloud(const CloudParams& c, std::uint64_t seed)
{
    Realization out;
    for_each_atom(c, seed, [&](const Vec3& r, const Vec3& v) {
        out.positions.push_back(r);
        out.velocities.push_back(v);
    });
    return out;
}

namespace {

struct GaussianWeight
{
    BeamParams beam;
    double operator()(const Vec3& r) const { return weight(beam, r); }
};

struct BoxWeight
{
    Box box;
    double operator()(const Vec3& r) const { return box.contains(r) ? 1.0 : 0.0; }
};

} // namespace

double effective_count(const BeamParams& b, const Realization& real, double g, double t)
{
    const GaussianWeight f{b};
    double s = 0.0;
    for (std::size_t i = 0; i < real.count(); ++i)
        s += f(propagate(real.positions[i], real.velocities[i], g, t));
    return s;
}

EnsembleStats ensemble_stats(const CloudParams& c, const BeamParams& b, std::span<const double> times,
                             const EnsembleOptions& opt)
{
    validate(times, opt);
    const auto samples = run_ensemble(c, times, opt, GaussianWeight{b});
    const std::size_t m = times.size();
    const std::size_t n = opt.realizations;

    EnsembleStats st;
    st.times.assign(times.begin(), times.end());
    st.realization_count = n;
    st.seed = opt.seed;
    st.covariance.assign(m * m, 0.0);
    st.covariance_se.assign(m * m, 0.0);

    std::vector<Column> cols;
    cols.reserve(m);
    for (std::size_t k = 0; k < m; ++k)
        cols.push_back(column(samples, m, k, n));

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const auto [cov, se] = covariance_with_se(cols[i].centered, cols[j].centered);
            st.covariance[i * m + j] = st.covariance[j * m + i] = cov;
            st.covariance_se[i * m + j] = st.covariance_se[j * m + i] = se;
        }
    }
    for (std::size_t k = 0; k < m; ++k) {
        st.mean.push_back(cols[k].mean);
        st.variance.push_back(st.cov(k, k));
        st.variance_se.push_back(st.cov_se(k, k));
        st.mean_se.push_back(std::sqrt(st.cov(k, k) / static_cast<double>(n)));
        if (n >= 3) {
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i)
                col[i] = samples[i * m + k];
            const auto est = variance_to_mean(col);
            st.ratio.push_back(est.ratio);
            st.ratio_se.push_back(est.ratio_se);
        } else {
            st.ratio.push_back(st.variance[k] / st.mean[k]);
            st.ratio_se.push_back(std::numeric_limits<double>::infinity());
        }
    }
    return st;
}

RatioEstimate variance_to_mean(std::span<const double> samples)
{
    const std::size_t n = samples.size();
    if (n < 3)
        throw std::invalid_argument("variance_to_mean: need at least three samples");
    const double nd = static_cast<double>(n);
    std::vector<double> x(samples.begin(), samples.end());
    const double sum = pairwise_sum(x);
    const double mean = sum / nd;
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i)
        d2[i] = (x[i] - mean) * (x[i] - mean);
    const double ss = pairwise_sum(d2);

    RatioEstimate out;
    out.mean = mean;
    out.variance = ss / (nd - 1.0);
    out.ratio = mean > 0.0 ? out.variance / mean : std::numeric_limits<double>::quiet_NaN();

    // Leave-one-out: removing x_i shifts the mean to m' and the sum of squares to
    // ss - (x_i - m)^2 n/(n-1).
    std::vector<double> loo(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m_i = (sum - x[i]) / (nd - 1.0);
        const double ss_i = ss - d2[i] * nd / (nd - 1.0);
        loo[i] = m_i > 0.0 ? (ss_i / (nd - 2.0)) / m_i : std::numeric_limits<double>::quiet_NaN();
    }
    const double lbar = pairwise_sum(loo) / nd;
    for (double& v : loo)
        v = (v - lbar) * (v - lbar);
    out.ratio_se = std::sqrt((nd - 1.0) / nd * pairwise_sum(loo));
    return out;
}

bool CountRatioReport::poissonian(double n_sigma) const
{
    for (std::size_t k = 0; k < ratio.size(); ++k)
        if (!(std::abs(ratio[k] - 1.0) <= n_sigma * ratio_se[k]))
            return false;
    return !ratio.empty();
}

CountRatioReport binary_count_check(const CloudParams& c, const Box& box, std::span<const double> times,
                                    const EnsembleOptions& opt)
{
    validate(times, opt);
    if (opt.realizations < 3)
        throw std::invalid_argument("binary_count_check: need at least three realizations");
    const auto samples = run_ensemble(c, times, opt, BoxWeight{box});
    const std::size_t m = times.size();
    const std::size_t n = opt.realizations;

    CountRatioReport rep;
    rep.times.assign(times.begin(), times.end());
    rep.realization_count = n;
    rep.seed = opt.seed;
    std::vector<double> col(n);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < n; ++i)
            col[i] = samples[i * m + k];
        const auto est = variance_to_mean(col);
        rep.mean.push_back(est.mean);
        rep.variance.push_back(est.variance);
        rep.ratio.push_back(est.ratio);
        rep.ratio_se.push_back(est.ratio_se);
    }
    return rep;
}

} // namespace coldcloud::mc
