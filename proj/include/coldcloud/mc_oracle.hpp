#pragma once

// Monte Carlo ground truth for the weighted atom number. Each realization draws a
// Poisson(N) number of atoms with i.i.d. Gaussian positions and velocities, moves
// them ballistically under gravity and sums a detection weight over them.
//
// Realization i uses the seed substream_seed(master, i), so results do not depend
// on the number of worker threads or the order in which realizations run.

#include "coldcloud/beam.hpp"
#include "coldcloud/cloud.hpp"
#include "coldcloud/vec3.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace coldcloud::mc {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
[[nodiscard]] std::uint64_t mix64(std::uint64_t z) noexcept;

/// i-th SplitMix64 output for the master seed: mix64(master + (i + 1) * 0x9e3779b97f4a7c15).
[[nodiscard]] std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Poisson deviate. Inversion below a mean of 30, Hormann's PTRS transformed
/// rejection up to 1e6, and a continuity-corrected normal approximation above.
[[nodiscard]] std::uint64_t sample_poisson(double mean, Engine& rng);

struct Realization
{
    std::vector<Vec3> positions;
    std::vector<Vec3> velocities;

    [[nodiscard]] std::size_t count() const noexcept { return positions.size(); }
};

/// Deterministic in (c, seed).
[[nodiscard]] Realization sample_cloud(const CloudParams& c, std::uint64_t seed);

/// r0 + v0 t - (0, 0, g t^2 / 2)
[[nodiscard]] Vec3 propagate(const Vec3& r0, const Vec3& v0, double g, double t);

/// N(t) = sum_i f(r_i(t)) with the diffracting beam weight.
[[nodiscard]] double effective_count(const BeamParams& b, const Realization& real, double g, double t);

struct EnsembleOptions
{
    std::size_t realizations = 10000;
    std::uint64_t seed = 0x5eed'c01d'c10dULL;
    unsigned threads = 0; ///< 0 picks std::thread::hardware_concurrency()
};

struct EnsembleStats
{
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> mean_se;
    std::vector<double> variance;
    std::vector<double> variance_se;
    std::vector<double> covariance;    ///< row-major, times.size()^2
    std::vector<double> covariance_se; ///< jackknife
    std::vector<double> ratio;         ///< variance / mean
    std::vector<double> ratio_se;      ///< jackknife
    std::size_t realization_count = 0;
    std::uint64_t seed = 0;

    [[nodiscard]] double cov(std::size_t i, std::size_t j) const { return covariance[i * times.size() + j]; }
    [[nodiscard]] double cov_se(std::size_t i, std::size_t j) const
    {
        return covariance_se[i * times.size() + j];
    }
};

/// Sample statistics of the Gaussian-weighted count at each time and time pair.
/// Requires realizations >= 2; standard errors of second moments need >= 3.
[[nodiscard]] EnsembleStats ensemble_stats(const CloudParams& c, const BeamParams& b,
                                           std::span<const double> times, const EnsembleOptions& opt = {});

struct Box
{
    Vec3 lo{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
    Vec3 hi{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};

    [[nodiscard]] bool contains(const Vec3& r) const noexcept
    {
        return r.x >= lo.x && r.x < hi.x && r.y >= lo.y && r.y < hi.y && r.z >= lo.z && r.z < hi.z;
    }
};

struct CountRatioReport
{
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> ratio;    ///< variance / mean
    std::vector<double> ratio_se; ///< jackknife
    std::size_t realization_count = 0;
    std::uint64_t seed = 0;

    /// |ratio - 1| <= n_sigma * ratio_se at every time.
    [[nodiscard]] bool poissonian(double n_sigma = 3.0) const;
};

/// Counts atoms inside a hard-edged box (weight 0 or 1); such counts are Poissonian.
[[nodiscard]] CountRatioReport binary_count_check(const CloudParams& c, const Box& box,
                                                  std::span<const double> times,
                                                  const EnsembleOptions& opt = {});

/// Jackknife standard error of variance / mean for one column of samples.
struct RatioEstimate
{
    double mean = 0.0;
    double variance = 0.0;
    double ratio = 0.0;
    double ratio_se = 0.0;
};
[[nodiscard]] RatioEstimate variance_to_mean(std::span<const double> samples);

} // namespace coldcloud::mc
