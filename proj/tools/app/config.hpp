#pragma once

// Run configuration for the command-line tool: a JSON file in SI units.

#include "coldcloud/cavity.hpp"
#include "coldcloud/effnum.hpp"
#include "coldcloud/optical.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coldcloud::app {

/// A malformed or inconsistent configuration, tagged with the offending field.
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error("config error in '" + field + "': " + message), field_(std::move(field))
    {
    }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct MonteCarloConfig
{
    std::optional<double> n_total; ///< overrides cloud.n_total for the ensemble
    std::size_t realizations = 10000;
    std::uint64_t seed = 1;
    std::vector<double> times; ///< empty: use grids.t
};

struct Tolerances
{
    double rel_tol = 1e-9;       ///< quadrature
    double mc_sigma = 3.0;       ///< allowed |analytic - MC| in standard errors
};

struct RunConfig
{
    nlohmann::json raw;

    double n_total = 0.0;
    double sigma_r = 0.0;
    double sigma_v = 0.0; ///< given directly or from temperature and mass
    double g = 0.0;
    double w0 = 0.0;
    double lambda = 0.0;
    std::optional<OpticalParams> optical;
    std::optional<CavityParams> cavity;

    std::vector<double> t;
    std::vector<double> T;
    std::vector<double> tau;
    std::vector<double> omega;

    MonteCarloConfig mc;
    Tolerances tolerances;

    [[nodiscard]] CloudParams cloud() const { return {n_total, sigma_r, sigma_v, g}; }
    [[nodiscard]] BeamParams beam() const { return {w0, lambda}; }
    [[nodiscard]] EffNumInputs inputs() const { return {cloud(), beam()}; }

    // Accessors that raise ConfigError when a section needed by a subcommand is absent.
    [[nodiscard]] const std::vector<double>& require_grid(const std::vector<double>& grid,
                                                          const char* name) const;
    [[nodiscard]] const OpticalParams& require_optical() const;
    [[nodiscard]] const CavityParams& require_cavity() const;
};

/// Grids are either explicit arrays or {"start", "stop", "count", "spacing": "linear" | "log"}.
[[nodiscard]] std::vector<double> parse_grid(const nlohmann::json& node, const std::string& field);

[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

} // namespace coldcloud::app
