#pragma once

#include "config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace coldcloud::app {

struct RunOptions
{
    std::filesystem::path out_dir = ".";
    std::filesystem::path config_path;
    std::optional<std::uint64_t> seed; ///< overrides mc.seed
    unsigned threads = 0;
};

[[nodiscard]] const std::vector<std::string>& subcommands();

/// Runs one subcommand, writing <name>.csv (plus extra tables) and <name>.manifest.json
/// to opts.out_dir. Returns the process exit code: 0, or 1 when `validate` finds a
/// disagreement. Configuration problems surface as ConfigError.
int run(const std::string& subcommand, const RunConfig& cfg, const RunOptions& opts, std::ostream& log);

} // namespace coldcloud::app
