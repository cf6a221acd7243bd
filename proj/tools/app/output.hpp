#pragma once

#include "config.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace coldcloud::app {

/// %.17g: enough digits to round-trip a double.
[[nodiscard]] std::string format_number(double v);

using Cell = std::variant<double, long long, std::string>;

class CsvTable
{
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<Cell>& cells);
    [[nodiscard]] std::string str() const;
    void write(const std::filesystem::path& path) const;
    [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
};

/// tau_r, tau_g (null without gravity), tau_w, zeta and l_R of the configured cloud and beam.
[[nodiscard]] nlohmann::json derived_scales(const RunConfig& cfg);

struct Manifest
{
    std::string subcommand;
    std::filesystem::path config_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs;
    nlohmann::json extra = nlohmann::json::object();
};

void write_manifest(const std::filesystem::path& path, const RunConfig& cfg, const Manifest& m);

/// --out if given, else $COLDCLOUD_OUT_DIR, else the working directory.
[[nodiscard]] std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag);

[[nodiscard]] const char* version() noexcept;

} // namespace coldcloud::app
