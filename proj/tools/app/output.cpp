#include "output.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>

#ifndef COLDCLOUD_VERSION
#define COLDCLOUD_VERSION "0.0.0"
#endif

namespace coldcloud::app {

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvTable::add_row(const std::vector<Cell>& cells)
{
    if (cells.size() != header_.size())
        throw std::logic_error("CsvTable: row width does not match the header");
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            line += ',';
        std::visit(
            [&](const auto& v) {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, double>)
                    line += format_number(v);
                else if constexpr (std::is_same_v<V, long long>)
                    line += std::to_string(v);
                else
                    line += v;
            },
            cells[i]);
    }
    rows_.push_back(std::move(line));
}

std::string CsvTable::str() const
{
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i)
            out += ',';
        out += header_[i];
    }
    out += '\n';
    for (const auto& r : rows_) {
        out += r;
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    f << str();
}

nlohmann::json derived_scales(const RunConfig& cfg)
{
    const TimeScales ts = time_scales(cfg.cloud(), cfg.beam());
    nlohmann::json d;
    d["tau_r_s"] = ts.tau_r;
    d["tau_g_s"] = ts.tau_g ? nlohmann::json(*ts.tau_g) : nlohmann::json(nullptr);
    d["tau_w_s"] = ts.tau_w0();
    d["zeta"] = ts.zeta();
    d["rayleigh_length_m"] = ts.rayleigh_length;
    d["sigma_v_m_per_s"] = ts.sigma_v;
    return d;
}

void write_manifest(const std::filesystem::path& path, const RunConfig& cfg, const Manifest& m)
{
    nlohmann::json j;
    j["subcommand"] = m.subcommand;
    j["version"] = version();
    j["config_path"] = m.config_path.string();
    j["inputs"] = cfg.raw;
    j["derived"] = derived_scales(cfg);
    j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
    j["outputs"] = m.outputs;
    for (const auto& [k, v] : m.extra.items())
        j[k] = v;
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag)
{
    if (flag && !flag->empty())
        return *flag;
    if (const char* env = std::getenv("COLDCLOUD_OUT_DIR"); env && *env)
        return env;
    return ".";
}

const char* version() noexcept { return COLDCLOUD_VERSION; }

} // namespace coldcloud::app
