#include "config.hpp"

#include <cmath>
#include <fstream>

namespace coldcloud::app {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key)
{
    return parent.empty() ? key : parent + "." + key;
}

const json* find(const json& obj, const std::string& key)
{
    const auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const json& section(const json& doc, const std::string& key)
{
    const json* node = find(doc, key);
    if (!node)
        throw ConfigError(key, "missing section");
    if (!node->is_object())
        throw ConfigError(key, "must be an object");
    return *node;
}

double as_number(const json& node, const std::string& field)
{
    if (!node.is_number())
        throw ConfigError(field, "must be a number");
    const double v = node.get<double>();
    if (!std::isfinite(v))
        throw ConfigError(field, "must be finite");
    return v;
}

std::optional<double> optional_number(const json& obj, const std::string& key, const std::string& parent)
{
    const json* node = find(obj, key);
    if (!node)
        return std::nullopt;
    return as_number(*node, join(parent, key));
}

double required_number(const json& obj, const std::string& key, const std::string& parent)
{
    const auto v = optional_number(obj, key, parent);
    if (!v)
        throw ConfigError(join(parent, key), "missing field");
    return *v;
}

void require_positive(double v, const std::string& field)
{
    if (!(v > 0.0))
        throw ConfigError(field, "must be > 0");
}

void require_nonnegative(double v, const std::string& field)
{
    if (!(v >= 0.0))
        throw ConfigError(field, "must be >= 0");
}

std::vector<double> times_grid(const json& obj, const std::string& key, const std::string& parent)
{
    const json* node = find(obj, key);
    if (!node)
        return {};
    const std::string field = join(parent, key);
    auto grid = parse_grid(*node, field);
    for (double t : grid)
        if (t < 0.0)
            throw ConfigError(field, "times must be >= 0");
    return grid;
}

} // namespace

std::vector<double> parse_grid(const json& node, const std::string& field)
{
    std::vector<double> out;
    if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i)
            out.push_back(as_number(node[i], field + "[" + std::to_string(i) + "]"));
        if (out.empty())
            throw ConfigError(field, "grid is empty");
        return out;
    }
    if (!node.is_object())
        throw ConfigError(field, "must be an array of numbers or a {start, stop, count} object");
    const double start = required_number(node, "start", field);
    const double stop = required_number(node, "stop", field);
    const json* count_node = find(node, "count");
    if (!count_node)
        throw ConfigError(field + ".count", "missing field");
    if (!count_node->is_number_integer() || count_node->get<long long>() < 1)
        throw ConfigError(field + ".count", "must be a positive integer");
    const auto count = count_node->get<std::size_t>();
    std::string spacing = "linear";
    if (const json* s = find(node, "spacing")) {
        if (!s->is_string())
            throw ConfigError(field + ".spacing", "must be \"linear\" or \"log\"");
        spacing = s->get<std::string>();
    }
    if (spacing == "linear") {
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1.0));
    } else if (spacing == "log") {
        if (!(start > 0.0) || !(stop > 0.0))
            throw ConfigError(field, "log spacing needs start > 0 and stop > 0");
        const double a = std::log(start), b = std::log(stop);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(count == 1 ? start : std::exp(a + (b - a) * static_cast<double>(i) / (count - 1.0)));
    } else {
        throw ConfigError(field + ".spacing", "must be \"linear\" or \"log\"");
    }
    if (count > 1)
        out.back() = stop;
    return out;
}

RunConfig parse_config(const json& doc)
{
    if (!doc.is_object())
        throw ConfigError("<root>", "configuration must be a JSON object");
    RunConfig cfg;
    cfg.raw = doc;

    const json& cloud = section(doc, "cloud");
    cfg.n_total = required_number(cloud, "n_total", "cloud");
    require_nonnegative(cfg.n_total, "cloud.n_total");
    cfg.sigma_r = required_number(cloud, "sigma_r", "cloud");
    require_positive(cfg.sigma_r, "cloud.sigma_r");
    cfg.g = required_number(cloud, "g", "cloud");
    require_nonnegative(cfg.g, "cloud.g");

    const auto sigma_v = optional_number(cloud, "sigma_v", "cloud");
    const auto temperature = optional_number(cloud, "temperature", "cloud");
    const auto mass = optional_number(cloud, "mass", "cloud");
    if (sigma_v && (temperature || mass))
        throw ConfigError("cloud.sigma_v", "give either sigma_v or temperature and mass, not both");
    if (sigma_v) {
        require_positive(*sigma_v, "cloud.sigma_v");
        cfg.sigma_v = *sigma_v;
    } else {
        if (!temperature && !mass)
            throw ConfigError("cloud.sigma_v", "missing field (or give temperature and mass)");
        if (!temperature)
            throw ConfigError("cloud.temperature", "missing field (mass is given)");
        if (!mass)
            throw ConfigError("cloud.mass", "missing field (temperature is given)");
        require_positive(*temperature, "cloud.temperature");
        require_positive(*mass, "cloud.mass");
        cfg.sigma_v = CloudParams::from_temperature(cfg.n_total, cfg.sigma_r, *temperature, *mass, cfg.g).sigma_v();
    }

    const json& beam = section(doc, "beam");
    cfg.w0 = required_number(beam, "w0", "beam");
    require_positive(cfg.w0, "beam.w0");
    cfg.lambda = required_number(beam, "lambda", "beam");
    require_positive(cfg.lambda, "beam.lambda");

    if (find(doc, "optical")) {
        const json& opt = section(doc, "optical");
        OpticalParams o;
        o.delta = optional_number(opt, "delta", "optical").value_or(0.0);
        o.s_m0 = optional_number(opt, "s_m0", "optical").value_or(0.0);
        require_nonnegative(o.s_m0, "optical.s_m0");
        cfg.optical = o;
    }

    if (find(doc, "cavity")) {
        const json& cav = section(doc, "cavity");
        const double kappa = required_number(cav, "kappa", "cavity");
        const double tau_c = required_number(cav, "tau_c", "cavity");
        require_positive(kappa, "cavity.kappa");
        require_positive(tau_c, "cavity.tau_c");
        if (2.0 * kappa * tau_c > 1.0)
            throw ConfigError("cavity", "2 kappa tau_c must not exceed 1");
        cfg.cavity = CavityParams(kappa, tau_c);
    }

    if (find(doc, "grids")) {
        const json& grids = section(doc, "grids");
        cfg.t = times_grid(grids, "t", "grids");
        cfg.T = times_grid(grids, "T", "grids");
        if (const json* tau = find(grids, "tau"))
            cfg.tau = parse_grid(*tau, "grids.tau");
        if (const json* omega = find(grids, "omega"))
            cfg.omega = parse_grid(*omega, "grids.omega");
    }

    if (find(doc, "mc")) {
        const json& mc = section(doc, "mc");
        if (auto n = optional_number(mc, "n_total", "mc")) {
            require_nonnegative(*n, "mc.n_total");
            cfg.mc.n_total = n;
        }
        if (const json* r = find(mc, "realizations")) {
            if (!r->is_number() || r->get<double>() < 2.0 || r->get<double>() != std::floor(r->get<double>()))
                throw ConfigError("mc.realizations", "must be an integer >= 2");
            cfg.mc.realizations = static_cast<std::size_t>(r->get<double>());
        }
        if (const json* s = find(mc, "seed")) {
            if (!s->is_number_unsigned())
                throw ConfigError("mc.seed", "must be a non-negative integer");
            cfg.mc.seed = s->get<std::uint64_t>();
        }
        cfg.mc.times = times_grid(mc, "times", "mc");
    }

    if (find(doc, "tolerances")) {
        const json& tol = section(doc, "tolerances");
        if (auto v = optional_number(tol, "rel_tol", "tolerances")) {
            require_positive(*v, "tolerances.rel_tol");
            cfg.tolerances.rel_tol = *v;
        }
        if (auto v = optional_number(tol, "mc_sigma", "tolerances")) {
            require_positive(*v, "tolerances.mc_sigma");
            cfg.tolerances.mc_sigma = *v;
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("--config", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

const std::vector<double>& RunConfig::require_grid(const std::vector<double>& grid, const char* name) const
{
    if (grid.empty())
        throw ConfigError(std::string("grids.") + name, "missing field (needed by this subcommand)");
    return grid;
}

const OpticalParams& RunConfig::require_optical() const
{
    if (!optical)
        throw ConfigError("optical", "missing section (needed by this subcommand)");
    return *optical;
}

const CavityParams& RunConfig::require_cavity() const
{
    if (!cavity)
        throw ConfigError("cavity", "missing section (needed by this subcommand)");
    return *cavity;
}

} // namespace coldcloud::app
