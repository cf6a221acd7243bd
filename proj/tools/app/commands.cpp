#include "commands.hpp"

#include "output.hpp"

#include "coldcloud/cavity.hpp"
#include "coldcloud/fluct.hpp"
#include "coldcloud/mc_oracle.hpp"
#include "coldcloud/saturation.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>

namespace coldcloud::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Context
{
    const RunConfig& cfg;
    const RunOptions& opts;
    std::ostream& log;
    std::string name;
    Manifest manifest;

    void emit(const CsvTable& table, const std::string& file)
    {
        table.write(opts.out_dir / file);
        manifest.outputs.push_back(file);
        log << "wrote " << (opts.out_dir / file).string() << " (" << table.rows() << " rows)\n";
    }

    void finish()
    {
        manifest.subcommand = name;
        manifest.config_path = opts.config_path;
        const std::string file = name + ".manifest.json";
        write_manifest(opts.out_dir / file, cfg, manifest);
        log << "wrote " << (opts.out_dir / file).string() << "\n";
    }
};

double hertz(double omega) { return omega / (2.0 * std::numbers::pi); }

int cmd_mean(Context& ctx)
{
    const auto in = ctx.cfg.inputs();
    CsvTable table({"t_s", "mean_number", "mean_number_small_waist", "mean_number_exact_geometry"});
    for (double t : ctx.cfg.require_grid(ctx.cfg.t, "t"))
        table.add_row({t, mean_number(in, t), mean_number_small_waist(in, t),
                       weighted_number_general(in, t, 1.0, ctx.cfg.tolerances.rel_tol)});
    ctx.emit(table, "mean.csv");
    return 0;
}

int cmd_sigma(Context& ctx)
{
    const auto in = ctx.cfg.inputs();
    CsvTable table({"t_s", "sigma_general", "sigma_small_waist", "sigma_long_rayleigh", "sigma_high_temperature"});
    for (double t : ctx.cfg.require_grid(ctx.cfg.t, "t"))
        table.add_row({t, sigma_general(in, t, ctx.cfg.tolerances.rel_tol), sigma_small_waist(in, t),
                       sigma_long_rayleigh(in, t), sigma_high_temperature(in, t)});
    ctx.emit(table, "sigma.csv");
    return 0;
}

int cmd_saturated(Context& ctx)
{
    const auto in = ctx.cfg.inputs();
    const OpticalParams& opt = ctx.cfg.require_optical();
    CsvTable table({"t_s", "sigma_general", "sigma_saturated_general", "sigma_saturated_closed", "shift_linear_re",
                    "shift_linear_im", "shift_nonlinear_re", "shift_nonlinear_im"});
    const double tol = ctx.cfg.tolerances.rel_tol;
    for (double t : ctx.cfg.require_grid(ctx.cfg.t, "t")) {
        const double sigma = sigma_general(in, t, tol);
        const double sat = sigma_saturated_general(in, opt, t, tol);
        const auto lin = field_shift(in.beam, opt, sigma);
        const auto nl = field_shift(in.beam, opt, sat);
        table.add_row({t, sigma, sat, sigma_saturated_closed(in, opt, t), lin.real(), lin.imag(), nl.real(),
                       nl.imag()});
    }
    ctx.emit(table, "saturated.csv");
    return 0;
}

int cmd_variance(Context& ctx)
{
    const auto in = ctx.cfg.inputs();
    CsvTable table({"t_s", "mean_number", "variance", "variance_over_mean", "variance_exact_geometry"});
    for (double t : ctx.cfg.require_grid(ctx.cfg.t, "t")) {
        const double m = mean_number(in, t), v = variance(in, t);
        table.add_row({t, m, v, v / m, weighted_number_general(in, t, 2.0, ctx.cfg.tolerances.rel_tol)});
    }
    ctx.emit(table, "variance.csv");
    return 0;
}

int cmd_covariance(Context& ctx)
{
    const auto in = ctx.cfg.inputs();
    const double tau_w = time_scales(in.cloud, in.beam).tau_w0();
    CsvTable table({"T_s", "tau_s", "covariance_exact", "covariance_quasistationary", "covariance_series",
                    "series_terms", "relative_gap"});
    long long skipped = 0;
    for (double T : ctx.cfg.require_grid(ctx.cfg.T, "T")) {
        const auto p = scaled_fluct_params(in, T);
        for (double tau : ctx.cfg.require_grid(ctx.cfg.tau, "tau")) {
            if (std::abs(tau) > 2.0 * T) {
                ++skipped; // one of the two times would precede the release
                continue;
            }
            const double exact = covariance_exact(in, T, tau);
            const double qs = covariance_quasistationary(p, tau_w, tau);
            const auto series = covariance_series(p, tau_w, tau);
            const double gap = exact > 0.0 ? (qs - exact) / exact : std::nan("");
            table.add_row({T, tau, exact, qs, series.value, static_cast<long long>(series.terms), gap});
        }
    }
    ctx.manifest.extra["skipped_negative_time_pairs"] = skipped;
    ctx.emit(table, "covariance.csv");
    return 0;
}

int cmd_spectrum(Context& ctx)
{
    const auto in = ctx.cfg.inputs();
    const double tau_w = time_scales(in.cloud, in.beam).tau_w0();
    CsvTable table({"T_s", "omega_rad_s", "frequency_hz", "spectrum_series", "spectrum_exponential",
                    "normalized_spectrum", "series_terms"});
    for (double T : ctx.cfg.require_grid(ctx.cfg.T, "T")) {
        const auto p = scaled_fluct_params(in, T);
        for (double w : ctx.cfg.require_grid(ctx.cfg.omega, "omega")) {
            const auto s = spectrum_series(p, tau_w, w);
            table.add_row({T, w, hertz(w), s.value, spectrum_exponential(p, tau_w, w),
                           normalized_spectrum(p, tau_w, w).value, static_cast<long long>(s.terms)});
        }
    }
    ctx.emit(table, "spectrum.csv");
    return 0;
}

int cmd_detuning_spectrum(Context& ctx)
{
    const auto in = ctx.cfg.inputs();
    const OpticalParams& opt = ctx.cfg.require_optical();
    const CavityParams& cav = ctx.cfg.require_cavity();
    CsvTable table({"T_s", "omega_rad_s", "frequency_hz", "s_phiphi", "s_phiphi_via_cooperativity",
                    "cooperativity_T", "dispersive", "linear_regime"});
    json peaks = json::array();
    for (double T : ctx.cfg.require_grid(ctx.cfg.T, "T")) {
        const auto regime = detuning_linear_regime(cav, in.beam, opt, in, T);
        const double coop = cooperativity(cav, in.beam, mean_number_small_waist(in, T));
        peaks.push_back({{"T_s", T}, {"peak", regime.peak}, {"kappa", regime.kappa}, {"linear", regime.linear}});
        for (double w : ctx.cfg.require_grid(ctx.cfg.omega, "omega")) {
            const auto s = detuning_spectrum(cav, in.beam, opt, in, T, w);
            table.add_row({T, w, hertz(w), s.from_number_spectrum, s.from_cooperativity, coop,
                           static_cast<long long>(s.dispersive), static_cast<long long>(regime.linear)});
        }
    }
    if (std::abs(opt.delta) < kDispersiveDetuning)
        ctx.log << "warning: |delta| < " << kDispersiveDetuning << ", outside the dispersive regime\n";
    ctx.manifest.extra["linear_regime"] = peaks;
    ctx.emit(table, "detuning-spectrum.csv");
    return 0;
}

struct McSetup
{
    CloudParams cloud;
    std::vector<double> times;
    mc::EnsembleOptions options;
};

McSetup mc_setup(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    McSetup s{cfg.cloud().with_n_total(cfg.mc.n_total.value_or(cfg.n_total)),
              cfg.mc.times.empty() ? cfg.require_grid(cfg.t, "t") : cfg.mc.times, {}};
    s.options.realizations = cfg.mc.realizations;
    s.options.seed = ctx.opts.seed.value_or(cfg.mc.seed);
    s.options.threads = ctx.opts.threads;
    ctx.manifest.seed = s.options.seed;
    ctx.manifest.extra["mc"] = {{"n_total", s.cloud.n_total()},
                                {"realizations", s.options.realizations},
                                {"times_s", s.times}};
    return s;
}

void emit_covariance(Context& ctx, const mc::EnsembleStats& st, const std::string& file)
{
    CsvTable cov({"t1_s", "t2_s", "covariance", "covariance_se"});
    for (std::size_t i = 0; i < st.times.size(); ++i)
        for (std::size_t j = 0; j < st.times.size(); ++j)
            cov.add_row({st.times[i], st.times[j], st.cov(i, j), st.cov_se(i, j)});
    ctx.emit(cov, file);
}

int cmd_mc(Context& ctx)
{
    const McSetup s = mc_setup(ctx);
    const auto st = mc::ensemble_stats(s.cloud, ctx.cfg.beam(), s.times, s.options);
    CsvTable table({"t_s", "mean", "mean_se", "variance", "variance_se", "variance_over_mean",
                    "variance_over_mean_se"});
    for (std::size_t k = 0; k < st.times.size(); ++k)
        table.add_row({st.times[k], st.mean[k], st.mean_se[k], st.variance[k], st.variance_se[k], st.ratio[k],
                       st.ratio_se[k]});
    ctx.emit(table, "mc.csv");
    emit_covariance(ctx, st, "mc_covariance.csv");
    return 0;
}

int cmd_validate(Context& ctx)
{
    const McSetup s = mc_setup(ctx);
    const EffNumInputs in{s.cloud, ctx.cfg.beam()};
    const double tol = ctx.cfg.tolerances.rel_tol;
    const double limit = ctx.cfg.tolerances.mc_sigma;
    const auto st = mc::ensemble_stats(s.cloud, in.beam, s.times, s.options);

    // Fixed box of half-width sigma_r around the release point.
    const double h = s.cloud.sigma_r();
    const mc::Box box{{-h, -h, -h}, {h, h, h}};
    mc::EnsembleOptions box_opts = s.options;
    box_opts.seed = mc::mix64(s.options.seed ^ 0xb0bULL);
    const auto poisson = mc::binary_count_check(s.cloud, box, s.times, box_opts);

    CsvTable table({"check", "t1_s", "t2_s", "analytic", "monte_carlo", "standard_error", "z", "pass"});
    json checks = json::array();
    int failures = 0;
    auto check = [&](const std::string& name, double t1, double t2, double analytic, double mc_value, double se) {
        const double z = se > 0.0 ? (mc_value - analytic) / se : std::nan("");
        const bool pass = std::abs(z) <= limit;
        failures += pass ? 0 : 1;
        table.add_row({name, t1, t2, analytic, mc_value, se, z, std::string(pass ? "pass" : "FAIL")});
        checks.push_back({{"check", name}, {"t1_s", t1}, {"t2_s", t2}, {"z", z}, {"pass", pass}});
    };

    for (std::size_t i = 0; i < st.times.size(); ++i) {
        const double t = st.times[i];
        check("mean_closed_form", t, t, mean_number(in, t), st.mean[i], st.mean_se[i]);
        check("mean_exact_geometry", t, t, weighted_number_general(in, t, 1.0, tol), st.mean[i], st.mean_se[i]);
        check("variance_closed_form", t, t, variance(in, t), st.variance[i], st.variance_se[i]);
        check("variance_exact_geometry", t, t, weighted_number_general(in, t, 2.0, tol), st.variance[i],
              st.variance_se[i]);
        for (std::size_t j = i + 1; j < st.times.size(); ++j)
            check("covariance_closed_form", t, st.times[j], covariance_at(in, t, st.times[j]), st.cov(i, j),
                  st.cov_se(i, j));
        check("indicator_variance_over_mean", t, t, 1.0, poisson.ratio[i], poisson.ratio_se[i]);
    }

    ctx.emit(table, "validate.csv");
    emit_covariance(ctx, st, "validate_mc_covariance.csv");
    const bool all_pass = failures == 0;
    json report{{"all_pass", all_pass},
                {"tolerance_standard_errors", limit},
                {"failures", failures},
                {"checks", checks}};
    {
        std::ofstream f(ctx.opts.out_dir / "validate_report.json", std::ios::binary);
        f << report.dump(2) << '\n';
    }
    ctx.manifest.outputs.push_back("validate_report.json");
    ctx.manifest.extra["all_pass"] = all_pass;
    ctx.log << (all_pass ? "validate: all " : "validate: ") << (all_pass ? std::to_string(checks.size()) + " checks pass"
                                                                         : std::to_string(failures) + " of " +
                                                                               std::to_string(checks.size()) +
                                                                               " checks FAIL")
            << " (|z| <= " << limit << ")\n";
    return all_pass ? 0 : 1;
}

using Command = int (*)(Context&);

const std::map<std::string, Command>& table()
{
    static const std::map<std::string, Command> commands{
        {"mean", cmd_mean},         {"sigma", cmd_sigma},
        {"saturated", cmd_saturated}, {"variance", cmd_variance},
        {"covariance", cmd_covariance}, {"spectrum", cmd_spectrum},
        {"detuning-spectrum", cmd_detuning_spectrum}, {"mc", cmd_mc},
        {"validate", cmd_validate},
    };
    return commands;
}

} // namespace

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names{"mean",     "sigma",    "saturated",         "variance",
                                                "covariance", "spectrum", "detuning-spectrum", "mc",
                                                "validate"};
    return names;
}

int run(const std::string& subcommand, const RunConfig& cfg, const RunOptions& opts, std::ostream& log)
{
    const auto it = table().find(subcommand);
    if (it == table().end())
        throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
    fs::create_directories(opts.out_dir);
    Context ctx{cfg, opts, log, subcommand, {}};
    const int code = it->second(ctx);
    ctx.finish();
    return code;
}

} // namespace coldcloud::app
