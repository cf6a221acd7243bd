// coldcloud-cli: curves, spectra and Monte Carlo validation for a released cold-atom cloud.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration or usage error,
// 3 numerical or physics error, 4 I/O error.

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/output.hpp"

#include "coldcloud/errors.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

int main(int argc, char** argv)
{
    using namespace coldcloud::app;

    CLI::App cli{"Effective atom number and its fluctuations for a cold-atom cloud probed by a Gaussian beam"};
    cli.set_version_flag("--version", version());
    cli.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    cli.add_option("--config", config_path, "JSON run configuration")->required();
    cli.add_option("--out", out_dir, "output directory (default: $COLDCLOUD_OUT_DIR, then .)");
    cli.add_option("--seed", seed, "Monte Carlo master seed, overrides mc.seed");
    cli.add_option("--threads", threads, "Monte Carlo worker threads (0 = all cores)");

    const std::map<std::string, std::string> help{
        {"mean", "mean effective atom number"},
        {"sigma", "effective areal density, general quadrature and closed forms"},
        {"saturated", "saturated effective density and field shifts"},
        {"variance", "variance of the effective number"},
        {"covariance", "two-time covariance, exact and quasistationary"},
        {"spectrum", "number-noise spectrum"},
        {"detuning-spectrum", "cavity detuning-noise spectrum"},
        {"mc", "Monte Carlo ensemble statistics"},
        {"validate", "Monte Carlo against the analytic moments"},
    };
    for (const auto& name : subcommands())
        cli.add_subcommand(name, help.at(name))->fallthrough();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string sub = cli.get_subcommands().front()->get_name();
    try {
        const RunConfig cfg = load_config(config_path);
        RunOptions opts;
        opts.out_dir = resolve_out_dir(out_dir);
        opts.config_path = config_path;
        opts.seed = seed;
        opts.threads = threads;
        return run(sub, cfg, opts, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "coldcloud-cli: " << e.what() << '\n';
        return 2;
    } catch (const coldcloud::NumericalError& e) {
        std::cerr << "coldcloud-cli " << sub << ": numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "coldcloud-cli " << sub << ": " << e.what() << '\n';
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "coldcloud-cli " << sub << ": " << e.what() << '\n';
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "coldcloud-cli " << sub << ": " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "coldcloud-cli " << sub << ": " << e.what() << '\n';
        return 4;
    }
}
