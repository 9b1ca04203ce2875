// sampnum: command-line harness for the sampling-recovery experiments.
//
//   sampnum claims        [--config FILE] [--seed N] [--out FILE] [--no-threshold]
//   sampnum rates         [--config FILE] [--seed N] [--out FILE]
//   sampnum beta          [--config FILE] [--out FILE]
//   sampnum density-check [--config FILE] [--out FILE]
//
// Exit codes: 0 success, 1 an invariant check failed, 2 usage error.

#include "sampnum/errors.hpp"
#include "sampnum/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "flat key = value config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed, "master seed (overrides the config)");
    cmd->add_option("--out", opts.out, "CSV output path (overrides the config)");
}

sampnum::ExperimentConfig resolve(sampnum::Experiment which, const CommonOptions& opts) {
    auto cfg = opts.config_path.empty() ? sampnum::default_config(which)
                                        : sampnum::load_config(opts.config_path);
    if (cfg.n_grid.empty()) cfg.n_grid = sampnum::default_config(which).n_grid;
    if (opts.seed) cfg.seed = *opts.seed;
    if (!opts.out.empty()) cfg.out = opts.out;
    sampnum::validate(cfg, which);
    return cfg;
}

template <class Report>
void emit(const Report& report) {
    sampnum::print_summary(std::cout, report);
    std::ostringstream csv;
    sampnum::write_csv(csv, report);
    if (report.config.out.empty()) {
        std::cout << '\n' << csv.str();
        return;
    }
    std::ofstream file(report.config.out, std::ios::binary);
    if (!file) throw sampnum::ArgumentError("cannot write '" + report.config.out + "'");
    file << csv.str();
    std::cout << "wrote " << report.config.out << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted least-squares sampling recovery experiments"};
    app.require_subcommand(1);

    CommonOptions claims_opts, rates_opts, beta_opts, density_opts;
    bool no_threshold = false;

    auto* claims = app.add_subcommand("claims", "concentration of s_min(G) and s_max(Gamma)");
    add_common(claims, claims_opts);
    claims->add_flag("--no-threshold", no_threshold, "skip the head-constant threshold search");

    auto* rates = app.add_subcommand("rates", "worst-case error rates and certified bounds");
    add_common(rates, rates_opts);

    auto* beta = app.add_subcommand("beta", "tail statistic beta_k against a_k");
    add_common(beta, beta_opts);

    auto* density = app.add_subcommand("density-check", "normalization of the sampling density");
    add_common(density, density_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        using sampnum::Experiment;
        if (*claims)
            emit(sampnum::run_claims(resolve(Experiment::claims, claims_opts), !no_threshold));
        else if (*rates)
            emit(sampnum::run_rates(resolve(Experiment::rates, rates_opts)));
        else if (*beta)
            emit(sampnum::run_beta_lemma(resolve(Experiment::beta, beta_opts)));
        else if (*density) {
            const auto report = sampnum::run_density_check(resolve(Experiment::density_check, density_opts));
            emit(report);
            if (!report.passed) {
                std::cerr << "check failed: density does not integrate to 1\n";
                return kExitCheckFailure;
            }
        }
    } catch (const sampnum::ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const sampnum::CheckFailure& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return kExitCheckFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailure;
    }
    return 0;
}
