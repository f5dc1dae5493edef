// Batch experiment driver for the stable-limit laboratory.
//
// Subcommands:
//   validate    tabulate the tail-decay conditions and fit q0
//   converge    run the scheme across n and fit the empirical rate
//   audit       run the axiom / regularity / comparison / mollifier suites
//   rate-table  print the closed-form rate exponents over a parameter grid
//
// Exit codes: 0 pass, 1 usage error, 2 numerical failure, 3 audit failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "stablelab/experiment.hpp"

using namespace stablelab;

int main(int argc, char** argv) {
    CLI::App app{"stablelab: discrete-scheme laboratory for robust alpha-stable limits"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    unsigned long seed = 0;
    bool seed_set = false;
    int threads = 0;
    bool negative_control = false;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed for perturbation audits")->each([&](const std::string&) {
            seed_set = true;
        });
        sub->add_option("--threads", threads, "worker threads across n-levels");
    };

    CLI::App* validate = app.add_subcommand("validate", "condition tables and fitted q0");
    add_common(validate, true);
    CLI::App* converge = app.add_subcommand("converge", "convergence study and rate fit");
    add_common(converge, true);
    CLI::App* audit = app.add_subcommand("audit", "axiom/regularity/comparison audits");
    add_common(audit, true);
    audit->add_flag("--negative-control", negative_control,
                    "enable the deliberately non-monotone interpolation hook");
    CLI::App* table = app.add_subcommand("rate-table", "closed-form rate exponents");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (table->parsed()) return cmd_rate_table(std::cout);

        ExperimentConfig cfg = load_config_file(config_path);
        if (seed_set) cfg.seed = seed;
        if (threads > 0) cfg.threads = threads;
        if (negative_control) cfg.negative_control = true;
        std::filesystem::create_directories(out_dir);

        if (validate->parsed()) return cmd_validate(cfg, out_dir);
        if (converge->parsed()) return cmd_converge(cfg, out_dir);
        if (audit->parsed()) return cmd_audit(cfg, out_dir);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const ConstructionError& e) {
        std::cerr << "usage error (" << e.constraint << "): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
