#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fenelab/runner.hpp"

using namespace fenelab;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    int workers = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool out_set = false;
};

void add_common(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--config", opt.config_path, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory (overrides [output] dir)")
        ->each([&opt](const std::string&) { opt.out_set = true; });
    sub->add_option("--workers", opt.workers, "worker threads (default 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "seed override for the [initial] section")
        ->each([&opt](const std::string&) { opt.seed_set = true; });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fenelab: numerical laboratory for the compressible co-rotation FENE "
                 "dumbbell model near equilibrium"};
    app.require_subcommand(1);

    CliOptions opt;
    struct ModeSub {
        const char* name;
        const char* help;
        harness::RunMode mode;
    };
    const ModeSub subs[] = {
        {"simulate", "coupled flow/configuration run on the periodic box",
         harness::RunMode::Simulate},
        {"picard", "lagged-coefficient iteration for the local solution",
         harness::RunMode::Picard},
        {"linear-decay", "whole-space linearized decay by frequency quadrature",
         harness::RunMode::LinearDecay},
        {"spectrum", "per-frequency eigenstructure survey", harness::RunMode::Spectrum},
        {"inequalities", "randomized verification of the stress/Poincare inequalities",
         harness::RunMode::Inequalities},
    };
    for (const auto& s : subs) add_common(app.add_subcommand(s.name, s.help), opt);

    CLI11_PARSE(app, argc, argv);

    harness::RunMode mode = harness::RunMode::Simulate;
    for (const auto& s : subs)
        if (app.get_subcommand(s.name)->parsed()) mode = s.mode;

    try {
        std::ifstream in(opt.config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        harness::RunConfig cfg = harness::parse_config(buf.str());
        cfg.mode = mode;
        cfg.workers = opt.workers;
        if (opt.out_set) cfg.out_dir = opt.out_dir;
        if (opt.seed_set) cfg.seed = opt.seed;
        const int rc = harness::run(cfg);
        if (rc == 0)
            std::cout << "all checks passed; outputs in " << cfg.out_dir << std::endl;
        else
            std::cout << "some checks failed; see " << cfg.out_dir << "/report.txt"
                      << std::endl;
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
