// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. One subcommand per experiment.
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include "oamsteer/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#ifndef OAMSTEER_VERSION
#define OAMSTEER_VERSION "unknown"
#endif

namespace
{
    struct Flags
    {
        std::string config;
        std::string out = "out";
        std::optional<std::uint64_t> seed;
        int workers = 1;
    };

    std::string slurp(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw oam::ConfigError("cannot read config file " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"OAM link misalignment and hybrid beam steering experiments"};
    app.set_version_flag("--version", std::string(OAMSTEER_VERSION));
    app.require_subcommand(1);

    Flags flags;
    for (const std::string &name : oam::experiment_names())
    {
        CLI::App *sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", flags.config, "scenario file (key = value)");
        sub->add_option("--out", flags.out, "output directory")->capture_default_str();
        sub->add_option("--seed", flags.seed, "annealing seed, overrides sa.seed");
        sub->add_option("--workers", flags.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try
    {
        oam::ExperimentSpec spec = flags.config.empty() ? oam::parse_config("") : oam::parse_config(slurp(flags.config));
        if (!spec.name.empty() && spec.name != name)
            throw oam::ConfigError("experiment: config is for '" + spec.name + "', not '" + name + "'");
        spec.name = name;
        if (flags.seed)
            spec.sa.rng_seed = *flags.seed;
        spec.validate();

        const oam::RunResult result = oam::run(spec, {flags.out, flags.workers, OAMSTEER_VERSION});
        for (const auto &f : result.files)
            std::cout << f.string() << "\n";
        return 0;
    }
    catch (const oam::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
