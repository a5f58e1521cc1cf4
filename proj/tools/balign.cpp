// SPDX-License-Identifier: Apache-2.0
//
// balign: IRS-assisted beam alignment simulator for mmWave ISAC links
// Copyright (C) 2026 The balign authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// balign command-line front end: run | crlb | codebook

#include "balign/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    using namespace balign;

    CLI::App app{"IRS-assisted beam alignment simulator"};
    app.require_subcommand(1);

    std::string config_path;
    cli::Overrides ov;
    std::uint64_t seed = 0;
    std::string out_dir;
    app.add_option("--config", config_path, "JSON run configuration (defaults when omitted)");
    auto *seed_opt = app.add_option("--seed", seed, "master seed override");
    auto *out_opt = app.add_option("--out", out_dir, "output directory override");
    app.add_flag("--full-scale", ov.full_scale, "full-size radio: M = 2048, 400 x 20 x 20 grid");
    app.add_option("--set", ov.assignments, "override one key, e.g. --set system.slots=16")->take_all();

    auto *run = app.add_subcommand("run", "Monte Carlo sweeps -> CSV")->fallthrough();
    auto *crlb = app.add_subcommand("crlb", "UE angle bounds vs SNR and slots -> CSV")->fallthrough();
    auto *codebook = app.add_subcommand("codebook", "design and export flat-top codebooks")->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::exit_config;
    }

    if (*seed_opt)
        ov.seed = seed;
    if (*out_opt)
        ov.output_dir = out_dir;

    try
    {
        const auto cfg = cli::load_run_config(config_path, ov);
        if (run->parsed())
            return cli::cmd_run(cfg, std::cout);
        if (crlb->parsed())
            return cli::cmd_crlb(cfg, std::cout);
        if (codebook->parsed())
            return cli::cmd_codebook(cfg, std::cout);
    }
    catch (const cli::config_failure &e)
    {
        std::cerr << e.diag.render() << "\n";
        return cli::exit_config;
    }
    catch (const config_error &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_config;
    }
    catch (const io::numerical_error &e)
    {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return cli::exit_numerical;
    }
    catch (const std::domain_error &e)
    {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return cli::exit_numerical;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
