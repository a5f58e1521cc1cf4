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

#ifndef BALIGN_CLI_HPP
#define BALIGN_CLI_HPP

#include "crlb.hpp"
#include "io.hpp"

#include <filesystem>
#include <iomanip>
#include <ostream>

namespace balign::cli
{
    enum ExitCode : int
    {
        exit_ok = 0,
        exit_config = 2,
        exit_numerical = 3
    };

    struct Overrides
    {
        std::optional<std::uint64_t> seed;
        std::optional<std::string> output_dir;
        bool full_scale = false;
        std::vector<std::string> assignments; // key.path=value
    };

    // Config problem rendered with its source location
    struct Diagnostic
    {
        std::string file;
        std::size_t line = 0; // 0: no location
        std::string message;

        std::string render() const
        {
            std::string s = file;
            if (line > 0)
                s += ":" + std::to_string(line);
            return s + ": error: " + message;
        }
    };

    class config_failure : public std::runtime_error
    {
    public:
        explicit config_failure(Diagnostic d) : std::runtime_error(d.render()), diag(std::move(d)) {}
        Diagnostic diag;
    };

    // Delays beyond the cyclic prefix break the OFDM model, so SNR points are checked up front
    inline void check_snr_range(const SystemConfig &sys, const std::vector<double> &snr_db, const std::string &path)
    {
        if (!(sys.noise_power_w > 0.0))
            throw io::field_error("system.noise_power_w", "must be positive for SNR-driven experiments");
        const auto budget = channel::LinkBudget::from(sys);
        const auto timing = signal::TimingConstants::from(sys);
        for (double s : snr_db)
        {
            const double d = channel::distance_for_snr(s, budget);
            if (!timing.cp_valid(2.0 * d / speed_of_light))
                throw io::field_error(path, "SNR " + io::fmt(s) + " dB puts the surface at " + io::fmt(d) +
                                                " m, beyond the cyclic prefix");
        }
    }

    inline void check_experiment(const io::RunConfig &c)
    {
        const auto sys = c.effective_system();
        check_snr_range(sys, c.rmse_vs_snr.snr_db, "sweeps.rmse_vs_snr.snr_db");
        check_snr_range(sys, {c.se_vs_slots.snr_db}, "sweeps.se_vs_slots.snr_db");
        check_snr_range(sys, c.se_vs_snr.snr_db, "sweeps.se_vs_snr.snr_db");
        check_snr_range(sys, c.crlb.snr_db, "crlb.snr_db");
    }

    // Reads the file (empty path: built-in defaults), applies overrides, validates
    inline io::RunConfig load_run_config(const std::string &path, const Overrides &ov = {})
    {
        const std::string label = path.empty() ? "<defaults>" : path;
        std::string text;
        io::json doc = io::json::object();
        if (!path.empty())
        {
            try
            {
                text = io::read_text(path);
            }
            catch (const config_error &e)
            {
                throw config_failure({label, 0, e.what()});
            }
            try
            {
                doc = io::json::parse(text);
            }
            catch (const nlohmann::json::parse_error &e)
            {
                const auto upto = std::min<std::size_t>(e.byte, text.size());
                const std::size_t line = std::size_t(std::count(text.begin(), text.begin() + std::ptrdiff_t(upto), '\n')) + 1;
                std::string msg = e.what();
                if (auto p = msg.find("parse error"); p != std::string::npos)
                    msg = msg.substr(p);
                throw config_failure({label, line, msg});
            }
        }
        for (const auto &a : ov.assignments)
        {
            try
            {
                io::apply_override(doc, a);
            }
            catch (const std::exception &e)
            {
                throw config_failure({"--set", 0, e.what()});
            }
        }
        if (ov.seed)
            doc["seed"] = *ov.seed;
        if (ov.output_dir)
            doc["output_dir"] = *ov.output_dir;
        if (ov.full_scale)
            doc["full_scale"] = true;

        try
        {
            auto cfg = io::run_config_from_json(doc);
            check_experiment(cfg);
            return cfg;
        }
        catch (const io::field_error &e)
        {
            // keys set on the command line win over the file location
            for (const auto &a : ov.assignments)
                if (a.rfind(e.path() + "=", 0) == 0)
                    throw config_failure({"--set " + a, 0, e.what()});
            throw config_failure({label, text.empty() ? 0 : io::locate_key(text, e.path()), e.what()});
        }
        catch (const config_error &e)
        {
            throw config_failure({label, 0, e.what()});
        }
    }

    inline void require_finite(double v, const char *what)
    {
        if (!std::isfinite(v))
            throw io::numerical_error(std::string("non-finite ") + what);
    }

    // ---- run ---------------------------------------------------------------------------------

    struct RunOutputs
    {
        std::optional<io::CsvTable> rmse_vs_snr, se_vs_slots, se_vs_snr;
        std::optional<io::json> traces;
        std::vector<sim::SweepResult> sweeps; // for the printed summary
    };

    inline const char *model_name(RcsModel m)
    {
        switch (m)
        {
        case RcsModel::analytic:
            return "analytic";
        case RcsModel::hypothetical:
            return "hypothetical";
        default:
            return "metallic_plate";
        }
    }

    inline RunOutputs run_experiments(const io::RunConfig &c)
    {
        RunOutputs out;
        const auto sys = c.effective_system();
        const auto ctx = sim::Context::make(sys);

        if (c.rmse_vs_snr.enabled)
        {
            const auto r = sim::sweep_rmse_vs_snr(ctx, c.rmse_vs_snr.snr_db, c.rmse_vs_snr.trials, c.seed,
                                                  c.rmse_vs_snr.slot_counts);
            io::CsvTable t("rmse_vs_snr", {"snr_db", "slots", "trials", "rmse_phi_deg", "rmse_phi_hw_deg",
                                           "rmse_theta_deg", "rmse_theta_hw_deg", "quantization_floor_deg"});
            for (const auto &p : r.points)
            {
                require_finite(p.rmse_phi_deg, "UE angle RMSE");
                require_finite(p.rmse_theta_deg, "BS angle RMSE");
                t.row(p.snr_db, p.slots, p.trials, p.rmse_phi_deg, p.rmse_phi_hw, p.rmse_theta_deg, p.rmse_theta_hw,
                      r.quantization_floor_deg);
            }
            out.rmse_vs_snr = std::move(t);
            out.sweeps.push_back(r);
        }

        if (c.se_vs_slots.enabled)
        {
            const auto &s = c.se_vs_slots;
            const auto r = sim::sweep_se_vs_slots(ctx, s.snr_db, s.slot_counts, s.trials, c.seed);
            io::CsvTable t("se_vs_slots",
                           {"snr_db", "slots", "trials", "se_mean", "se_hw", "se_baseline_mean", "se_baseline_hw"});
            for (const auto &p : r.points)
            {
                require_finite(p.se_mean, "spectral efficiency");
                t.row(p.snr_db, p.slots, p.trials, p.se_mean, p.se_hw, p.se_baseline_mean, p.se_baseline_hw);
            }
            out.se_vs_slots = std::move(t);
            out.sweeps.push_back(r);

            if (s.traces > 0)
            {
                // re-runs the first episodes of the sweep above with identical seeds
                const std::size_t horizon = *std::max_element(s.slot_counts.begin(), s.slot_counts.end());
                io::json eps = io::json::array();
                for (std::size_t t_idx = 0; t_idx < s.traces; ++t_idx)
                {
                    const auto seed = sim::derive_seed(c.seed, t_idx, sim::tag_trial);
                    const auto truth = sim::draw_scenario(ctx, s.snr_db, seed);
                    eps.push_back(io::to_json(sim::run_episode(ctx, truth, seed, horizon)));
                }
                out.traces = io::json{{"snr_db", s.snr_db}, {"episodes", eps}};
            }
        }

        if (c.se_vs_snr.enabled)
        {
            io::CsvTable t("se_vs_snr", {"rcs_model", "snr_db", "slots", "trials", "se_mean", "se_hw",
                                         "se_baseline_mean", "se_baseline_hw"});
            for (RcsModel m : c.se_vs_snr.models)
            {
                SystemConfig v = sys;
                v.rcs_model = m;
                const auto vctx = sim::Context::make(v);
                auto r = sim::sweep_se_vs_snr(vctx, c.se_vs_snr.snr_db, c.se_vs_snr.trials, c.seed);
                r.kind += std::string(":") + model_name(m);
                for (const auto &p : r.points)
                {
                    require_finite(p.se_mean, "spectral efficiency");
                    t.row(std::string(model_name(m)), p.snr_db, p.slots, p.trials, p.se_mean, p.se_hw,
                          p.se_baseline_mean, p.se_baseline_hw);
                }
                out.sweeps.push_back(std::move(r));
            }
            out.se_vs_snr = std::move(t);
        }
        return out;
    }

    inline void print_summary(std::ostream &os, const std::vector<sim::SweepResult> &sweeps)
    {
        const auto flags = os.flags();
        os << std::fixed << std::setprecision(3);
        for (const auto &r : sweeps)
        {
            os << "[" << r.kind << "]\n";
            os << std::setw(9) << "snr_db" << std::setw(7) << "slots" << std::setw(12) << "rmse_phi" << std::setw(12)
               << "rmse_theta" << std::setw(10) << "se" << std::setw(10) << "se_rand" << "\n";
            for (const auto &p : r.points)
                os << std::setw(9) << p.snr_db << std::setw(7) << p.slots << std::setw(12) << p.rmse_phi_deg
                   << std::setw(12) << p.rmse_theta_deg << std::setw(10) << p.se_mean << std::setw(10)
                   << p.se_baseline_mean << "\n";
        }
        os.flags(flags);
    }

    inline std::filesystem::path prepare_output_dir(const io::RunConfig &c)
    {
        std::filesystem::path dir(c.output_dir);
        std::filesystem::create_directories(dir);
        return dir;
    }

    inline int cmd_run(const io::RunConfig &c, std::ostream &log)
    {
        const auto dir = prepare_output_dir(c);
        const auto hash = io::config_hash(c);
        auto out = run_experiments(c);
        if (out.rmse_vs_snr)
            io::write_text((dir / "rmse_vs_snr.csv").string(), out.rmse_vs_snr->render(hash, c.seed));
        if (out.se_vs_slots)
            io::write_text((dir / "se_vs_slots.csv").string(), out.se_vs_slots->render(hash, c.seed));
        if (out.se_vs_snr)
            io::write_text((dir / "se_vs_snr.csv").string(), out.se_vs_snr->render(hash, c.seed));
        if (out.traces)
        {
            io::json doc{{"config_hash", hash}, {"seed", c.seed}};
            doc.update(*out.traces);
            io::write_text((dir / "traces.json").string(), doc.dump(1) + "\n");
        }
        print_summary(log, out.sweeps);
        return exit_ok;
    }

    // ---- crlb --------------------------------------------------------------------------------

    // Mean closed-form and FIM bounds on the UE angle over random combiner draws.
    // Each draw samples the largest slot count once; smaller counts use its prefixes.
    inline io::CsvTable crlb_table(const io::RunConfig &c)
    {
        const auto sys = c.effective_system();
        const auto ctx = sim::Context::make(sys);
        const auto budget = channel::LinkBudget::from(sys);
        const auto &bounds = c.crlb;
        const std::size_t horizon = *std::max_element(bounds.slot_counts.begin(), bounds.slot_counts.end());
        const AngleRad phi = AngleRad::from_degrees(bounds.phi_deg);

        io::CsvTable t("crlb", {"snr_db", "slots", "draws", "phi_deg", "crlb_closed_deg2", "crlb_fim_deg2",
                                "rmse_bound_closed_deg", "rmse_bound_fim_deg"});
        for (double snr : bounds.snr_db)
        {
            const auto truth = channel::make_scenario(channel::distance_for_snr(snr, budget), AngleRad(0.0), phi, 0.0, sys);
            crlb::Xi xi;
            xi.g = std::abs(signal::downlink_gain(truth, ctx.tx_omni));
            xi.phi = phi.value();
            xi.tau = truth.tau0;
            xi.nu = truth.nu0;

            std::vector<double> closed(bounds.slot_counts.size(), 0.0), numeric(bounds.slot_counts.size(), 0.0);
            for (std::size_t d = 0; d < bounds.draws; ++d)
            {
                std::mt19937_64 rng(sim::derive_seed(c.seed, d, sim::tag_combiner));
                std::vector<crlb::CrlbAccumulators> acc_prefix;
                std::vector<crlb::FisherMatrix> fim_prefix;
                crlb::CrlbAccumulators acc;
                crlb::FisherMatrix info = crlb::FisherMatrix::Zero();
                for (std::size_t s = 0; s < horizon; ++s)
                {
                    auto comb = codebook::sample_combiner(ctx.ue_codebook, sys.ue_rf_chains, rng);
                    auto pilots = signal::gen_pilots(sys.symbols, sys.subcarriers, sys.tx_power_w, rng);
                    acc.add(comb.matrix, xi.phi);
                    info += crlb::fim(xi, {comb.matrix}, {pilots}, sys.noise_power_w, ctx.timing);
                    acc_prefix.push_back(acc);
                    fim_prefix.push_back(info);
                }
                for (std::size_t k = 0; k < bounds.slot_counts.size(); ++k)
                {
                    const auto n = bounds.slot_counts[k] - 1;
                    closed[k] += crlb::crlb_phi_closed(acc_prefix[n], xi.g, xi.phi, sys.tx_power_w, sys.symbols,
                                                       sys.subcarriers, sys.noise_power_w)
                                     .value;
                    numeric[k] += crlb::phi_bound_from_fim(fim_prefix[n]);
                }
            }
            for (std::size_t k = 0; k < bounds.slot_counts.size(); ++k)
            {
                const double deg2 = rad2deg(1.0) * rad2deg(1.0);
                const double vc = closed[k] / double(bounds.draws) * deg2, vf = numeric[k] / double(bounds.draws) * deg2;
                if (!(vf > 0.0) || std::isnan(vf) || std::isnan(vc) || !(vc > 0.0))
                    throw io::numerical_error("CRLB not positive at SNR " + io::fmt(snr) + " dB");
                t.row(snr, bounds.slot_counts[k], bounds.draws, bounds.phi_deg, vc, vf, std::sqrt(vc), std::sqrt(vf));
            }
        }
        return t;
    }

    inline int cmd_crlb(const io::RunConfig &c, std::ostream &log)
    {
        const auto dir = prepare_output_dir(c);
        const auto t = crlb_table(c);
        io::write_text((dir / "crlb.csv").string(), t.render(io::config_hash(c), c.seed));
        log << "crlb: " << t.rows() << " rows -> " << (dir / "crlb.csv").string() << "\n";
        return exit_ok;
    }

    // ---- codebook ----------------------------------------------------------------------------

    struct CodebookReport
    {
        codebook::Codebook ue, bs;
        io::CsvTable pattern{"pattern", {}};
        io::CsvTable sectors{"sectors", {}};
    };

    inline std::vector<double> pattern_angles(const io::RunConfig &c)
    {
        const auto sys = c.effective_system();
        if (c.codebook.pattern_step_deg <= 0.0)
            return estimator::ParamGrid::from(sys).angles;
        std::vector<double> v;
        const auto n = static_cast<std::size_t>(std::floor(2.0 * sys.fov_deg / c.codebook.pattern_step_deg + 1e-9));
        for (std::size_t i = 0; i <= n; ++i)
            v.push_back(deg2rad(-sys.fov_deg + double(i) * c.codebook.pattern_step_deg));
        return v;
    }

    inline CodebookReport codebook_report(const io::RunConfig &c)
    {
        const auto sys = c.effective_system();
        CodebookReport r;
        r.ue = codebook::design_flattop(sys.irs_elements, sys);
        r.bs = codebook::design_flattop(sys.bs_antennas, sys);
        for (const auto *cb : {&r.ue, &r.bs})
            for (const auto &w : cb->codewords)
                if (std::abs(w.norm() - 1.0) > 1e-9)
                    throw io::numerical_error("codeword is not unit norm");

        std::vector<std::string> cols{"angle_deg"};
        for (std::size_t k = 0; k < r.ue.size(); ++k)
            cols.push_back("ue_" + std::to_string(k));
        for (std::size_t k = 0; k < r.bs.size(); ++k)
            cols.push_back("bs_" + std::to_string(k));
        r.pattern = io::CsvTable("pattern", cols);
        for (double ang : pattern_angles(c))
        {
            std::vector<double> g;
            for (const auto *cb : {&r.ue, &r.bs})
                for (const auto &w : cb->codewords)
                    g.push_back(codebook::beam_gain(w, ang));
            r.pattern.row(rad2deg(ang), g);
        }

        r.sectors = io::CsvTable("sectors", {"array", "sector", "lo_deg", "hi_deg", "ripple_db", "leakage_db",
                                             "mean_gain", "converged"});
        const double step = deg2rad(1.0);
        for (const auto &[name, cb] : {std::pair{"ue", &r.ue}, std::pair{"bs", &r.bs}})
            for (std::size_t k = 0; k < cb->size(); ++k)
            {
                const auto m = codebook::pattern_metrics(cb->codewords[k], cb->sectors[k], cb->fov_rad, step,
                                                         1.0 / double(cb->n_antennas));
                r.sectors.row(std::string(name), k, rad2deg(cb->sectors[k].lo), rad2deg(cb->sectors[k].hi), m.ripple_db,
                              m.leakage_db, m.mean_gain, std::string(cb->converged[k] ? "true" : "false"));
            }
        return r;
    }

    inline int cmd_codebook(const io::RunConfig &c, std::ostream &log)
    {
        const auto dir = prepare_output_dir(c);
        const auto hash = io::config_hash(c);
        const auto r = codebook_report(c);
        io::json doc{{"config_hash", hash}, {"seed", c.seed}, {"ue", io::to_json(r.ue)}, {"bs", io::to_json(r.bs)}};
        io::write_text((dir / "codebook.json").string(), doc.dump(1) + "\n");
        io::write_text((dir / "pattern.csv").string(), r.pattern.render(hash, c.seed));
        io::write_text((dir / "sectors.csv").string(), r.sectors.render(hash, c.seed));
        std::size_t converged = 0;
        for (bool b : r.ue.converged)
            converged += b;
        log << "codebook: " << r.ue.size() << " UE / " << r.bs.size() << " BS codewords (" << converged
            << " UE sectors converged), " << r.pattern.rows() << " pattern rows -> " << dir.string() << "\n";
        return exit_ok;
    }
}

#endif
