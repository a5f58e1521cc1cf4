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

#ifndef BALIGN_SIMULATOR_HPP
#define BALIGN_SIMULATOR_HPP

#include "codebook.hpp"
#include "estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace balign::sim
{
    // Everything an episode needs that does not depend on the trial
    struct Context
    {
        SystemConfig cfg;
        codebook::Codebook ue_codebook;
        codebook::Codebook bs_codebook;
        cvec tx_omni;
        cvec ue_omni; // quasi-omni UE receive beam, scaled to the norm of b(phi)
        estimator::ParamGrid grid;
        signal::TimingConstants timing;

        static Context make(const SystemConfig &cfg)
        {
            cfg.validate();
            Context c;
            c.cfg = cfg;
            c.ue_codebook = codebook::design_flattop(cfg.irs_elements, cfg);
            c.bs_codebook = cfg.bs_antennas == cfg.irs_elements ? c.ue_codebook : codebook::design_flattop(cfg.bs_antennas, cfg);
            c.tx_omni = codebook::quasi_omni(cfg.bs_antennas, cfg).conjugate();
            c.ue_omni = codebook::quasi_omni(cfg.irs_elements, cfg) * std::sqrt(double(cfg.irs_elements));
            c.grid = estimator::ParamGrid::from(cfg);
            c.timing = signal::TimingConstants::from(cfg);
            return c;
        }

        cvec tx_beam_for(AngleRad theta) const
        {
            return cfg.tx_beam == TxBeamMode::quasi_omni ? tx_omni : codebook::tx_beam(cfg, bs_codebook, theta);
        }
    };

    // Deterministic 64-bit seed for (master, index, tag)
    inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint32_t tag)
    {
        std::seed_seq seq{std::uint32_t(master), std::uint32_t(master >> 32), std::uint32_t(index),
                          std::uint32_t(index >> 32), tag};
        std::uint32_t out[2];
        seq.generate(out, out + 2);
        return (std::uint64_t(out[1]) << 32) | out[0];
    }

    enum StreamTag : std::uint32_t
    {
        tag_geometry = 1,
        tag_combiner = 2,
        tag_pilots = 3,
        tag_ue_noise = 4,
        tag_bs_noise = 5,
        tag_baseline = 6,
        tag_trial = 7
    };

    // Independent RNG streams of one episode, so changing one consumer leaves the others intact
    struct EpisodeStreams
    {
        std::mt19937_64 combiner, pilots, ue_noise, bs_noise;
        explicit EpisodeStreams(std::uint64_t seed)
            : combiner(derive_seed(seed, 0, tag_combiner)), pilots(derive_seed(seed, 0, tag_pilots)),
              ue_noise(derive_seed(seed, 0, tag_ue_noise)), bs_noise(derive_seed(seed, 0, tag_bs_noise))
        {
        }
    };

    struct SlotTrace
    {
        hirs::IrsMode mode = hirs::IrsMode::sensing;
        double beta = 0.0;
        std::optional<estimator::EstimateRecord> ue; // only in sensing slots
        std::optional<estimator::EstimateRecord> bs;
        std::optional<double> phi_hat;   // latest UE angle estimate after this slot
        std::optional<double> theta_hat; // latest BS angle estimate after this slot
        std::vector<std::size_t> ue_codewords;
        std::vector<std::size_t> bs_codewords;
        std::size_t ue_archive_slots = 0;
        std::size_t bs_archive_slots = 0;
    };

    struct EpisodeResult
    {
        channel::ScenarioTruth truth;
        std::uint64_t seed = 0;
        std::vector<SlotTrace> slots;
        double spectral_efficiency = 0.0;
    };

    // log2(1 + snr |a^T(theta) a*(theta_hat)|^2 |ue_gain|^2) where ue_gain is the UE
    // beam response toward phi
    inline double spectral_efficiency_with_ue_gain(AngleRad theta, double theta_hat, double ue_gain_sq, double snr_lin,
                                                   std::size_t n_bs)
    {
        const cvec a = array::steer(n_bs, theta);
        const cvec ah = array::steer(n_bs, AngleRad(theta_hat));
        const double bs_gain = std::norm(a.dot(ah)); // |a^H(theta_hat) a(theta)|^2 = |a^T(theta) a*(theta_hat)|^2
        return std::log2(1.0 + snr_lin * bs_gain * ue_gain_sq);
    }

    inline double spectral_efficiency(AngleRad theta, double theta_hat, AngleRad phi, double phi_hat, double snr_lin,
                                      std::size_t n_bs, std::size_t n_ue)
    {
        const double ue = std::norm(array::steer(n_ue, AngleRad(phi_hat)).dot(array::steer(n_ue, phi)));
        return spectral_efficiency_with_ue_gain(theta, theta_hat, ue, snr_lin, n_bs);
    }

    inline double link_snr_linear(const Context &ctx, double distance)
    {
        return db2lin(channel::snr_bbf(distance, channel::LinkBudget::from(ctx.cfg)));
    }

    // SE after beam alignment with the estimates available after slot `upto` (1-based)
    inline double episode_se(const Context &ctx, const EpisodeResult &ep, std::size_t upto)
    {
        const auto &t = ep.truth;
        const auto &s = ep.slots.at(upto - 1);
        const double snr = link_snr_linear(ctx, t.distance);
        const double theta_hat = s.theta_hat.value_or(0.0);
        if (ctx.cfg.rcs_model == RcsModel::metallic_plate)
        {
            const double ue = std::norm(ctx.ue_omni.dot(array::steer(ctx.cfg.irs_elements, t.phi)));
            return spectral_efficiency_with_ue_gain(t.theta, theta_hat, ue, snr, ctx.cfg.bs_antennas);
        }
        return spectral_efficiency(t.theta, theta_hat, t.phi, s.phi_hat.value_or(0.0), snr, ctx.cfg.bs_antennas,
                                   ctx.cfg.irs_elements);
    }

    // Slot loop: IRS control, combiner sampling, synthesis, multi-slot estimation at both ends.
    // n_slots = 0 uses cfg.slots.
    inline EpisodeResult run_episode(const Context &ctx, const channel::ScenarioTruth &truth, std::uint64_t seed,
                                     std::size_t n_slots = 0)
    {
        const auto &cfg = ctx.cfg;
        if (n_slots == 0)
            n_slots = cfg.slots;
        EpisodeStreams rng(seed);
        EpisodeResult ep;
        ep.truth = truth;
        ep.seed = seed;
        ep.slots.reserve(n_slots);

        const bool plate = cfg.rcs_model == RcsModel::metallic_plate;
        const cvec f = ctx.tx_beam_for(truth.theta);
        hirs::EstimateHistory history;
        estimator::UeAccumulator ue(ctx.grid, ctx.timing, cfg.irs_elements);
        estimator::BsAccumulator bs(ctx.grid, ctx.timing, cfg.bs_antennas);
        std::optional<double> phi_hat, theta_hat;

        for (std::size_t i = 0; i < n_slots; ++i)
        {
            const hirs::IrsState irs = plate ? hirs::IrsState::reflecting(rvec::Zero(Eigen::Index(cfg.irs_elements)))
                                             : hirs::controller_step(history, cfg);
            auto ue_comb = codebook::sample_combiner(ctx.ue_codebook, cfg.ue_rf_chains, rng.combiner);
            auto bs_comb = codebook::sample_combiner(ctx.bs_codebook, cfg.bs_rf_chains, rng.combiner);
            auto pilots = signal::gen_pilots(cfg.symbols, cfg.subcarriers, cfg.tx_power_w, rng.pilots);
            auto r = signal::synth_bs(truth, irs, bs_comb.matrix, f, pilots, cfg.noise_power_w, ctx.timing, rng.bs_noise);

            SlotTrace tr;
            tr.mode = irs.mode;
            tr.beta = irs.beta;
            tr.ue_codewords = ue_comb.indices;
            tr.bs_codewords = bs_comb.indices;

            // UE samples are only consumed while sensing; a reflecting surface starves the UE of new
            // estimates, so the controller never leaves that state and the skipped draws are never needed
            if (irs.mode == hirs::IrsMode::sensing)
            {
                auto y = signal::synth_ue(truth, irs, ue_comb.matrix, f, pilots, cfg.noise_power_w, ctx.timing, rng.ue_noise);
                ue.add_slot({pilots, signal::sensing_combiner(irs, ue_comb.matrix), std::move(y)});
                tr.ue = estimator::ue_estimate(ue);
                phi_hat = tr.ue->angle_hat;
                history.append(*phi_hat);
            }
            if (!cfg.bs_reflecting_slots_only || irs.mode == hirs::IrsMode::reflecting)
                bs.add_slot({std::move(pilots), std::move(bs_comb.matrix), std::move(r)});
            if (bs.slots() > 0)
            {
                tr.bs = estimator::bs_estimate(bs);
                theta_hat = tr.bs->angle_hat;
            }
            tr.phi_hat = phi_hat;
            tr.theta_hat = theta_hat;
            tr.ue_archive_slots = ue.slots();
            tr.bs_archive_slots = bs.slots();
            ep.slots.push_back(std::move(tr));
        }
        ep.spectral_efficiency = episode_se(ctx, ep, n_slots);
        return ep;
    }

    // BALIGN_THREADS caps the worker count
    inline std::size_t thread_count()
    {
        std::size_t n = std::max(1u, std::thread::hardware_concurrency());
        if (const char *env = std::getenv("BALIGN_THREADS"))
        {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1)
                n = std::min(n, std::size_t(v));
        }
        return n;
    }

    // Runs fn(i) for i in [0, n) on the worker pool; the first exception is rethrown
    template <typename Fn>
    void parallel_for(std::size_t n, Fn &&fn)
    {
        const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(n, 1));
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto body = [&]
        {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = n;
                }
            }
        };
        if (workers <= 1)
            body();
        else
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back(body);
        }
        if (error)
            std::rethrow_exception(error);
    }

    // Random geometry for one trial: angles uniform over the field of view, distance set by the SNR
    inline channel::ScenarioTruth draw_scenario(const Context &ctx, double snr_db, std::uint64_t trial_seed)
    {
        std::mt19937_64 rng(derive_seed(trial_seed, 0, tag_geometry));
        const double fov = deg2rad(ctx.cfg.fov_deg);
        std::uniform_real_distribution<double> ang(-fov, fov);
        const AngleRad theta(ang(rng));
        const AngleRad phi(ang(rng));
        const double d = channel::distance_for_snr(snr_db, channel::LinkBudget::from(ctx.cfg));
        return channel::make_scenario(d, theta, phi, ctx.cfg.speed_mps, ctx.cfg, &rng);
    }

    // Angle difference wrapped to [-pi, pi)
    inline double angle_error(double estimate, double truth) { return wrap_phase(estimate - truth); }

    struct SweepPoint
    {
        double snr_db = 0;
        std::size_t slots = 0;
        std::size_t trials = 0;
        double rmse_phi_deg = 0, rmse_phi_hw = 0;     // UE angle, 95% half-width
        double rmse_theta_deg = 0, rmse_theta_hw = 0; // BS angle
        double se_mean = 0, se_hw = 0;                // aligned spectral efficiency [bit/s/Hz]
        double se_baseline_mean = 0, se_baseline_hw = 0; // random beams
    };

    struct SweepResult
    {
        std::string kind; // rmse_vs_snr | se_vs_slots | se_vs_snr
        std::vector<SweepPoint> points;
        double quantization_floor_deg = 0; // grid spacing / sqrt(12)
    };

    // Raw per-trial outcomes, indexed [snr][slot count][trial]
    struct TrialOutcomes
    {
        std::vector<double> snr_db;
        std::vector<std::size_t> slot_counts;
        std::vector<std::vector<std::vector<double>>> err_phi, err_theta, se, se_baseline;
    };

    inline double grid_spacing(const estimator::ParamGrid &g)
    {
        return g.angles.size() > 1 ? (g.angles.back() - g.angles.front()) / double(g.angles.size() - 1) : 0.0;
    }

    // Trial t uses the same geometry and noise streams at every SNR point (common random numbers)
    inline TrialOutcomes run_trials(const Context &ctx, const std::vector<double> &snr_points,
                                    const std::vector<std::size_t> &slot_counts, std::size_t trials,
                                    std::uint64_t master_seed)
    {
        if (trials == 0 || snr_points.empty() || slot_counts.empty())
            throw config_error("sweep: need >= 1 trial, SNR point and slot count");
        const std::size_t horizon = *std::max_element(slot_counts.begin(), slot_counts.end());
        if (std::find(slot_counts.begin(), slot_counts.end(), std::size_t{0}) != slot_counts.end())
            throw config_error("sweep: slot counts must be >= 1");

        TrialOutcomes out;
        out.snr_db = snr_points;
        out.slot_counts = slot_counts;
        auto shape = [&](auto &v)
        { v.assign(snr_points.size(), std::vector<std::vector<double>>(slot_counts.size(), std::vector<double>(trials))); };
        shape(out.err_phi);
        shape(out.err_theta);
        shape(out.se);
        shape(out.se_baseline);

        const double fov = deg2rad(ctx.cfg.fov_deg);
        parallel_for(snr_points.size() * trials, [&](std::size_t job)
                     {
            const std::size_t p = job / trials, t = job % trials;
            const std::uint64_t seed = derive_seed(master_seed, t, tag_trial);
            const auto truth = draw_scenario(ctx, snr_points[p], seed);
            const auto ep = run_episode(ctx, truth, seed, horizon);

            std::mt19937_64 brng(derive_seed(seed, 0, tag_baseline));
            std::uniform_real_distribution<double> ang(-fov, fov);
            const double snr = link_snr_linear(ctx, truth.distance);
            for (std::size_t c = 0; c < slot_counts.size(); ++c)
            {
                const auto &s = ep.slots[slot_counts[c] - 1];
                out.err_phi[p][c][t] = angle_error(s.phi_hat.value_or(0.0), truth.phi.value());
                out.err_theta[p][c][t] = angle_error(s.theta_hat.value_or(0.0), truth.theta.value());
                out.se[p][c][t] = episode_se(ctx, ep, slot_counts[c]);
                const double th = ang(brng), ph = ang(brng);
                out.se_baseline[p][c][t] = spectral_efficiency(truth.theta, th, truth.phi, ph, snr, ctx.cfg.bs_antennas,
                                                               ctx.cfg.irs_elements);
            } });
        return out;
    }

    struct Summary
    {
        double value = 0; // RMSE or mean
        double half_width = 0; // 95%
    };

    // RMSE with a delta-method 95% half-width
    inline Summary rmse(const std::vector<double> &errors)
    {
        const double n = double(errors.size());
        double m = 0, m2 = 0;
        for (double e : errors)
        {
            m += e * e;
            m2 += e * e * e * e;
        }
        m /= n;
        m2 /= n;
        const double var_sq = n > 1 ? std::max(0.0, (m2 - m * m) * n / (n - 1)) : 0.0;
        const double r = std::sqrt(m);
        return {r, r > 0 ? 1.96 * std::sqrt(var_sq / n) / (2.0 * r) : 0.0};
    }

    inline Summary mean(const std::vector<double> &v)
    {
        const double n = double(v.size());
        double m = 0, ss = 0;
        for (double x : v)
            m += x;
        m /= n;
        for (double x : v)
            ss += (x - m) * (x - m);
        return {m, n > 1 ? 1.96 * std::sqrt(ss / (n - 1) / n) : 0.0};
    }

    inline SweepResult summarize(const Context &ctx, const TrialOutcomes &o, std::string kind)
    {
        SweepResult r;
        r.kind = std::move(kind);
        r.quantization_floor_deg = rad2deg(grid_spacing(ctx.grid)) / std::sqrt(12.0);
        for (std::size_t p = 0; p < o.snr_db.size(); ++p)
            for (std::size_t c = 0; c < o.slot_counts.size(); ++c)
            {
                SweepPoint pt;
                pt.snr_db = o.snr_db[p];
                pt.slots = o.slot_counts[c];
                pt.trials = o.err_phi[p][c].size();
                const auto ph = rmse(o.err_phi[p][c]), th = rmse(o.err_theta[p][c]);
                pt.rmse_phi_deg = rad2deg(ph.value);
                pt.rmse_phi_hw = rad2deg(ph.half_width);
                pt.rmse_theta_deg = rad2deg(th.value);
                pt.rmse_theta_hw = rad2deg(th.half_width);
                const auto se = mean(o.se[p][c]), sb = mean(o.se_baseline[p][c]);
                pt.se_mean = se.value;
                pt.se_hw = se.half_width;
                pt.se_baseline_mean = sb.value;
                pt.se_baseline_hw = sb.half_width;
                r.points.push_back(pt);
            }
        return r;
    }

    // RMSE of the UE (and BS) angle estimate per SNR point, at each requested slot budget
    inline SweepResult sweep_rmse_vs_snr(const Context &ctx, const std::vector<double> &snr_points, std::size_t trials,
                                         std::uint64_t master_seed, std::vector<std::size_t> slot_counts = {})
    {
        if (slot_counts.empty())
            slot_counts = {ctx.cfg.slots};
        return summarize(ctx, run_trials(ctx, snr_points, slot_counts, trials, master_seed), "rmse_vs_snr");
    }

    // Mean spectral efficiency per slot budget at a fixed SNR, with the random-beam baseline.
    // Budgets are read off one episode per trial: the slot loop does not depend on the horizon.
    inline SweepResult sweep_se_vs_slots(const Context &ctx, double snr_db, const std::vector<std::size_t> &slot_counts,
                                         std::size_t trials, std::uint64_t master_seed)
    {
        return summarize(ctx, run_trials(ctx, {snr_db}, slot_counts, trials, master_seed), "se_vs_slots");
    }

    // Mean spectral efficiency after cfg.slots slots per SNR point
    inline SweepResult sweep_se_vs_snr(const Context &ctx, const std::vector<double> &snr_points, std::size_t trials,
                                       std::uint64_t master_seed)
    {
        return summarize(ctx, run_trials(ctx, snr_points, {ctx.cfg.slots}, trials, master_seed), "se_vs_snr");
    }
}

#endif
