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

#include "balign/estimator.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace balign;
using Catch::Matchers::WithinRel;

namespace
{
    struct Bench
    {
        SystemConfig cfg;
        signal::TimingConstants timing;
        estimator::ParamGrid grid;
        std::mt19937_64 rng{77};

        Bench()
        {
            cfg.subcarriers = 24;
            cfg.symbols = 4;
            cfg.grid_angles = 41;
            cfg.grid_delays = 5;
            cfg.grid_dopplers = 5;
            timing = signal::TimingConstants::from(cfg);
            grid = estimator::ParamGrid::from(cfg);
        }

        cmat gaussian(std::size_t rows, std::size_t cols)
        {
            std::normal_distribution<double> n;
            cmat U = cmat::Zero(Eigen::Index(rows), Eigen::Index(cols));
            for (Eigen::Index k = 0; k < U.size(); ++k)
                U.data()[k] = {n(rng), n(rng)};
            return U / U.norm();
        }

        // Truth sitting on grid cell (a, j, i)
        channel::ScenarioTruth on_grid(std::size_t a_ue, std::size_t a_bs, std::size_t j, std::size_t i)
        {
            auto t = channel::make_scenario(10.0, AngleRad(grid.angles[a_bs]), AngleRad(grid.angles[a_ue]), 0.0, cfg);
            t.tau0 = grid.delays[j];
            t.nu0 = grid.dopplers[i];
            return t;
        }

        signal::PilotFrame pilots() { return signal::gen_pilots(cfg.symbols, cfg.subcarriers, cfg.tx_power_w, rng); }
    };

    // Direct evaluation of the UE statistic from its definition
    double ue_objective_oracle(const std::vector<estimator::UeSlot> &slots, double tau, double nu, double phi,
                               const signal::TimingConstants &timing)
    {
        const auto L = slots.front().combiner.rows();
        const cvec b = array::steer(std::size_t(L), AngleRad(phi));
        cvec c = cvec::Zero(L);
        cmat vs = cmat::Zero(L, L);
        for (const auto &s : slots)
        {
            cvec z = cvec::Zero(s.combiner.cols());
            for (std::size_t n = 0; n < s.pilots.symbols; ++n)
                for (std::size_t m = 0; m < s.pilots.subcarriers; ++m)
                    z += std::conj(s.pilots(n, m) * std::exp(cplx(0.0, pi * (double(n) * timing.t_o * nu - double(m) * timing.delta_f * tau)))) *
                         s.observation.at(n, m);
            c += s.combiner * z;
            vs += s.pilots.energy() * s.combiner * s.combiner.adjoint();
        }
        const double den = (b.adjoint() * vs * b)(0, 0).real();
        return den > 0.0 ? std::norm(b.dot(c)) / den : 0.0;
    }

    double bs_objective_oracle(const std::vector<estimator::BsSlot> &slots, double tau, double nu, double theta,
                               const signal::TimingConstants &timing)
    {
        double total = 0.0;
        for (const auto &s : slots)
        {
            const cvec a = array::steer(std::size_t(s.combiner.rows()), AngleRad(theta));
            cvec z = cvec::Zero(s.combiner.cols());
            for (std::size_t n = 0; n < s.pilots.symbols; ++n)
                for (std::size_t m = 0; m < s.pilots.subcarriers; ++m)
                    z += std::conj(s.pilots(n, m) * std::exp(cplx(0.0, 2.0 * pi * (double(n) * timing.t_o * nu - double(m) * timing.delta_f * tau)))) *
                         s.observation.at(n, m);
            const cvec c = s.combiner * z;
            const double den = s.pilots.energy() * (s.combiner.adjoint() * a).squaredNorm();
            if (den > 0.0)
                total += std::norm(a.dot(c)) / den;
        }
        return total;
    }

    template <typename Fn>
    std::array<std::size_t, 3> brute_argmax(const estimator::ParamGrid &g, Fn &&fn)
    {
        std::array<std::size_t, 3> best{};
        double v_best = -1.0;
        for (std::size_t a = 0; a < g.angles.size(); ++a)
            for (std::size_t j = 0; j < g.delays.size(); ++j)
                for (std::size_t i = 0; i < g.dopplers.size(); ++i)
                {
                    const double v = fn(g.angles[a], g.delays[j], g.dopplers[i]);
                    if (v > v_best)
                    {
                        v_best = v;
                        best = {a, j, i};
                    }
                }
        return best;
    }
}

TEST_CASE("grid layout", "[estimator]")
{
    const SystemConfig cfg;
    const auto g = estimator::ParamGrid::from(cfg);
    CHECK(g.angles.size() == 181);
    CHECK(g.angles.front() == -deg2rad(87.0));
    CHECK(g.angles.back() == deg2rad(87.0));
    CHECK(g.delays.front() == 0.0);
    CHECK_THAT(g.delays.back(), WithinRel(cfg.cp_duration(), 1e-14));
    CHECK(g.dopplers.front() == -20e3);
    CHECK(std::is_sorted(g.angles.begin(), g.angles.end()));
    CHECK(estimator::ParamGrid::linspace(1.0, 3.0, 1) == std::vector<double>{2.0});
    CHECK_THROWS_AS(estimator::ParamGrid::linspace(0.0, 1.0, 0), config_error);
}

TEST_CASE("UE estimator recovers on-grid truth without noise", "[estimator]")
{
    Bench b;
    const auto truth = b.on_grid(27, 12, 3, 1);
    const cvec f = array::steer(64, truth.theta).conjugate() / 8.0;
    estimator::UeAccumulator acc(b.grid, b.timing, 64);
    const cmat U = b.gaussian(64, 4);
    const auto p = b.pilots();
    const auto y = signal::synth_ue(truth, hirs::IrsState::sensing(64), U, f, p, 0.0, b.timing, b.rng);
    acc.add_slot({p, U, y});

    const auto rec = estimator::ue_estimate(acc);
    CHECK(rec.angle_index == 27);
    CHECK(rec.delay_index == 3);
    CHECK(rec.doppler_index == 1);
    CHECK(rec.angle_hat == truth.phi.value());
    const cplx g_dl = signal::downlink_gain(truth, f);
    CHECK(std::abs(rec.g_hat - g_dl) < 1e-9 * std::abs(g_dl));

    const auto oracle = brute_argmax(b.grid, [&](double phi, double tau, double nu)
                                     { return ue_objective_oracle(acc.archive(), tau, nu, phi, b.timing); });
    CHECK(oracle == std::array<std::size_t, 3>{27, 3, 1});
}

TEST_CASE("UE statistic: grid route, direct route and oracle agree", "[estimator]")
{
    Bench b;
    auto truth = b.on_grid(5, 30, 1, 4);
    truth.tau0 += 3e-9; // off grid
    const cvec f = array::steer(64, AngleRad(0.0)).conjugate() / 8.0;
    estimator::UeAccumulator acc(b.grid, b.timing, 64);
    for (int s = 0; s < 3; ++s)
    {
        const cmat U = b.gaussian(64, 4);
        const auto p = b.pilots();
        acc.add_slot({p, U, signal::synth_ue(truth, hirs::IrsState::sensing(64), U, f, p, 1e-12, b.timing, b.rng)});
    }
    const auto rec = estimator::ue_estimate(acc);
    const double direct = estimator::ue_objective(rec.tau_hat, rec.nu_hat, rec.angle_hat, acc);
    CHECK_THAT(rec.objective, WithinRel(direct, 1e-9));
    for (std::size_t a : {0u, 17u, 40u})
    {
        const double d = estimator::ue_objective(b.grid.delays[2], b.grid.dopplers[3], b.grid.angles[a], acc);
        CHECK_THAT(d, WithinRel(ue_objective_oracle(acc.archive(), b.grid.delays[2], b.grid.dopplers[3], b.grid.angles[a], b.timing), 1e-9));
    }
}

TEST_CASE("UE statistic structure", "[estimator]")
{
    Bench b;
    const auto truth = b.on_grid(10, 20, 2, 2);
    const cvec f = array::steer(64, truth.theta).conjugate() / 8.0;
    const cmat U = b.gaussian(64, 4);
    const auto p = b.pilots();
    const auto y = signal::synth_ue(truth, hirs::IrsState::sensing(64), U, f, p, 1e-11, b.timing, b.rng);

    estimator::UeAccumulator one(b.grid, b.timing, 64), two(b.grid, b.timing, 64), scaled(b.grid, b.timing, 64),
        zero(b.grid, b.timing, 64), dark(b.grid, b.timing, 64);
    one.add_slot({p, U, y});
    two.add_slot({p, U, y});
    two.add_slot({p, U, y});
    auto y3 = y;
    y3.samples *= 3.0;
    scaled.add_slot({p, U, y3});
    auto y0 = y;
    y0.samples.setZero();
    zero.add_slot({p, U, y0});
    dark.add_slot({p, cmat::Zero(64, 4), y});

    const auto r1 = estimator::ue_estimate(one), r2 = estimator::ue_estimate(two), r3 = estimator::ue_estimate(scaled);
    CHECK(r2.angle_index == r1.angle_index);
    CHECK(r2.delay_index == r1.delay_index);
    CHECK_THAT(r2.objective, WithinRel(2.0 * r1.objective, 1e-12));
    CHECK(r3.angle_index == r1.angle_index);
    CHECK_THAT(r3.objective, WithinRel(9.0 * r1.objective, 1e-12));

    const auto rz = estimator::ue_estimate(zero);
    CHECK(rz.objective == 0.0);
    CHECK(rz.angle_index == 0); // lowest index wins ties
    CHECK(estimator::ue_objective(0.0, 0.0, 0.1, dark) == 0.0);

    estimator::UeAccumulator empty(b.grid, b.timing, 64);
    CHECK_THROWS_AS(estimator::ue_estimate(empty), std::logic_error);
    CHECK_THROWS_AS(empty.add_slot({p, cmat::Zero(32, 4), y}), config_error);
}

TEST_CASE("BS estimator", "[estimator]")
{
    Bench b;
    const auto truth = b.on_grid(15, 33, 4, 0);
    const cvec f = array::steer(64, AngleRad(0.2)).conjugate() / 8.0;
    const auto irs = hirs::IrsState::reflecting(hirs::matched_phases(64, truth.phi.value()));

    estimator::BsAccumulator acc(b.grid, b.timing, 64);
    std::vector<cplx> g_ul;
    rmat previous = acc.objective_grid();
    for (int s = 0; s < 3; ++s)
    {
        const cmat U = b.gaussian(64, 4);
        const auto p = b.pilots();
        acc.add_slot({p, U, signal::synth_bs(truth, irs, U, f, p, 0.0, b.timing, b.rng)});
        g_ul.push_back(signal::uplink_gain(truth, irs, f));
        CHECK((acc.objective_grid() - previous).minCoeff() >= 0.0);
        previous = acc.objective_grid();
    }

    const auto rec = estimator::bs_estimate(acc);
    CHECK(rec.angle_index == 33);
    CHECK(rec.delay_index == 4);
    CHECK(rec.doppler_index == 0);
    CHECK(std::abs(rec.g_hat - g_ul.back()) < 1e-9 * std::abs(g_ul.back()));

    const auto gains = estimator::bs_slot_gains(rec.tau_hat, rec.nu_hat, rec.angle_hat, acc);
    REQUIRE(gains.size() == 3);
    for (std::size_t s = 0; s < 3; ++s)
        CHECK(std::abs(gains[s] - g_ul[s]) < 1e-9 * std::abs(g_ul[s]));

    const auto oracle = brute_argmax(b.grid, [&](double th, double tau, double nu)
                                     { return bs_objective_oracle(acc.archive(), tau, nu, th, b.timing); });
    CHECK(oracle == std::array<std::size_t, 3>{33, 4, 0});
    CHECK_THAT(rec.objective, WithinRel(estimator::bs_objective(rec.tau_hat, rec.nu_hat, rec.angle_hat, acc), 1e-9));
    CHECK_THAT(rec.objective, WithinRel(bs_objective_oracle(acc.archive(), rec.tau_hat, rec.nu_hat, rec.angle_hat, b.timing), 1e-9));

    estimator::BsAccumulator silent(b.grid, b.timing, 64);
    const auto p = b.pilots();
    silent.add_slot({p, b.gaussian(64, 4), signal::Observation{p.symbols, p.subcarriers, cmat::Zero(4, Eigen::Index(p.size()))}});
    CHECK(estimator::bs_estimate(silent).objective == 0.0);

    estimator::BsAccumulator empty(b.grid, b.timing, 64);
    CHECK_THROWS_AS(estimator::bs_estimate(empty), std::logic_error);
}
