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

#include "balign/channel.hpp"
#include "balign/hirs.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace balign;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    hirs::IrsState with_beta(double beta, rvec psi)
    {
        auto s = hirs::IrsState::reflecting(std::move(psi));
        s.beta = beta;
        return s;
    }
}

TEST_CASE("reflection matrix", "[hirs]")
{
    CHECK(hirs::reflection_matrix(hirs::IrsState::sensing(4)).diagonal().cwiseAbs().maxCoeff() == 0.0);
    const auto id = hirs::reflection_matrix(hirs::IrsState::reflecting(rvec::Zero(4)));
    CHECK((id.diagonal() - cvec::Ones(4)).norm() == 0.0);
    const auto half = hirs::reflection_matrix(with_beta(0.5, rvec::Constant(3, pi)));
    CHECK((half.diagonal() + 0.5 * cvec::Ones(3)).norm() < 1e-15);
    CHECK_THROWS_AS(hirs::reflection_matrix(with_beta(1.5, rvec::Zero(2))), config_error);
    CHECK_THROWS_AS(hirs::sensing_matrix(with_beta(-0.1, rvec::Zero(2))), config_error);
}

TEST_CASE("sensing matrix", "[hirs]")
{
    CHECK((hirs::sensing_matrix(hirs::IrsState::sensing(5)).diagonal() - rvec::Ones(5)).norm() == 0.0);
    CHECK(hirs::sensing_matrix(hirs::IrsState::reflecting(rvec::Zero(5))).diagonal().norm() == 0.0);
    CHECK((hirs::sensing_matrix(with_beta(0.25, rvec::Zero(5))).diagonal() - rvec::Constant(5, 0.75)).norm() == 0.0);
}

TEST_CASE("3 dB beamwidth", "[hirs]")
{
    CHECK_THAT(hirs::beamwidth_3db(64), WithinAbs(0.02768, 1e-5));
    CHECK_THAT(rad2deg(hirs::beamwidth_3db(64)), WithinAbs(1.586, 1e-3));
    CHECK(hirs::beamwidth_3db(128) < hirs::beamwidth_3db(64));
    CHECK_THAT(hirs::beamwidth_3db(1), WithinAbs(2.0 * std::asin(2.782 / pi), 1e-12));
    CHECK_THROWS_AS(hirs::beamwidth_3db(0), std::domain_error);
}

TEST_CASE("moving standard deviation", "[hirs]")
{
    hirs::EstimateHistory h;
    CHECK_FALSE(hirs::moving_std(h, 5).has_value());
    for (int i = 0; i < 4; ++i)
        h.append(0.3);
    CHECK_FALSE(hirs::moving_std(h, 5).has_value());
    h.append(0.3);
    CHECK(*hirs::moving_std(h, 5) == 0.0);

    hirs::EstimateHistory ramp;
    ramp.append(1.0); // outside the window
    for (double v : {0.0, 0.01, 0.02, 0.03, 0.04})
        ramp.append(v);
    CHECK_THAT(*hirs::moving_std(ramp, 5), WithinAbs(0.01581, 1e-5));
    CHECK_THROWS_AS(hirs::moving_std(ramp, 1), config_error);
}

TEST_CASE("controller switches on estimate stability", "[hirs]")
{
    SystemConfig cfg;
    hirs::EstimateHistory h;
    CHECK(hirs::controller_step(h, cfg) == hirs::IrsState::sensing(64));

    const double phi = deg2rad(17.0);
    for (int i = 0; i < 5; ++i)
        h.append(phi);
    const auto st = hirs::controller_step(h, cfg);
    CHECK(st.mode == hirs::IrsMode::reflecting);
    CHECK(st.beta == 1.0);
    for (Eigen::Index l = 0; l < 64; ++l)
        CHECK_THAT(std::abs(std::remainder(st.psi[l] - 2 * pi * double(l) * std::sin(phi), 2 * pi)), WithinAbs(0.0, 1e-9));
    CHECK((st.psi.array() >= -pi).all());
    CHECK((st.psi.array() < pi).all());
    CHECK_THAT(channel::irs_gain(AngleRad(phi), st), WithinAbs(64.0, 1e-9));
    CHECK(hirs::controller_step(h, cfg) == st); // same history, same state

    // spread above the beamwidth keeps sensing
    hirs::EstimateHistory wide;
    for (double v : {0.0, 0.1, 0.2, 0.3, 0.4})
        wide.append(v);
    CHECK(hirs::controller_step(wide, cfg).mode == hirs::IrsMode::sensing);
}

TEST_CASE("controller keeps sensing when the spread equals the threshold", "[hirs]")
{
    SystemConfig cfg;
    cfg.window = 2;
    const double bw = hirs::beamwidth_3db(cfg.irs_elements);
    // two samples 0 and d have sample std |d|/sqrt(2)
    hirs::EstimateHistory h;
    h.append(0.0);
    h.append(bw * std::sqrt(2.0));
    const double spread = *hirs::moving_std(h, 2);
    REQUIRE(spread >= bw);
    CHECK(hirs::controller_step(h, cfg).mode == hirs::IrsMode::sensing);
    hirs::EstimateHistory inside;
    inside.append(0.0);
    inside.append(0.99 * bw * std::sqrt(2.0));
    CHECK(hirs::controller_step(inside, cfg).mode == hirs::IrsMode::reflecting);
}

TEST_CASE("controller output is binary", "[hirs]")
{
    SystemConfig cfg;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> jitter(0.0, 0.02);
    hirs::EstimateHistory h;
    for (int i = 0; i < 40; ++i)
    {
        h.append(0.2 + jitter(rng));
        const auto st = hirs::controller_step(h, cfg);
        const double refl = st.beta * st.beta, sense = (1 - st.beta) * (1 - st.beta);
        CHECK((refl == 0.0 || sense == 0.0));
        CHECK(((st.mode == hirs::IrsMode::sensing) == (st.beta == 0.0)));
    }
}

TEST_CASE("matched phases maximize the surface gain", "[hirs]")
{
    const std::size_t L = 6;
    const double phi = deg2rad(-28.0);
    const double best = channel::irs_gain(AngleRad(phi), hirs::IrsState::reflecting(hirs::matched_phases(L, phi)));
    CHECK_THAT(best, WithinAbs(double(L), 1e-12));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int trial = 0; trial < 5000; ++trial)
    {
        rvec psi(static_cast<Eigen::Index>(L));
        for (auto &p : psi)
            p = u(rng);
        CHECK(channel::irs_gain(AngleRad(phi), hirs::IrsState::reflecting(psi)) <= best + 1e-12);
    }

    // the doubled-steering variant only matches at broadside
    const auto lit = hirs::matched_phases(L, phi, PhaseRule::doubled_steering);
    CHECK(channel::irs_gain(AngleRad(phi), hirs::IrsState::reflecting(lit)) < best - 1e-3);
    CHECK((hirs::matched_phases(L, 0.0, PhaseRule::doubled_steering) - hirs::matched_phases(L, 0.0)).norm() == 0.0);
}
