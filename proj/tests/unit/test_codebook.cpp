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

#include "balign/codebook.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace balign;
using Catch::Matchers::WithinAbs;

namespace
{
    const codebook::Codebook &desk_codebook()
    {
        static const auto cb = codebook::design_flattop(64, 16, 87.0);
        return cb;
    }
}

TEST_CASE("sectors tile the field of view without overlap", "[codebook]")
{
    for (std::size_t K : {1u, 3u, 16u})
    {
        const auto s = codebook::partition_fov(K, deg2rad(87.0));
        REQUIRE(s.size() == K);
        CHECK_THAT(s.front().lo, WithinAbs(-deg2rad(87.0), 1e-12));
        CHECK_THAT(s.back().hi, WithinAbs(deg2rad(87.0), 1e-12));
        for (std::size_t k = 0; k < K; ++k)
        {
            CHECK(s[k].lo < s[k].hi);
            if (k + 1 < K)
                CHECK(s[k].hi == s[k + 1].lo);
        }
    }
}

TEST_CASE("single-direction design is the matched filter", "[codebook]")
{
    const auto cb = codebook::design_flattop(16, 1, 0.0);
    REQUIRE(cb.size() == 1);
    const cvec mf = cvec::Ones(16) / 4.0; // conj(steer(16, 0)) / sqrt(16)
    CHECK_THAT(std::abs(cb.codewords[0].dot(mf)), WithinAbs(1.0, 1e-9));
}

TEST_CASE("codewords are unit norm", "[codebook]")
{
    for (const auto &w : desk_codebook().codewords)
        CHECK_THAT(w.norm(), WithinAbs(1.0, 1e-12));
    for (const auto &w : codebook::design_flattop(8, 5, 60.0, 0, 3).codewords) // stopped early
        CHECK_THAT(w.norm(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("flat-top patterns: in-sector gain dominates the rest of the field of view", "[codebook]")
{
    const auto &cb = desk_codebook();
    const double step = deg2rad(1.0);
    for (std::size_t k = 0; k < cb.size(); ++k)
    {
        // a 64-element aperture cannot roll off faster than ~1/n in sin-space, so that band on either
        // side of each edge is excluded
        const auto m = codebook::pattern_metrics(cb.codewords[k], cb.sectors[k], cb.fov_rad, step, 1.0 / 64.0);
        INFO("sector " << k << " ripple " << m.ripple_db << " dB leakage " << m.leakage_db << " dB");
        CHECK(m.leakage_db <= -10.0);
        CHECK(m.mean_gain > 1.0);
        CHECK(m.ripple_db <= 3.0);
    }
}

TEST_CASE("flat-top synthesis stops on the tolerance and reports it", "[codebook]")
{
    const auto easy = codebook::synthesize_flattop(8, -0.2, 0.2, 32, 5000, 1e-3);
    CHECK(easy.converged);
    CHECK(easy.iterations < 5000);
    const auto capped = codebook::synthesize_flattop(64, 0.1, 0.3, 256, 2, 0.0);
    CHECK_FALSE(capped.converged);
    CHECK(capped.iterations == 2);
}

TEST_CASE("design input checks", "[codebook]")
{
    CHECK_THROWS_AS(codebook::design_flattop(0, 4, 60.0), config_error);
    CHECK_THROWS_AS(codebook::design_flattop(8, 0, 60.0), config_error);
    CHECK_THROWS_AS(codebook::design_flattop(8, 2, 95.0), config_error);
    CHECK_THROWS_AS(codebook::design_flattop(64, 2, 60.0, 32), config_error);
}

TEST_CASE("combiner sampling", "[codebook]")
{
    const auto &cb = desk_codebook();
    std::mt19937_64 rng(42);
    const auto c = codebook::sample_combiner(cb, 4, rng);
    REQUIRE(c.matrix.cols() == 4);
    CHECK_THAT(c.matrix.norm(), WithinAbs(1.0, 1e-12));
    CHECK(std::set<std::size_t>(c.indices.begin(), c.indices.end()).size() == 4);
    for (Eigen::Index j = 0; j < 4; ++j)
        CHECK((c.matrix.col(j) * 2.0 - cb.codewords[c.indices[std::size_t(j)]]).norm() < 1e-15);

    std::mt19937_64 a(7), b(7);
    CHECK(codebook::sample_combiner(cb, 4, a).indices == codebook::sample_combiner(cb, 4, b).indices);

    const auto all = codebook::sample_combiner(cb, 16, rng);
    CHECK(std::set<std::size_t>(all.indices.begin(), all.indices.end()).size() == 16);

    CHECK_THROWS_AS(codebook::sample_combiner(cb, 17, rng), config_error);
    CHECK_THROWS_AS(codebook::sample_combiner(cb, 0, rng), config_error);
}

TEST_CASE("every codeword is eventually sampled", "[codebook]")
{
    const auto &cb = desk_codebook();
    std::mt19937_64 rng(1);
    std::vector<int> count(cb.size(), 0);
    const int slots = 4000;
    for (int s = 0; s < slots; ++s)
        for (auto i : codebook::sample_combiner(cb, 4, rng).indices)
            ++count[i];
    // each count is Binomial(4000, 1/4): mean 1000, sd ~27
    for (int c : count)
        CHECK(std::abs(c - 1000) < 150);
}

TEST_CASE("transmit beams", "[codebook]")
{
    SystemConfig cfg;
    const auto &cb = desk_codebook();
    const cvec omni = codebook::tx_beam(cfg, cb, AngleRad(0.0));
    CHECK_THAT(omni.norm(), WithinAbs(1.0, 1e-12));
    double worst = 1e300;
    for (double deg = -87.0; deg <= 87.0; deg += 0.5)
    {
        const cvec a = array::steer(64, AngleRad::from_degrees(deg));
        worst = std::min(worst, std::norm(a.cwiseProduct(omni).sum()));
    }
    CHECK(worst > 0.1);

    cfg.tx_beam = TxBeamMode::sector;
    for (double deg : {-80.0, -20.0, 3.0, 44.0, 86.0})
    {
        const AngleRad th = AngleRad::from_degrees(deg);
        const cvec f = codebook::tx_beam(cfg, cb, th);
        CHECK_THAT(f.norm(), WithinAbs(1.0, 1e-12));
        const cvec a = array::steer(64, th);
        CHECK(std::norm(a.cwiseProduct(f).sum()) >= std::norm(a.cwiseProduct(omni).sum()));
    }
}
