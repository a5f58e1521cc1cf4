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

#include "balign/array.hpp"

#include <catch_amalgamated.hpp>

using namespace balign;
using Catch::Matchers::WithinAbs;

TEST_CASE("steering vector at broadside is all ones", "[array]")
{
    const cvec a = array::steer(4, AngleRad(0.0));
    REQUIRE(a.size() == 4);
    for (Eigen::Index k = 0; k < 4; ++k)
    {
        CHECK_THAT(a[k].real(), WithinAbs(1.0, 1e-15));
        CHECK_THAT(a[k].imag(), WithinAbs(0.0, 1e-15));
    }
}

TEST_CASE("steering vector at 30 degrees has a quarter-turn step", "[array]")
{
    const cvec a = array::steer(2, AngleRad(pi / 6));
    CHECK_THAT(a[0].real(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(a[1].real(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(a[1].imag(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("steering vector norm and conjugate symmetry", "[array]")
{
    for (double deg : {-87.0, -33.3, 0.0, 12.5, 60.0, 90.0})
    {
        const AngleRad th = AngleRad::from_degrees(deg);
        const cvec a = array::steer(64, th);
        CHECK_THAT(a.squaredNorm(), WithinAbs(64.0, 1e-10));
        CHECK(a[0] == cplx(1.0, 0.0));
        CHECK((a.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
        CHECK((array::steer(64, -th) - a.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("steering inner products are bounded by the array size", "[array]")
{
    const auto n = std::size_t(16);
    const cvec a = array::steer(n, AngleRad::from_degrees(20.0));
    CHECK_THAT(std::abs(a.dot(a)), WithinAbs(16.0, 1e-12));
    // same sine, different angle: pi - 20 deg is out of range, so use the equal-sine pair at the edges
    CHECK_THAT(std::abs(array::steer(n, AngleRad(pi / 2)).dot(array::steer(n, AngleRad(pi / 2)))), WithinAbs(16.0, 1e-12));
    for (double deg = -90.0; deg <= 90.0; deg += 0.7)
    {
        const double v = std::abs(a.dot(array::steer(n, AngleRad::from_degrees(deg))));
        CHECK(v <= 16.0 + 1e-12);
        if (std::abs(deg - 20.0) > 1e-9)
            CHECK(v < 16.0 - 1e-9);
    }
}

TEST_CASE("weighted derivative vector", "[array]")
{
    const cvec d0 = array::steer_derivative_weighted(3, AngleRad(0.0));
    CHECK(d0[0] == cplx(0.0));
    CHECK_THAT(d0[1].real(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(d0[2].real(), WithinAbs(2.0, 1e-15));

    const cvec d = array::steer_derivative_weighted(2, AngleRad(pi / 6));
    CHECK(std::abs(d[0]) == 0.0);
    CHECK_THAT(d[1].real(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(d[1].imag(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("steering matrix columns are steering vectors", "[array]")
{
    const std::vector<double> angles{-0.5, 0.0, 0.3};
    const cmat A = array::steering_matrix(8, angles);
    REQUIRE(A.cols() == 3);
    for (Eigen::Index c = 0; c < 3; ++c)
        CHECK((A.col(c) - array::steer(8, AngleRad(angles[std::size_t(c)]))).norm() < 1e-15);
}

TEST_CASE("invalid array inputs", "[array]")
{
    CHECK_THROWS_AS(AngleRad(2.0), std::domain_error);
    CHECK_THROWS_AS(AngleRad::from_degrees(-95.0), std::domain_error);
    CHECK_THROWS_AS(array::steer(0, AngleRad(0.0)), config_error);
    CHECK_NOTHROW(AngleRad(pi / 2));
}
