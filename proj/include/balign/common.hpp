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

#ifndef BALIGN_COMMON_HPP
#define BALIGN_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace balign
{
    using cplx = std::complex<double>;
    using cvec = Eigen::VectorXcd;
    using cmat = Eigen::MatrixXcd;
    using rvec = Eigen::VectorXd;
    using rmat = Eigen::MatrixXd;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double speed_of_light = 299792458.0; // [m/s]

    // Raised for invalid user-facing parameters (bad sizes, n_rf > K, ...)
    class config_error : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    inline double deg2rad(double deg) { return deg * pi / 180.0; }
    inline double rad2deg(double rad) { return rad * 180.0 / pi; }
    inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }
    inline double lin2db(double lin) { return 10.0 * std::log10(lin); }

    // Wraps a phase to [-pi, pi)
    inline double wrap_phase(double x)
    {
        double y = std::fmod(x + pi, 2.0 * pi);
        if (y < 0.0)
            y += 2.0 * pi;
        return y - pi;
    }

    // Angle in radians, restricted to the ULA field [-pi/2, pi/2]
    class AngleRad
    {
    public:
        AngleRad() = default;
        explicit AngleRad(double rad) : value_(rad)
        {
            if (!(std::abs(rad) <= pi / 2.0 + 1e-12))
                throw std::domain_error("AngleRad: angle " + std::to_string(rad) + " rad outside [-pi/2, pi/2]");
        }
        static AngleRad from_degrees(double deg) { return AngleRad(deg2rad(deg)); }

        double value() const { return value_; }
        double degrees() const { return rad2deg(value_); }
        double sin() const { return std::sin(value_); }
        double cos() const { return std::cos(value_); }

        AngleRad operator-() const { return AngleRad(-value_); }
        friend bool operator==(const AngleRad &, const AngleRad &) = default;

    private:
        double value_ = 0.0;
    };
}

#endif
