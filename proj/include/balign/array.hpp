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

#ifndef BALIGN_ARRAY_HPP
#define BALIGN_ARRAY_HPP

#include "common.hpp"

#include <cstddef>

namespace balign::array
{
    // Half-wavelength ULA response. Element k (0-based) carries exp(j*pi*k*sin(angle)),
    // i.e. index k corresponds to (m-1) in the usual 1-based array notation.
    inline cvec steer(std::size_t n_antennas, AngleRad angle)
    {
        if (n_antennas == 0)
            throw config_error("steer: n_antennas must be >= 1");
        const double s = angle.sin();
        cvec v(static_cast<Eigen::Index>(n_antennas));
        for (Eigen::Index k = 0; k < v.size(); ++k)
            v[k] = std::polar(1.0, pi * double(k) * s);
        return v;
    }

    // diag(0, 1, ..., n-1) * steer(n, angle); d/d(angle) steer = j*pi*cos(angle) * this
    inline cvec steer_derivative_weighted(std::size_t n_antennas, AngleRad angle)
    {
        cvec v = steer(n_antennas, angle);
        for (Eigen::Index k = 0; k < v.size(); ++k)
            v[k] *= double(k);
        return v;
    }

    // Columns are steering vectors for each angle (radians, unchecked beyond AngleRad)
    template <typename Range>
    cmat steering_matrix(std::size_t n_antennas, const Range &angles_rad)
    {
        cmat out(static_cast<Eigen::Index>(n_antennas), static_cast<Eigen::Index>(std::size(angles_rad)));
        Eigen::Index c = 0;
        for (double a : angles_rad)
            out.col(c++) = steer(n_antennas, AngleRad(a));
        return out;
    }
}

#endif
