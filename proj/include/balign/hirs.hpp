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

#ifndef BALIGN_HIRS_HPP
#define BALIGN_HIRS_HPP

#include "array.hpp"
#include "config.hpp"

#include <optional>
#include <vector>

namespace balign::hirs
{
    enum class IrsMode
    {
        sensing,
        reflecting
    };

    // Common reflection amplitude beta and per-element reflection phases psi.
    // The sensed share is (1 - beta); sensing phases are fixed to zero.
    struct IrsState
    {
        double beta = 0.0;
        rvec psi;
        IrsMode mode = IrsMode::sensing;

        std::size_t elements() const { return static_cast<std::size_t>(psi.size()); }

        static IrsState sensing(std::size_t n_elements)
        {
            return {0.0, rvec::Zero(static_cast<Eigen::Index>(n_elements)), IrsMode::sensing};
        }
        static IrsState reflecting(rvec phases)
        {
            return {1.0, std::move(phases), IrsMode::reflecting};
        }
        friend bool operator==(const IrsState &a, const IrsState &b)
        {
            return a.beta == b.beta && a.mode == b.mode && a.psi.size() == b.psi.size() && a.psi == b.psi;
        }
    };

    using ReflectionMatrix = Eigen::DiagonalMatrix<cplx, Eigen::Dynamic>;
    using SensingMatrix = Eigen::DiagonalMatrix<double, Eigen::Dynamic>;

    // diag(beta * exp(j psi_l))
    inline ReflectionMatrix reflection_matrix(const IrsState &state)
    {
        if (state.beta < 0.0 || state.beta > 1.0)
            throw config_error("reflection amplitude beta must lie in [0, 1]");
        cvec d(state.psi.size());
        for (Eigen::Index l = 0; l < d.size(); ++l)
            d[l] = std::polar(state.beta, state.psi[l]);
        return ReflectionMatrix(d);
    }

    // (1 - beta) * I
    inline SensingMatrix sensing_matrix(const IrsState &state)
    {
        if (state.beta < 0.0 || state.beta > 1.0)
            throw config_error("reflection amplitude beta must lie in [0, 1]");
        return SensingMatrix(rvec::Constant(state.psi.size(), 1.0 - state.beta));
    }

    // 3 dB beamwidth of an n-element half-wavelength ULA [rad]
    inline double beamwidth_3db(std::size_t n_antennas)
    {
        if (n_antennas == 0)
            throw std::domain_error("beamwidth_3db: n_antennas must be >= 1");
        const double arg = 2.0 * 1.391 / (pi * double(n_antennas));
        if (arg > 1.0)
            throw std::domain_error("beamwidth_3db: arccos argument exceeds 1");
        return 2.0 * (pi / 2.0 - std::acos(arg));
    }

    // Per-slot UE angle estimates of one episode
    class EstimateHistory
    {
    public:
        void append(double phi_hat_rad) { values_.push_back(phi_hat_rad); }
        std::size_t size() const { return values_.size(); }
        bool empty() const { return values_.empty(); }
        double latest() const { return values_.back(); }
        const std::vector<double> &values() const { return values_; }

    private:
        std::vector<double> values_;
    };

    // Sample standard deviation (divisor window - 1) of the last `window` estimates
    inline std::optional<double> moving_std(const EstimateHistory &history, std::size_t window)
    {
        if (window < 2)
            throw config_error("moving_std: window must be >= 2");
        if (history.size() < window)
            return std::nullopt;
        const auto &v = history.values();
        const auto first = v.end() - static_cast<std::ptrdiff_t>(window);
        double mean = 0.0;
        for (auto it = first; it != v.end(); ++it)
            mean += *it;
        mean /= double(window);
        double ss = 0.0;
        for (auto it = first; it != v.end(); ++it)
            ss += (*it - mean) * (*it - mean);
        return std::sqrt(ss / double(window - 1));
    }

    // Reflection phases steering the reflected beam back along phi_hat
    inline rvec matched_phases(std::size_t n_elements, double phi_hat, PhaseRule rule = PhaseRule::matched)
    {
        rvec psi(static_cast<Eigen::Index>(n_elements));
        const double s = rule == PhaseRule::matched ? 2.0 * std::sin(phi_hat) : std::sin(2.0 * phi_hat);
        for (Eigen::Index l = 0; l < psi.size(); ++l)
            psi[l] = wrap_phase(pi * double(l) * s);
        return psi;
    }

    // Slot-wise controller: sense until the last `window` estimates spread less than the
    // 3 dB beamwidth, then reflect toward the latest estimate. A spread equal to the
    // threshold keeps sensing. Without new estimates the output is unchanged.
    inline IrsState controller_step(const EstimateHistory &history, const SystemConfig &cfg)
    {
        const auto spread = moving_std(history, cfg.window);
        if (!spread || *spread >= beamwidth_3db(cfg.irs_elements))
            return IrsState::sensing(cfg.irs_elements);
        return IrsState::reflecting(matched_phases(cfg.irs_elements, history.latest(), cfg.phase_rule));
    }
}

#endif
