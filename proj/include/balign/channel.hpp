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

#ifndef BALIGN_CHANNEL_HPP
#define BALIGN_CHANNEL_HPP

#include "hirs.hpp"

#include <random>

namespace balign::channel
{
    // Ground truth of one LOS link. tau0 and nu0 are two-way quantities.
    struct ScenarioTruth
    {
        AngleRad theta;       // BS angle
        AngleRad phi;         // UE (surface) angle
        double distance = 0;  // [m]
        double tau0 = 0;      // [s]
        double nu0 = 0;       // [Hz]
        cplx h_dl;
        cplx h_ul;
    };

    struct LinkBudget
    {
        double wavelength = 0; // [m]
        double tx_power = 0;   // [W]
        double noise_power = 0; // [W]

        static LinkBudget from(const SystemConfig &cfg)
        {
            return {cfg.wavelength(), cfg.tx_power_w, cfg.noise_power_w};
        }
    };

    // Radar cross section of the surface before beamforming [m^2]
    inline double rcs_bbf(const SystemConfig &cfg)
    {
        const double lambda = cfg.wavelength();
        const double half = lambda / 2.0;
        const double aperture = half * double(cfg.irs_elements);
        return 4.0 * pi * aperture * aperture * half * half / (lambda * lambda);
    }

    // Before-beamforming RCS used by the link model for the configured variant
    inline double rcs_in_use(const SystemConfig &cfg)
    {
        if (cfg.rcs_model == RcsModel::hypothetical)
            return db2lin(cfg.hypothetical_rcs_dbsm);
        return rcs_bbf(cfg);
    }

    // b^T(phi) Phi^H b(phi) = sum_l b_l^2 conj(Phi_ll)
    inline cplx surface_response(AngleRad phi, const hirs::IrsState &state)
    {
        const auto refl = hirs::reflection_matrix(state);
        const cvec b = array::steer(state.elements(), phi);
        cplx acc = 0.0;
        for (Eigen::Index l = 0; l < b.size(); ++l)
            acc += b[l] * b[l] * std::conj(refl.diagonal()[l]);
        return acc;
    }

    inline cplx two_way_coeff(AngleRad phi, const hirs::IrsState &state, cplx h_dl, cplx h_ul)
    {
        if (state.psi.size() == 0)
            throw config_error("two_way_coeff: empty surface state");
        return h_dl * h_ul * surface_response(phi, state);
    }

    inline double irs_gain(AngleRad phi, const hirs::IrsState &state)
    {
        return std::abs(surface_response(phi, state));
    }

    inline double rcs_effective(AngleRad phi, const hirs::IrsState &state, const SystemConfig &cfg)
    {
        return rcs_in_use(cfg) * phi.cos() * irs_gain(phi, state);
    }

    // SNR at the UE with isotropic antennas at both ends [dB]
    inline double snr_bbf(double distance, const LinkBudget &budget)
    {
        if (!(distance > 0.0))
            throw std::domain_error("snr_bbf: distance must be positive");
        const double path = budget.wavelength / (4.0 * pi * distance);
        return lin2db(path * path * budget.tx_power / budget.noise_power);
    }

    // Inverse of snr_bbf
    inline double distance_for_snr(double snr_db, const LinkBudget &budget)
    {
        return budget.wavelength / (4.0 * pi) * std::sqrt(budget.tx_power / (budget.noise_power * db2lin(snr_db)));
    }

    // Builds the LOS truth. With a non-null rng and cfg.random_channel_phase, each leg
    // gets an extra i.i.d. uniform phase.
    template <typename Rng = std::mt19937_64>
    ScenarioTruth make_scenario(double distance, AngleRad theta, AngleRad phi, double speed_mps,
                                const SystemConfig &cfg, Rng *rng = nullptr)
    {
        if (!(distance > 0.0))
            throw std::domain_error("make_scenario: distance must be positive");
        const double lambda = cfg.wavelength();
        const double propagation_phase = -2.0 * pi * cfg.carrier_hz * distance / speed_of_light;
        double dl_phase = propagation_phase, ul_phase = propagation_phase;
        if (rng != nullptr && cfg.random_channel_phase)
        {
            std::uniform_real_distribution<double> u(-pi, pi);
            dl_phase += u(*rng);
            ul_phase += u(*rng);
        }

        ScenarioTruth t;
        t.theta = theta;
        t.phi = phi;
        t.distance = distance;
        t.tau0 = 2.0 * distance / speed_of_light;
        t.nu0 = 2.0 * speed_mps * cfg.carrier_hz / speed_of_light;
        t.h_dl = std::polar(lambda / (4.0 * pi * distance), dl_phase);
        t.h_ul = std::polar(std::sqrt(rcs_in_use(cfg) * phi.cos() / (4.0 * pi)) / distance, ul_phase);
        return t;
    }
}

#endif
