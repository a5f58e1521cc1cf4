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

#ifndef BALIGN_CONFIG_HPP
#define BALIGN_CONFIG_HPP

#include "common.hpp"

#include <cstddef>
#include <string>

namespace balign
{
    enum class RcsModel
    {
        analytic,      // physical-aperture value of the surface
        hypothetical,  // fixed -5 dBsm comparison value
        metallic_plate // same aperture, surface frozen at beta = 1, psi = 0
    };

    enum class PhaseRule
    {
        matched,          // psi_l = 2*pi*l*sin(phi_hat), maximizes the two-way gain
        doubled_steering, // psi_l = pi*l*sin(2*phi_hat), the literal diag(b(2 phi_hat)) variant
    };

    enum class TxBeamMode
    {
        quasi_omni, // one flat-top beam covering the whole field of view
        sector      // codebook sector containing the true BS angle
    };

    // Physical and numerical configuration of one link. Defaults are the desk-scale
    // set: reference radio parameters with M = 256 and a 181 x 11 x 11 search grid.
    struct SystemConfig
    {
        double carrier_hz = 60e9;
        double subcarrier_spacing_hz = 480e3;
        std::size_t subcarriers = 256; // M
        std::size_t symbols = 14;      // N
        double cp_fraction = 0.07;     // T_cp = cp_fraction / delta_f

        std::size_t bs_antennas = 64;
        std::size_t irs_elements = 64;
        std::size_t bs_rf_chains = 4;
        std::size_t ue_rf_chains = 4;

        double tx_power_w = 1e-3;
        double noise_power_w = 1e-3 * 3.981071705534972e-09; // -84 dBm

        std::size_t window = 5; // estimates in the moving standard deviation
        std::size_t slots = 32;

        std::size_t codebook_sectors = 16;
        double fov_deg = 87.0;
        std::size_t pattern_grid_size = 0; // 0: derived from the array size
        std::size_t flattop_iterations = 500;
        double flattop_tolerance = 1e-6;

        std::size_t grid_angles = 181;
        std::size_t grid_delays = 11;
        std::size_t grid_dopplers = 11;
        double doppler_max_hz = 20e3;

        double speed_mps = 0.0;
        bool random_channel_phase = false;

        RcsModel rcs_model = RcsModel::analytic;
        double hypothetical_rcs_dbsm = -5.0;
        PhaseRule phase_rule = PhaseRule::matched;
        TxBeamMode tx_beam = TxBeamMode::quasi_omni;
        bool bs_reflecting_slots_only = false;

        double wavelength() const { return speed_of_light / carrier_hz; }
        double cp_duration() const { return cp_fraction / subcarrier_spacing_hz; }
        double symbol_duration() const { return 1.0 / subcarrier_spacing_hz + cp_duration(); }

        // Full-size reference: M = 2048 and a 400 x 20 x 20 grid
        static SystemConfig full_scale()
        {
            SystemConfig c;
            c.subcarriers = 2048;
            c.grid_angles = 400;
            c.grid_delays = 20;
            c.grid_dopplers = 20;
            return c;
        }

        // Throws config_error naming the offending field
        void validate() const
        {
            auto require = [](bool ok, const char *what)
            {
                if (!ok)
                    throw config_error(what);
            };
            require(carrier_hz > 0.0, "carrier_hz must be positive");
            require(subcarrier_spacing_hz > 0.0, "subcarrier_spacing_hz must be positive");
            require(subcarriers >= 1, "subcarriers must be >= 1");
            require(symbols >= 1, "symbols must be >= 1");
            require(cp_fraction >= 0.0, "cp_fraction must be >= 0");
            require(bs_antennas >= 1, "bs_antennas must be >= 1");
            require(irs_elements >= 1, "irs_elements must be >= 1");
            require(bs_rf_chains >= 1, "bs_rf_chains must be >= 1");
            require(ue_rf_chains >= 1, "ue_rf_chains must be >= 1");
            require(codebook_sectors >= 1, "codebook_sectors must be >= 1");
            require(ue_rf_chains <= codebook_sectors, "ue_rf_chains must not exceed codebook_sectors");
            require(bs_rf_chains <= codebook_sectors, "bs_rf_chains must not exceed codebook_sectors");
            require(tx_power_w > 0.0, "tx_power_w must be positive");
            require(noise_power_w >= 0.0, "noise_power_w must be >= 0");
            require(window >= 2, "window must be >= 2");
            require(slots >= 1, "slots must be >= 1");
            require(fov_deg > 0.0 && fov_deg <= 90.0, "fov_deg must be in (0, 90]");
            require(grid_angles >= 1, "grid_angles must be >= 1");
            require(grid_delays >= 1, "grid_delays must be >= 1");
            require(grid_dopplers >= 1, "grid_dopplers must be >= 1");
            require(doppler_max_hz >= 0.0, "doppler_max_hz must be >= 0");
            require(flattop_iterations >= 1, "flattop_iterations must be >= 1");
        }
    };
}

#endif
