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

#ifndef BALIGN_CODEBOOK_HPP
#define BALIGN_CODEBOOK_HPP

#include "array.hpp"
#include "config.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace balign::codebook
{
    // Angular sector [lo, hi] in radians
    struct Sector
    {
        double lo = 0;
        double hi = 0;
        bool contains(double angle) const { return angle >= lo && angle <= hi; }
    };

    // K flat-top beams with disjoint sectors tiling [-fov, fov]. The pattern of
    // codeword u toward angle a is |u^H b(a)|.
    struct Codebook
    {
        std::size_t n_antennas = 0;
        double fov_rad = 0;
        std::vector<cvec> codewords;
        std::vector<Sector> sectors;
        std::vector<bool> converged;

        std::size_t size() const { return codewords.size(); }

        // Sector index containing `angle`, or size() if outside the field of view
        std::size_t sector_of(double angle) const
        {
            for (std::size_t k = 0; k < sectors.size(); ++k)
                if (sectors[k].contains(angle))
                    return k;
            return sectors.size();
        }
    };

    // L_rf codewords stacked as columns and scaled by 1/sqrt(L_rf)
    struct Combiner
    {
        cmat matrix;
        std::vector<std::size_t> indices; // codeword indices, in column order
    };

    // Sector edges, equally spaced in sin(angle) so every sector spans the same beam-space width
    inline std::vector<Sector> partition_fov(std::size_t n_sectors, double fov_rad)
    {
        std::vector<Sector> out(n_sectors);
        const double smax = std::sin(fov_rad);
        auto edge = [&](std::size_t k)
        { return std::asin(std::clamp(-smax + 2.0 * smax * double(k) / double(n_sectors), -1.0, 1.0)); };
        for (std::size_t k = 0; k < n_sectors; ++k)
            out[k] = {edge(k), edge(k + 1)};
        out.front().lo = -fov_rad;
        out.back().hi = fov_rad;
        return out;
    }

    namespace detail
    {
        // Target magnitude per design cell: 1 in sector, 0 outside, -1 for the free transition cells
        inline std::vector<int> sector_mask(const rvec &u_grid, double u_lo, double u_hi)
        {
            const Eigen::Index G = u_grid.size();
            std::vector<int> mask(static_cast<std::size_t>(G), 0);
            Eigen::Index first = -1, last = -1;
            for (Eigen::Index g = 0; g < G; ++g)
                if (u_grid[g] >= u_lo - 1e-12 && u_grid[g] <= u_hi + 1e-12)
                {
                    mask[std::size_t(g)] = 1;
                    if (first < 0)
                        first = g;
                    last = g;
                }
            if (first < 0)
            {
                Eigen::Index best = 0;
                const double mid = 0.5 * (u_lo + u_hi);
                for (Eigen::Index g = 1; g < G; ++g)
                    if (std::abs(u_grid[g] - mid) < std::abs(u_grid[best] - mid))
                        best = g;
                mask[std::size_t(best)] = 1;
                first = last = best;
            }
            // the grid is periodic (u = -1 and u = 1 coincide), so the band wraps around
            const auto before = std::size_t((first - 1 + G) % G), after = std::size_t((last + 1) % G);
            if (mask[before] == 0)
                mask[before] = -1;
            if (mask[after] == 0)
                mask[after] = -1;
            return mask;
        }
    }

    struct FlattopResult
    {
        cvec codeword;
        bool converged = false;
        std::size_t iterations = 0;
    };

    // Magnitude least-squares flat-top synthesis by alternating projections. The design
    // grid is uniform and periodic in sin(angle), so B B^H = G I and the least-squares
    // projection onto realizable patterns is u = B q / G.
    inline FlattopResult synthesize_flattop(std::size_t n_antennas, double u_lo, double u_hi, std::size_t grid_size,
                                            std::size_t max_iterations, double tolerance)
    {
        const auto n = static_cast<Eigen::Index>(n_antennas);
        const auto G = static_cast<Eigen::Index>(grid_size);
        if (u_hi <= u_lo)
        {
            // a single direction: the matched filter is the magnitude LS optimum
            cvec mf(n);
            for (Eigen::Index k = 0; k < n; ++k)
                mf[k] = std::polar(1.0, pi * double(k) * u_lo);
            return {mf / std::sqrt(double(n)), true, 0};
        }
        rvec u_grid(G);
        for (Eigen::Index g = 0; g < G; ++g)
            u_grid[g] = -1.0 + 2.0 * double(g) / double(G);

        cmat B(n, G); // columns b(u_g)
        for (Eigen::Index g = 0; g < G; ++g)
            for (Eigen::Index k = 0; k < n; ++k)
                B(k, g) = std::polar(1.0, pi * double(k) * u_grid[g]);

        const auto mask = detail::sector_mask(u_grid, u_lo, u_hi);
        cvec q(G);
        for (Eigen::Index g = 0; g < G; ++g)
            q[g] = mask[std::size_t(g)] == 1 ? 1.0 : 0.0;

        FlattopResult res;
        cvec u = B * q / double(G);
        for (std::size_t it = 0; it < max_iterations; ++it)
        {
            const cvec p = B.adjoint() * u;
            for (Eigen::Index g = 0; g < G; ++g)
            {
                const int m = mask[std::size_t(g)];
                if (m == 1)
                    q[g] = std::abs(p[g]) > 0.0 ? p[g] / std::abs(p[g]) : cplx(1.0, 0.0);
                else if (m == 0)
                    q[g] = 0.0;
                else
                    q[g] = p[g];
            }
            cvec next = B * q / double(G);
            const double change = (next - u).norm() / std::max(u.norm(), 1e-300);
            u = std::move(next);
            res.iterations = it + 1;
            if (change < tolerance)
            {
                res.converged = true;
                break;
            }
        }
        res.codeword = u / u.norm();
        return res;
    }

    // |u^H b(angle)|^2
    inline double beam_gain(const cvec &codeword, double angle)
    {
        const cvec b = array::steer(std::size_t(codeword.size()), AngleRad(angle));
        return std::norm(codeword.dot(b));
    }

    inline std::size_t default_pattern_grid(std::size_t n_antennas) { return 4 * n_antennas; }

    inline Codebook design_flattop(std::size_t n_antennas, std::size_t n_sectors, double fov_deg,
                                   std::size_t angle_grid_size = 0, std::size_t max_iterations = 500,
                                   double tolerance = 1e-6)
    {
        if (n_antennas == 0 || n_sectors == 0)
            throw config_error("design_flattop: n_antennas and n_sectors must be >= 1");
        if (fov_deg < 0.0 || fov_deg > 90.0)
            throw config_error("design_flattop: fov must lie in [0, 90] degrees");
        const std::size_t G = angle_grid_size == 0 ? default_pattern_grid(n_antennas) : angle_grid_size;
        if (G < n_antennas)
            throw config_error("design_flattop: angle grid must have at least n_antennas points");

        Codebook cb;
        cb.n_antennas = n_antennas;
        cb.fov_rad = deg2rad(fov_deg);
        cb.sectors = partition_fov(n_sectors, cb.fov_rad);
        for (const auto &s : cb.sectors)
        {
            auto r = synthesize_flattop(n_antennas, std::sin(s.lo), std::sin(s.hi), G, max_iterations, tolerance);
            cb.codewords.push_back(std::move(r.codeword));
            cb.converged.push_back(r.converged);
        }
        return cb;
    }

    inline Codebook design_flattop(std::size_t n_antennas, const SystemConfig &cfg)
    {
        return design_flattop(n_antennas, cfg.codebook_sectors, cfg.fov_deg, cfg.pattern_grid_size,
                              cfg.flattop_iterations, cfg.flattop_tolerance);
    }

    // Distance in sin-space from u to [lo, hi]; sin-space is periodic with period 2 for
    // half-wavelength spacing, so +1 and -1 are the same beam direction.
    inline double wrapped_distance(double u, double lo, double hi)
    {
        if (u >= lo && u <= hi)
            return 0.0;
        const double below = std::fmod(lo - u + 4.0, 2.0);
        const double above = std::fmod(u - hi + 4.0, 2.0);
        return std::min(below, above);
    }

    struct PatternMetrics
    {
        double ripple_db = 0;    // max/min in-sector gain
        double leakage_db = 0;   // out-of-sector peak relative to in-sector mean (negative is good)
        double mean_gain = 0;    // in-sector mean of |u^H b|^2
    };

    // Evaluates on a uniform angle grid of `step` radians over [-fov, fov]. Angles within
    // `guard` (in sin-space) of the sector edges belong to neither region.
    inline PatternMetrics pattern_metrics(const cvec &codeword, const Sector &sector, double fov_rad, double step,
                                          double guard = 0.0)
    {
        double lo_u = std::sin(sector.lo), hi_u = std::sin(sector.hi);
        double in_min = 1e300, in_max = 0, in_sum = 0, out_max = 0;
        std::size_t in_n = 0;
        const auto n_steps = static_cast<long>(std::floor(2.0 * fov_rad / step + 1e-9));
        for (long i = 0; i <= n_steps; ++i)
        {
            const double ang = std::clamp(-fov_rad + double(i) * step, -pi / 2, pi / 2);
            const double u = std::sin(ang);
            const double gval = beam_gain(codeword, ang);
            if (u >= lo_u + guard && u <= hi_u - guard)
            {
                in_min = std::min(in_min, gval);
                in_max = std::max(in_max, gval);
                in_sum += gval;
                ++in_n;
            }
            else if (wrapped_distance(u, lo_u, hi_u) > guard && (u < lo_u || u > hi_u))
                out_max = std::max(out_max, gval);
        }
        PatternMetrics m;
        if (in_n == 0)
            return m;
        m.mean_gain = in_sum / double(in_n);
        m.ripple_db = lin2db(in_max / std::max(in_min, 1e-300));
        m.leakage_db = lin2db(std::max(out_max, 1e-300) / m.mean_gain);
        return m;
    }

    // Draws n_rf distinct codewords uniformly without replacement
    template <typename Rng>
    Combiner sample_combiner(const Codebook &cb, std::size_t n_rf, Rng &rng)
    {
        const std::size_t K = cb.size();
        if (n_rf == 0 || n_rf > K)
            throw config_error("sample_combiner: need 1 <= n_rf <= codebook size");
        std::vector<std::size_t> idx(K);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < n_rf; ++i)
        {
            std::uniform_int_distribution<std::size_t> pick(i, K - 1);
            std::swap(idx[i], idx[pick(rng)]);
        }
        idx.resize(n_rf);

        Combiner c;
        c.matrix.resize(static_cast<Eigen::Index>(cb.n_antennas), static_cast<Eigen::Index>(n_rf));
        const double scale = 1.0 / std::sqrt(double(n_rf));
        for (std::size_t j = 0; j < n_rf; ++j)
            c.matrix.col(Eigen::Index(j)) = cb.codewords[idx[j]] * scale;
        c.indices = std::move(idx);
        return c;
    }

    // Unit-norm flat-top codeword covering the whole field of view
    inline cvec quasi_omni(std::size_t n_antennas, const SystemConfig &cfg)
    {
        const double edge = std::sin(deg2rad(cfg.fov_deg));
        const std::size_t G = cfg.pattern_grid_size == 0 ? default_pattern_grid(n_antennas) : cfg.pattern_grid_size;
        return synthesize_flattop(n_antennas, -edge, edge, G, cfg.flattop_iterations, cfg.flattop_tolerance).codeword;
    }

    // Transmit beam f with aT(theta) f = u^H a(theta) for the underlying flat-top codeword u
    inline cvec tx_beam(const SystemConfig &cfg, const Codebook &bs_codebook, AngleRad theta_true)
    {
        if (cfg.tx_beam == TxBeamMode::sector)
        {
            std::size_t k = bs_codebook.sector_of(theta_true.value());
            if (k == bs_codebook.size())
                k = theta_true.value() < 0 ? 0 : bs_codebook.size() - 1;
            return bs_codebook.codewords[k].conjugate();
        }
        return quasi_omni(cfg.bs_antennas, cfg).conjugate();
    }
}

#endif
