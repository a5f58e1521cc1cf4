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

#ifndef BALIGN_CRLB_HPP
#define BALIGN_CRLB_HPP

#include "signal.hpp"

#include <array>
#include <limits>
#include <vector>

namespace balign::crlb
{
    // Real parameters of the UE model, in FIM order
    struct Xi
    {
        double g = 1.0;     // |g_dl|
        double psi_g = 0.0; // arg g_dl
        double phi = 0.0;   // UE angle [rad]
        double tau = 0.0;   // two-way delay [s], the unit used in the UE phase exponent
        double nu = 0.0;    // two-way Doppler [Hz]
    };

    enum Param : Eigen::Index
    {
        p_g = 0,
        p_psi = 1,
        p_phi = 2,
        p_tau = 3,
        p_nu = 4
    };

    using FisherMatrix = Eigen::Matrix<double, 5, 5>;

    // Noiseless UE samples g e^{j psi_g} V^H b(phi) x[n, m] t_{n,m}(tau, nu) of one slot
    inline cmat noiseless_ue_model(const Xi &xi, const cmat &combiner, const signal::PilotFrame &pilots,
                                   const signal::TimingConstants &timing)
    {
        const cvec b = array::steer(std::size_t(combiner.rows()), AngleRad(xi.phi));
        const cvec resp = std::polar(xi.g, xi.psi_g) * (combiner.adjoint() * b);
        cmat s(resp.size(), Eigen::Index(pilots.size()));
        for (std::size_t n = 0; n < pilots.symbols; ++n)
            for (std::size_t m = 0; m < pilots.subcarriers; ++m)
                s.col(Eigen::Index(n * pilots.subcarriers + m)) =
                    resp * (pilots(n, m) * signal::phase_term(n, m, xi.tau, xi.nu, timing));
        return s;
    }

    // (2 / sigma^2) sum_s sum_{n,m} Re{ ds^H/dxi_k ds/dxi_l } with analytic partials
    inline FisherMatrix fim(const Xi &xi, const std::vector<cmat> &combiners,
                            const std::vector<signal::PilotFrame> &pilots, double sigma2,
                            const signal::TimingConstants &timing)
    {
        if (!(sigma2 > 0.0))
            throw std::domain_error("fim: noise power must be positive");
        if (combiners.size() != pilots.size())
            throw config_error("fim: one pilot frame per slot combiner required");

        FisherMatrix out = FisherMatrix::Zero();
        const AngleRad phi(xi.phi);
        const cplx rot = std::polar(1.0, xi.psi_g);
        const cplx j(0.0, 1.0);
        std::array<cvec, 5> d;
        for (std::size_t s = 0; s < combiners.size(); ++s)
        {
            const cmat &V = combiners[s];
            const auto L = std::size_t(V.rows());
            const cvec a = V.adjoint() * array::steer(L, phi);
            const cvec da = V.adjoint() * array::steer_derivative_weighted(L, phi) * (j * pi * phi.cos());
            const auto &x = pilots[s];
            for (std::size_t n = 0; n < x.symbols; ++n)
                for (std::size_t m = 0; m < x.subcarriers; ++m)
                {
                    const cplx xt = x(n, m) * signal::phase_term(n, m, xi.tau, xi.nu, timing);
                    const cvec s_nm = (xi.g * rot * xt) * a;
                    d[p_g] = (rot * xt) * a;
                    d[p_psi] = j * s_nm;
                    d[p_phi] = (xi.g * rot * xt) * da;
                    d[p_tau] = (-j * pi * double(m) * timing.delta_f) * s_nm;
                    d[p_nu] = (j * pi * double(n) * timing.t_o) * s_nm;
                    for (int k = 0; k < 5; ++k)
                        for (int l = k; l < 5; ++l)
                            out(k, l) += d[std::size_t(k)].dot(d[std::size_t(l)]).real();
                }
        }
        for (int k = 0; k < 5; ++k)
            for (int l = 0; l < k; ++l)
                out(k, l) = out(l, k);
        return out * (2.0 / sigma2);
    }

    // [I^{-1}]_{phi,phi}: the bound on phi with all other parameters as nuisance.
    // Symmetric diagonal scaling first, the delay entries are ~1e20 larger than the rest.
    inline double phi_bound_from_fim(const FisherMatrix &I)
    {
        Eigen::Matrix<double, 5, 1> scale;
        for (int k = 0; k < 5; ++k)
        {
            if (!(I(k, k) > 0.0))
                return std::numeric_limits<double>::infinity();
            scale[k] = 1.0 / std::sqrt(I(k, k));
        }
        const FisherMatrix S = scale.asDiagonal() * I * scale.asDiagonal();
        Eigen::LDLT<FisherMatrix> ldlt(S);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
            return std::numeric_limits<double>::infinity();
        Eigen::Matrix<double, 5, 1> e = Eigen::Matrix<double, 5, 1>::Zero();
        e[p_phi] = 1.0;
        const Eigen::Matrix<double, 5, 1> col = ldlt.solve(e);
        const double v = col[p_phi] * scale[p_phi] * scale[p_phi];
        return v > 0.0 ? v : std::numeric_limits<double>::infinity();
    }

    // Running sums C, C~ and C~~ over slots
    struct CrlbAccumulators
    {
        double c_phi = 0.0;
        cplx c_tilde = 0.0;
        double c_tilde2 = 0.0;

        void add(const cmat &combiner, double phi)
        {
            const auto L = std::size_t(combiner.rows());
            const cvec vb = combiner.adjoint() * array::steer(L, AngleRad(phi));
            const cvec vbt = combiner.adjoint() * array::steer_derivative_weighted(L, AngleRad(phi));
            c_phi += vb.squaredNorm();
            c_tilde += vbt.dot(vb); // b~^H V V^H b
            c_tilde2 += vbt.squaredNorm();
        }
    };

    struct CrlbValue
    {
        double value = std::numeric_limits<double>::infinity(); // [rad^2]
        bool bounded = false; // false when the closed-form denominator is not positive
    };

    // Closed-form approximate bound on Var{phi_hat} after the accumulated slots
    inline CrlbValue crlb_phi_closed(const CrlbAccumulators &acc, double g, double phi, double pilot_power,
                                     std::size_t n_symbols, std::size_t n_subcarriers, double sigma2)
    {
        const double cphi = std::cos(phi);
        const double bracket = 3.0 * (1.0 - cphi) * (1.0 - cphi) + 1.0;
        const double re = acc.c_tilde.real(), im = acc.c_tilde.imag();
        const double spread = acc.c_phi * acc.c_tilde2 - re * re * bracket - im * im;
        const double den = 2.0 * double(n_subcarriers) * double(n_symbols) * pilot_power * g * g * pi * pi * cphi * cphi * spread;
        if (!(den > 0.0))
            return {};
        return {acc.c_phi * sigma2 / den, true};
    }

    inline CrlbValue crlb_phi_closed(const Xi &xi, const std::vector<cmat> &combiners, double pilot_power,
                                     std::size_t n_symbols, std::size_t n_subcarriers, double sigma2)
    {
        CrlbAccumulators acc;
        for (const auto &V : combiners)
            acc.add(V, xi.phi);
        return crlb_phi_closed(acc, xi.g, xi.phi, pilot_power, n_symbols, n_subcarriers, sigma2);
    }
}

#endif
