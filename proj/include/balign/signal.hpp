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

#ifndef BALIGN_SIGNAL_HPP
#define BALIGN_SIGNAL_HPP

#include "channel.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <string>

namespace balign::signal
{
    struct TimingConstants
    {
        double delta_f = 0; // subcarrier spacing [Hz]
        double t_cp = 0;    // cyclic prefix [s]
        double t_o = 0;     // OFDM symbol incl. prefix [s]

        static TimingConstants from(const SystemConfig &cfg)
        {
            return {cfg.subcarrier_spacing_hz, cfg.cp_duration(), cfg.symbol_duration()};
        }
        // The post-DFT model is only valid while the echo stays inside the prefix
        bool cp_valid(double tau0) const { return t_cp >= tau0; }
    };

    // Pilot grid x[n, m] stored with linear index n * M + m
    struct PilotFrame
    {
        std::size_t symbols = 0;
        std::size_t subcarriers = 0;
        cvec x;

        std::size_t size() const { return symbols * subcarriers; }
        cplx operator()(std::size_t n, std::size_t m) const { return x[Eigen::Index(n * subcarriers + m)]; }
        double energy() const { return x.squaredNorm(); }
    };

    // Per-slot observation: one column of `samples` per (n, m), rows are RF chains
    struct Observation
    {
        std::size_t symbols = 0;
        std::size_t subcarriers = 0;
        cmat samples;
        auto at(std::size_t n, std::size_t m) const { return samples.col(Eigen::Index(n * subcarriers + m)); }
    };
    using ObservationUE = Observation;
    using ObservationBS = Observation;

    // i.i.d. QPSK symbols with |x|^2 = P_t
    template <typename Rng>
    PilotFrame gen_pilots(std::size_t n_symbols, std::size_t n_subcarriers, double tx_power, Rng &rng)
    {
        PilotFrame p{n_symbols, n_subcarriers, cvec(Eigen::Index(n_symbols * n_subcarriers))};
        const double a = std::sqrt(tx_power / 2.0);
        std::uniform_int_distribution<int> bit(0, 1);
        for (Eigen::Index k = 0; k < p.x.size(); ++k)
        {
            const double re = bit(rng) ? a : -a;
            const double im = bit(rng) ? a : -a;
            p.x[k] = {re, im};
        }
        return p;
    }

    // exp(-j*pi*(m*delta_f*tau - n*T_o*nu)); tau, nu are two-way quantities so this is the
    // UE-side exponent. The BS exponent is its square.
    inline cplx phase_term(std::size_t n, std::size_t m, double tau, double nu, const TimingConstants &timing)
    {
        return std::polar(1.0, -pi * (double(m) * timing.delta_f * tau - double(n) * timing.t_o * nu));
    }

    // Separable factors of phase_term: delay part over m, Doppler part over n
    inline cvec delay_phases(std::size_t n_subcarriers, double tau, const TimingConstants &timing, double scale = 1.0)
    {
        cvec d(static_cast<Eigen::Index>(n_subcarriers));
        for (Eigen::Index m = 0; m < d.size(); ++m)
            d[m] = std::polar(1.0, -scale * pi * double(m) * timing.delta_f * tau);
        return d;
    }
    inline cvec doppler_phases(std::size_t n_symbols, double nu, const TimingConstants &timing, double scale = 1.0)
    {
        cvec e(static_cast<Eigen::Index>(n_symbols));
        for (Eigen::Index n = 0; n < e.size(); ++n)
            e[n] = std::polar(1.0, scale * pi * double(n) * timing.t_o * nu);
        return e;
    }

    namespace detail
    {
        // samples(:, k) = response * x[k] * t_k^scale + CN(0, noise_power I)
        template <typename Rng>
        Observation synthesize(const cvec &response, const PilotFrame &pilots, double tau, double nu, double scale,
                               const TimingConstants &timing, double noise_power, Rng &rng)
        {
            Observation o{pilots.symbols, pilots.subcarriers, cmat(response.size(), Eigen::Index(pilots.size()))};
            const cvec d = delay_phases(pilots.subcarriers, tau, timing, scale);
            const cvec e = doppler_phases(pilots.symbols, nu, timing, scale);
            for (std::size_t n = 0; n < pilots.symbols; ++n)
                for (std::size_t m = 0; m < pilots.subcarriers; ++m)
                {
                    const std::size_t k = n * pilots.subcarriers + m;
                    o.samples.col(Eigen::Index(k)) = response * (pilots.x[Eigen::Index(k)] * e[Eigen::Index(n)] * d[Eigen::Index(m)]);
                }
            if (noise_power > 0.0)
            {
                std::normal_distribution<double> w(0.0, std::sqrt(noise_power / 2.0));
                for (Eigen::Index k = 0; k < o.samples.size(); ++k)
                {
                    const double re = w(rng);
                    const double im = w(rng);
                    o.samples.data()[k] += cplx(re, im);
                }
            }
            return o;
        }
    }

    // g_dl = h_dl a^T(theta) f
    inline cplx downlink_gain(const channel::ScenarioTruth &truth, const cvec &f)
    {
        const cvec a = array::steer(std::size_t(f.size()), truth.theta);
        return truth.h_dl * a.cwiseProduct(f).sum();
    }

    // g_ul = h(Phi) a^T(theta) f
    inline cplx uplink_gain(const channel::ScenarioTruth &truth, const hirs::IrsState &irs, const cvec &f)
    {
        const cvec a = array::steer(std::size_t(f.size()), truth.theta);
        return channel::two_way_coeff(truth.phi, irs, truth.h_dl, truth.h_ul) * a.cwiseProduct(f).sum();
    }

    // Effective UE combiner V = D U
    inline cmat sensing_combiner(const hirs::IrsState &irs, const cmat &ue_combiner)
    {
        if (std::size_t(ue_combiner.rows()) != irs.elements())
            throw config_error("sensing_combiner: combiner rows must equal the surface size");
        return hirs::sensing_matrix(irs) * ue_combiner;
    }

    // y[n, m] = g_dl V^H b(phi) x[n, m] t_{n,m}(tau0, nu0) + w[n, m]
    template <typename Rng>
    ObservationUE synth_ue(const channel::ScenarioTruth &truth, const hirs::IrsState &irs, const cmat &ue_combiner,
                           const cvec &f, const PilotFrame &pilots, double noise_power, const TimingConstants &timing,
                           Rng &rng)
    {
        const cmat V = sensing_combiner(irs, ue_combiner);
        const cvec b = array::steer(irs.elements(), truth.phi);
        const cvec response = downlink_gain(truth, f) * (V.adjoint() * b);
        return detail::synthesize(response, pilots, truth.tau0, truth.nu0, 1.0, timing, noise_power, rng);
    }

    // r[n, m] = g_ul U_BS^H a(theta) x[n, m] exp(j 2 pi (n T_o nu0 - m delta_f tau0)) + n[n, m]
    template <typename Rng>
    ObservationBS synth_bs(const channel::ScenarioTruth &truth, const hirs::IrsState &irs, const cmat &bs_combiner,
                           const cvec &f, const PilotFrame &pilots, double noise_power, const TimingConstants &timing,
                           Rng &rng)
    {
        if (bs_combiner.rows() != f.size())
            throw config_error("synth_bs: combiner rows must equal the BS array size");
        const cvec a = array::steer(std::size_t(f.size()), truth.theta);
        const cvec response = uplink_gain(truth, irs, f) * (bs_combiner.adjoint() * a);
        return detail::synthesize(response, pilots, truth.tau0, truth.nu0, 2.0, timing, noise_power, rng);
    }

    // Binary dump: "BALIGNOB", u32 version, u32 reserved, u64 rows, u64 symbols, u64 subcarriers,
    // then samples ordered (n, m, row) as little-endian float64 re/im pairs.
    namespace detail
    {
        template <typename T>
        void put_le(std::ostream &os, T v)
        {
            unsigned char buf[sizeof(T)];
            std::memcpy(buf, &v, sizeof(T));
            if constexpr (std::endian::native == std::endian::big)
                std::reverse(buf, buf + sizeof(T));
            os.write(reinterpret_cast<const char *>(buf), sizeof(T));
        }
        template <typename T>
        T get_le(std::istream &is)
        {
            unsigned char buf[sizeof(T)];
            is.read(reinterpret_cast<char *>(buf), sizeof(T));
            if (!is)
                throw std::runtime_error("observation dump: truncated file");
            if constexpr (std::endian::native == std::endian::big)
                std::reverse(buf, buf + sizeof(T));
            T v;
            std::memcpy(&v, buf, sizeof(T));
            return v;
        }
        inline constexpr char dump_magic[8] = {'B', 'A', 'L', 'I', 'G', 'N', 'O', 'B'};
    }

    inline void write_observation(const std::string &path, const Observation &obs)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open " + path);
        os.write(detail::dump_magic, 8);
        detail::put_le<std::uint32_t>(os, 1);
        detail::put_le<std::uint32_t>(os, 0);
        detail::put_le<std::uint64_t>(os, std::uint64_t(obs.samples.rows()));
        detail::put_le<std::uint64_t>(os, obs.symbols);
        detail::put_le<std::uint64_t>(os, obs.subcarriers);
        for (Eigen::Index k = 0; k < obs.samples.cols(); ++k)
            for (Eigen::Index r = 0; r < obs.samples.rows(); ++r)
            {
                detail::put_le<double>(os, obs.samples(r, k).real());
                detail::put_le<double>(os, obs.samples(r, k).imag());
            }
    }

    inline Observation read_observation(const std::string &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw std::runtime_error("cannot open " + path);
        char magic[8];
        is.read(magic, 8);
        if (!is || std::memcmp(magic, detail::dump_magic, 8) != 0)
            throw std::runtime_error("observation dump: bad magic");
        if (detail::get_le<std::uint32_t>(is) != 1)
            throw std::runtime_error("observation dump: unsupported version");
        detail::get_le<std::uint32_t>(is);
        const auto rows = detail::get_le<std::uint64_t>(is);
        Observation o;
        o.symbols = detail::get_le<std::uint64_t>(is);
        o.subcarriers = detail::get_le<std::uint64_t>(is);
        o.samples.resize(Eigen::Index(rows), Eigen::Index(o.symbols * o.subcarriers));
        for (Eigen::Index k = 0; k < o.samples.cols(); ++k)
            for (Eigen::Index r = 0; r < o.samples.rows(); ++r)
            {
                const double re = detail::get_le<double>(is);
                const double im = detail::get_le<double>(is);
                o.samples(r, k) = {re, im};
            }
        return o;
    }
}

#endif
