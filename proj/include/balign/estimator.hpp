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

#ifndef BALIGN_ESTIMATOR_HPP
#define BALIGN_ESTIMATOR_HPP

#include "signal.hpp"

#include <vector>

namespace balign::estimator
{
    // Search grid. Delays and Dopplers are two-way quantities at both ends.
    struct ParamGrid
    {
        std::vector<double> angles;   // [rad]
        std::vector<double> delays;   // [s]
        std::vector<double> dopplers; // [Hz]

        std::size_t size() const { return angles.size() * delays.size() * dopplers.size(); }

        static std::vector<double> linspace(double lo, double hi, std::size_t n)
        {
            if (n == 0)
                throw config_error("ParamGrid: axis sizes must be >= 1");
            if (n == 1)
                return {0.5 * (lo + hi)};
            std::vector<double> v(n);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = lo + (hi - lo) * double(i) / double(n - 1);
            return v;
        }

        // Angles over [-fov, fov], delays over [0, T_cp], Dopplers over [-nu_max, nu_max]
        static ParamGrid from(const SystemConfig &cfg)
        {
            ParamGrid g;
            const double fov = deg2rad(cfg.fov_deg);
            g.angles = linspace(-fov, fov, cfg.grid_angles);
            g.delays = cfg.grid_delays == 1 ? std::vector<double>{0.0} : linspace(0.0, cfg.cp_duration(), cfg.grid_delays);
            g.dopplers = linspace(-cfg.doppler_max_hz, cfg.doppler_max_hz, cfg.grid_dopplers);
            return g;
        }
    };

    struct EstimateRecord
    {
        double tau_hat = 0;
        double nu_hat = 0;
        double angle_hat = 0;
        cplx g_hat;
        double objective = 0;
        std::size_t angle_index = 0;
        std::size_t delay_index = 0;
        std::size_t doppler_index = 0;
    };

    // One UE slot: pilots, effective combiner V = D U and the observation
    struct UeSlot
    {
        signal::PilotFrame pilots;
        cmat combiner;
        signal::Observation observation;
    };

    // One BS slot: pilots, combiner U_BS and the back-scattered observation
    struct BsSlot
    {
        signal::PilotFrame pilots;
        cmat combiner;
        signal::Observation observation;
    };

    namespace detail
    {
        // z(tau, nu) = sum_k conj(x_k t_k(tau, nu)^scale) obs_k, evaluated directly
        inline cvec matched_sum(const signal::PilotFrame &pilots, const signal::Observation &obs, double tau, double nu,
                                double scale, const signal::TimingConstants &timing)
        {
            cvec z = cvec::Zero(obs.samples.rows());
            for (std::size_t n = 0; n < pilots.symbols; ++n)
                for (std::size_t m = 0; m < pilots.subcarriers; ++m)
                {
                    const cplx t = signal::phase_term(n, m, scale * tau, scale * nu, timing);
                    z += std::conj(pilots(n, m) * t) * obs.at(n, m);
                }
            return z;
        }

        // Same sum over the whole (delay, Doppler) grid. Column j * n_dopplers + i holds
        // z(delays[j], dopplers[i]). Exploits t_{n,m} = d_m(tau) e_n(nu).
        inline cmat matched_sum_grid(const signal::PilotFrame &pilots, const signal::Observation &obs,
                                     const ParamGrid &grid, double scale, const signal::TimingConstants &timing)
        {
            const auto L = obs.samples.rows();
            const auto N = Eigen::Index(pilots.symbols), M = Eigen::Index(pilots.subcarriers);
            const auto n_tau = Eigen::Index(grid.delays.size()), n_nu = Eigen::Index(grid.dopplers.size());
            if (obs.samples.cols() != N * M)
                throw config_error("matched_sum_grid: observation and pilot sizes differ");

            cmat dc(M, n_tau);
            for (Eigen::Index j = 0; j < n_tau; ++j)
                dc.col(j) = signal::delay_phases(pilots.subcarriers, grid.delays[std::size_t(j)], timing, scale).conjugate();
            cmat ec(N, n_nu);
            for (Eigen::Index i = 0; i < n_nu; ++i)
                ec.col(i) = signal::doppler_phases(pilots.symbols, grid.dopplers[std::size_t(i)], timing, scale).conjugate();

            const cmat w = (obs.samples.array().rowwise() * pilots.x.conjugate().transpose().array()).matrix();

            // q[n] = W_n * dc : L x n_tau
            std::vector<cmat> q(static_cast<std::size_t>(N));
            for (Eigen::Index n = 0; n < N; ++n)
                q[std::size_t(n)].noalias() = w.middleCols(n * M, M) * dc;

            cmat out(L, n_tau * n_nu);
            cmat qt(L, N);
            for (Eigen::Index j = 0; j < n_tau; ++j)
            {
                for (Eigen::Index n = 0; n < N; ++n)
                    qt.col(n) = q[std::size_t(n)].col(j);
                out.middleCols(j * n_nu, n_nu).noalias() = qt * ec;
            }
            return out;
        }

        inline cmat grid_steering(std::size_t n_antennas, const std::vector<double> &angles)
        {
            return array::steering_matrix(n_antennas, angles);
        }

        // Scan order (angle, delay, Doppler); the first maximizer wins
        template <typename Fn>
        EstimateRecord argmax(const ParamGrid &grid, Fn &&objective_at)
        {
            EstimateRecord best;
            bool have = false;
            for (std::size_t a = 0; a < grid.angles.size(); ++a)
                for (std::size_t j = 0; j < grid.delays.size(); ++j)
                    for (std::size_t i = 0; i < grid.dopplers.size(); ++i)
                    {
                        const double v = objective_at(a, j, i);
                        if (!have || v > best.objective)
                        {
                            best.objective = v;
                            best.angle_index = a;
                            best.delay_index = j;
                            best.doppler_index = i;
                            have = true;
                        }
                    }
            best.angle_hat = grid.angles[best.angle_index];
            best.tau_hat = grid.delays[best.delay_index];
            best.nu_hat = grid.dopplers[best.doppler_index];
            return best;
        }
    }

    // Multi-slot UE statistics. V_sum = sum_s ||x_s||^2 V_s V_s^H and the grid of
    // c(tau, nu) = sum_s V_s z_s(tau, nu) are updated as slots arrive.
    class UeAccumulator
    {
    public:
        UeAccumulator(ParamGrid grid, signal::TimingConstants timing, std::size_t n_elements)
            : grid_(std::move(grid)), timing_(timing),
              v_sum_(cmat::Zero(Eigen::Index(n_elements), Eigen::Index(n_elements))),
              c_grid_(cmat::Zero(Eigen::Index(n_elements), Eigen::Index(grid_.delays.size() * grid_.dopplers.size()))),
              steering_(detail::grid_steering(n_elements, grid_.angles))
        {
        }

        void add_slot(UeSlot slot)
        {
            if (slot.combiner.rows() != v_sum_.rows())
                throw config_error("UeAccumulator: combiner rows must equal the surface size");
            if (slot.combiner.cols() != slot.observation.samples.rows())
                throw config_error("UeAccumulator: combiner columns must equal observation rows");
            v_sum_ += slot.pilots.energy() * slot.combiner * slot.combiner.adjoint();
            c_grid_ += slot.combiner * detail::matched_sum_grid(slot.pilots, slot.observation, grid_, 1.0, timing_);
            archive_.push_back(std::move(slot));
        }

        std::size_t slots() const { return archive_.size(); }
        const cmat &v_sum() const { return v_sum_; }
        const std::vector<UeSlot> &archive() const { return archive_; }
        const ParamGrid &grid() const { return grid_; }
        const signal::TimingConstants &timing() const { return timing_; }
        const cmat &c_grid() const { return c_grid_; }
        const cmat &grid_steering() const { return steering_; }

        // c(tau, nu) recomputed from the archive at an arbitrary point
        cvec c_vector(double tau, double nu) const
        {
            cvec c = cvec::Zero(v_sum_.rows());
            for (const auto &s : archive_)
                c += s.combiner * detail::matched_sum(s.pilots, s.observation, tau, nu, 1.0, timing_);
            return c;
        }

    private:
        ParamGrid grid_;
        signal::TimingConstants timing_;
        cmat v_sum_;
        cmat c_grid_;
        cmat steering_;
        std::vector<UeSlot> archive_;
    };

    namespace detail
    {
        inline double denominator_floor(const cmat &gram) { return 1e-14 * std::max(gram.trace().real(), 1e-300); }
    }

    // |b^H(phi) c(tau, nu)|^2 / (b^H(phi) V_sum b(phi)); zero when the direction was never illuminated
    inline double ue_objective(double tau, double nu, double phi, const UeAccumulator &acc)
    {
        const cvec b = array::steer(std::size_t(acc.v_sum().rows()), AngleRad(phi));
        const double den = (b.adjoint() * acc.v_sum() * b)(0, 0).real();
        if (acc.slots() == 0 || den <= detail::denominator_floor(acc.v_sum()))
            return 0.0;
        return std::norm(b.dot(acc.c_vector(tau, nu))) / den;
    }

    // Grid maximizer of ue_objective with the closed-form gain estimate
    inline EstimateRecord ue_estimate(const UeAccumulator &acc)
    {
        if (acc.slots() == 0)
            throw std::logic_error("ue_estimate: empty archive");
        const auto &grid = acc.grid();
        const cmat &B = acc.grid_steering();
        const cmat num = B.adjoint() * acc.c_grid(); // angles x (delay, Doppler)
        const rvec den = (B.adjoint() * acc.v_sum()).cwiseProduct(B.transpose()).rowwise().sum().real();
        const double floor = detail::denominator_floor(acc.v_sum());
        const auto n_nu = grid.dopplers.size();

        auto rec = detail::argmax(grid, [&](std::size_t a, std::size_t j, std::size_t i)
                                  {
            const double d = den[Eigen::Index(a)];
            return d <= floor ? 0.0 : std::norm(num(Eigen::Index(a), Eigen::Index(j * n_nu + i))) / d; });
        const double d = den[Eigen::Index(rec.angle_index)];
        rec.g_hat = d <= floor ? cplx(0.0) : num(Eigen::Index(rec.angle_index), Eigen::Index(rec.delay_index * n_nu + rec.doppler_index)) / d;
        return rec;
    }

    // BS statistics with slot-wise gains. The objective is a sum of per-slot terms, so the
    // grid of sum_s |a^H c~_s|^2 / (a^H U~_s a) is accumulated directly.
    class BsAccumulator
    {
    public:
        BsAccumulator(ParamGrid grid, signal::TimingConstants timing, std::size_t n_antennas)
            : grid_(std::move(grid)), timing_(timing), n_antennas_(n_antennas),
              objective_(rmat::Zero(Eigen::Index(grid_.angles.size()), Eigen::Index(grid_.delays.size() * grid_.dopplers.size()))),
              steering_(detail::grid_steering(n_antennas, grid_.angles))
        {
        }

        void add_slot(BsSlot slot)
        {
            if (std::size_t(slot.combiner.rows()) != n_antennas_)
                throw config_error("BsAccumulator: combiner rows must equal the BS array size");
            if (slot.combiner.cols() != slot.observation.samples.rows())
                throw config_error("BsAccumulator: combiner columns must equal observation rows");
            const cmat proj = slot.combiner.adjoint() * steering_;                   // n_rf x angles
            const rvec den = slot.pilots.energy() * proj.colwise().squaredNorm().transpose(); // angles
            const cmat z = detail::matched_sum_grid(slot.pilots, slot.observation, grid_, 2.0, timing_);
            const cmat num = proj.adjoint() * z; // angles x (delay, Doppler)
            const double floor = 1e-14 * slot.pilots.energy() * (slot.combiner.squaredNorm() + 1e-300);
            for (Eigen::Index a = 0; a < num.rows(); ++a)
                if (den[a] > floor)
                    objective_.row(a) += num.row(a).cwiseAbs2() / den[a];
            latest_num_ = num;
            latest_den_ = den;
            archive_.push_back(std::move(slot));
        }

        std::size_t slots() const { return archive_.size(); }
        const std::vector<BsSlot> &archive() const { return archive_; }
        const ParamGrid &grid() const { return grid_; }
        const signal::TimingConstants &timing() const { return timing_; }
        std::size_t antennas() const { return n_antennas_; }
        const rmat &objective_grid() const { return objective_; }

        // Optimal gain of the most recent slot at a grid cell
        cplx latest_gain(std::size_t a, std::size_t cell) const
        {
            const double d = latest_den_[Eigen::Index(a)];
            return d > 0.0 ? latest_num_(Eigen::Index(a), Eigen::Index(cell)) / d : cplx(0.0);
        }

    private:
        ParamGrid grid_;
        signal::TimingConstants timing_;
        std::size_t n_antennas_;
        rmat objective_;
        cmat steering_;
        cmat latest_num_;
        rvec latest_den_;
        std::vector<BsSlot> archive_;
    };

    // Per-slot optimal gains a^H c~_s / (a^H U~_s a), recomputed from the archive
    inline std::vector<cplx> bs_slot_gains(double tau, double nu, double theta, const BsAccumulator &acc)
    {
        const cvec a = array::steer(acc.antennas(), AngleRad(theta));
        std::vector<cplx> out;
        for (const auto &s : acc.archive())
        {
            const cvec proj = s.combiner.adjoint() * a;
            const double den = s.pilots.energy() * proj.squaredNorm();
            const cvec z = detail::matched_sum(s.pilots, s.observation, tau, nu, 2.0, acc.timing());
            out.push_back(den > 0.0 ? proj.dot(z) / den : cplx(0.0));
        }
        return out;
    }

    // sum_s |a^H(theta) c~_s(tau, nu)|^2 / (a^H(theta) U~_s a(theta)), recomputed from the archive
    inline double bs_objective(double tau, double nu, double theta, const BsAccumulator &acc)
    {
        const cvec a = array::steer(acc.antennas(), AngleRad(theta));
        double total = 0.0;
        for (const auto &s : acc.archive())
        {
            const cvec proj = s.combiner.adjoint() * a;
            const double den = s.pilots.energy() * proj.squaredNorm();
            if (den <= 1e-14 * s.pilots.energy() * (s.combiner.squaredNorm() + 1e-300))
                continue;
            const cvec z = detail::matched_sum(s.pilots, s.observation, tau, nu, 2.0, acc.timing());
            total += std::norm(proj.dot(z)) / den;
        }
        return total;
    }

    inline EstimateRecord bs_estimate(const BsAccumulator &acc)
    {
        if (acc.slots() == 0)
            throw std::logic_error("bs_estimate: empty archive");
        const auto &grid = acc.grid();
        const auto n_nu = grid.dopplers.size();
        const rmat &obj = acc.objective_grid();
        auto rec = detail::argmax(grid, [&](std::size_t a, std::size_t j, std::size_t i)
                                  { return obj(Eigen::Index(a), Eigen::Index(j * n_nu + i)); });
        rec.g_hat = acc.latest_gain(rec.angle_index, rec.delay_index * n_nu + rec.doppler_index);
        return rec;
    }
}

#endif
