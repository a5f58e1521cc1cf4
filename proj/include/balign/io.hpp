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

#ifndef BALIGN_IO_HPP
#define BALIGN_IO_HPP

#include "codebook.hpp"
#include "simulator.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace balign
{
    NLOHMANN_JSON_SERIALIZE_ENUM(RcsModel, {{RcsModel::analytic, "analytic"},
                                            {RcsModel::hypothetical, "hypothetical"},
                                            {RcsModel::metallic_plate, "metallic_plate"}})
    NLOHMANN_JSON_SERIALIZE_ENUM(PhaseRule, {{PhaseRule::matched, "matched"},
                                             {PhaseRule::doubled_steering, "doubled_steering"}})
    NLOHMANN_JSON_SERIALIZE_ENUM(TxBeamMode, {{TxBeamMode::quasi_omni, "quasi_omni"}, {TxBeamMode::sector, "sector"}})
}

namespace balign::io
{
    using json = nlohmann::ordered_json;

    // Result that cannot be trusted (non-finite, failed normalization)
    class numerical_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Config problem tied to a dotted key path
    class field_error : public config_error
    {
    public:
        field_error(std::string path, const std::string &what)
            : config_error(path + ": " + what), path_(std::move(path)) {}
        const std::string &path() const { return path_; }

    private:
        std::string path_;
    };

    // ---- run configuration -------------------------------------------------------------

    struct RmseSweepSettings
    {
        bool enabled = true;
        std::vector<double> snr_db{-10, -5, 0, 5, 10};
        std::vector<std::size_t> slot_counts{4, 32};
        std::size_t trials = 200;
    };

    struct SlotSweepSettings
    {
        bool enabled = true;
        double snr_db = -4.0;
        std::vector<std::size_t> slot_counts{1, 2, 4, 8, 16, 24, 32};
        std::size_t trials = 200;
        std::size_t traces = 0; // episodes dumped to traces.json
    };

    struct RcsSweepSettings
    {
        bool enabled = true;
        std::vector<double> snr_db{-10, -5, 0, 5, 10};
        std::vector<RcsModel> models{RcsModel::analytic, RcsModel::hypothetical, RcsModel::metallic_plate};
        std::size_t trials = 50;
    };

    struct CrlbSettings
    {
        std::vector<double> snr_db{-10, -5, 0, 5, 10};
        std::vector<std::size_t> slot_counts{1, 4, 8, 16, 32};
        std::size_t draws = 20;
        double phi_deg = 0.0;
    };

    struct CodebookSettings
    {
        double pattern_step_deg = 0.0; // 0: the estimator angle grid
    };

    struct RunConfig
    {
        std::uint64_t seed = 1;
        std::string output_dir = "out";
        bool full_scale = false;
        SystemConfig system;
        RmseSweepSettings rmse_vs_snr;
        SlotSweepSettings se_vs_slots;
        RcsSweepSettings se_vs_snr;
        CrlbSettings crlb;
        CodebookSettings codebook;

        // System parameters in effect: the full-size radio replaces the file values under full_scale
        SystemConfig effective_system() const
        {
            SystemConfig s = system;
            if (full_scale)
            {
                const auto f = SystemConfig::full_scale();
                s.subcarriers = f.subcarriers;
                s.grid_angles = f.grid_angles;
                s.grid_delays = f.grid_delays;
                s.grid_dopplers = f.grid_dopplers;
            }
            return s;
        }
    };

    namespace detail
    {
        // Walks one JSON object, rejecting unknown keys and wrong types with the full path
        class ObjectReader
        {
        public:
            ObjectReader(const json &j, std::string path) : j_(j), path_(std::move(path))
            {
                if (!j_.is_object())
                    throw field_error(path_.empty() ? "<root>" : path_, "expected an object");
            }

            std::string sub(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

            template <typename T>
            void get(const std::string &key, T &out)
            {
                seen_.push_back(key);
                auto it = j_.find(key);
                if (it == j_.end())
                    return;
                try
                {
                    check_type<T>(*it);
                    out = it->template get<T>();
                }
                catch (const field_error &)
                {
                    throw;
                }
                catch (const std::exception &e)
                {
                    throw field_error(sub(key), std::string("invalid value (") + e.what() + ")");
                }
            }

            const json *child(const std::string &key)
            {
                seen_.push_back(key);
                auto it = j_.find(key);
                return it == j_.end() ? nullptr : &*it;
            }

            void finish() const
            {
                for (auto it = j_.begin(); it != j_.end(); ++it)
                    if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
                        throw field_error(sub(it.key()), "unknown key");
            }

        private:
            template <typename T>
            void check_type(const json &v) const
            {
                if constexpr (std::is_same_v<T, bool>)
                {
                    if (!v.is_boolean())
                        throw std::invalid_argument("expected a boolean");
                }
                else if constexpr (std::is_integral_v<T>)
                {
                    if (!v.is_number_integer() || (std::is_unsigned_v<T> && !v.is_number_unsigned()))
                        throw std::invalid_argument(std::is_unsigned_v<T> ? "expected a non-negative integer"
                                                                          : "expected an integer");
                }
                else if constexpr (std::is_floating_point_v<T>)
                {
                    if (!v.is_number())
                        throw std::invalid_argument("expected a number");
                }
                else if constexpr (std::is_enum_v<T>)
                {
                    if (!v.is_string())
                        throw std::invalid_argument("expected a string");
                    const T probe = v.template get<T>();
                    if (json(probe) != v) // unmapped strings fall back to the first enumerator
                        throw std::invalid_argument("unknown value \"" + v.template get<std::string>() + "\"");
                }
                else if constexpr (std::is_same_v<T, std::string>)
                {
                    if (!v.is_string())
                        throw std::invalid_argument("expected a string");
                }
                else // vectors
                {
                    if (!v.is_array())
                        throw std::invalid_argument("expected an array");
                    for (const auto &e : v)
                        check_type<typename T::value_type>(e);
                }
            }

            const json &j_;
            std::string path_;
            std::vector<std::string> seen_;
        };

        inline void require(bool ok, const std::string &path, const char *what)
        {
            if (!ok)
                throw field_error(path, what);
        }
    }

    inline json to_json(const SystemConfig &c)
    {
        return json{{"carrier_hz", c.carrier_hz},
                    {"subcarrier_spacing_hz", c.subcarrier_spacing_hz},
                    {"subcarriers", c.subcarriers},
                    {"symbols", c.symbols},
                    {"cp_fraction", c.cp_fraction},
                    {"bs_antennas", c.bs_antennas},
                    {"irs_elements", c.irs_elements},
                    {"bs_rf_chains", c.bs_rf_chains},
                    {"ue_rf_chains", c.ue_rf_chains},
                    {"tx_power_w", c.tx_power_w},
                    {"noise_power_w", c.noise_power_w},
                    {"window", c.window},
                    {"slots", c.slots},
                    {"codebook_sectors", c.codebook_sectors},
                    {"fov_deg", c.fov_deg},
                    {"pattern_grid_size", c.pattern_grid_size},
                    {"flattop_iterations", c.flattop_iterations},
                    {"flattop_tolerance", c.flattop_tolerance},
                    {"grid_angles", c.grid_angles},
                    {"grid_delays", c.grid_delays},
                    {"grid_dopplers", c.grid_dopplers},
                    {"doppler_max_hz", c.doppler_max_hz},
                    {"speed_mps", c.speed_mps},
                    {"random_channel_phase", c.random_channel_phase},
                    {"rcs_model", c.rcs_model},
                    {"hypothetical_rcs_dbsm", c.hypothetical_rcs_dbsm},
                    {"phase_rule", c.phase_rule},
                    {"tx_beam", c.tx_beam},
                    {"bs_reflecting_slots_only", c.bs_reflecting_slots_only}};
    }

    inline void from_json(const json &j, SystemConfig &c, const std::string &path)
    {
        detail::ObjectReader r(j, path);
        r.get("carrier_hz", c.carrier_hz);
        r.get("subcarrier_spacing_hz", c.subcarrier_spacing_hz);
        r.get("subcarriers", c.subcarriers);
        r.get("symbols", c.symbols);
        r.get("cp_fraction", c.cp_fraction);
        r.get("bs_antennas", c.bs_antennas);
        r.get("irs_elements", c.irs_elements);
        r.get("bs_rf_chains", c.bs_rf_chains);
        r.get("ue_rf_chains", c.ue_rf_chains);
        r.get("tx_power_w", c.tx_power_w);
        r.get("noise_power_w", c.noise_power_w);
        r.get("window", c.window);
        r.get("slots", c.slots);
        r.get("codebook_sectors", c.codebook_sectors);
        r.get("fov_deg", c.fov_deg);
        r.get("pattern_grid_size", c.pattern_grid_size);
        r.get("flattop_iterations", c.flattop_iterations);
        r.get("flattop_tolerance", c.flattop_tolerance);
        r.get("grid_angles", c.grid_angles);
        r.get("grid_delays", c.grid_delays);
        r.get("grid_dopplers", c.grid_dopplers);
        r.get("doppler_max_hz", c.doppler_max_hz);
        r.get("speed_mps", c.speed_mps);
        r.get("random_channel_phase", c.random_channel_phase);
        r.get("rcs_model", c.rcs_model);
        r.get("hypothetical_rcs_dbsm", c.hypothetical_rcs_dbsm);
        r.get("phase_rule", c.phase_rule);
        r.get("tx_beam", c.tx_beam);
        r.get("bs_reflecting_slots_only", c.bs_reflecting_slots_only);
        r.finish();
    }

    inline json to_json(const RunConfig &c)
    {
        return json{
            {"seed", c.seed},
            {"output_dir", c.output_dir},
            {"full_scale", c.full_scale},
            {"system", to_json(c.system)},
            {"sweeps",
             {{"rmse_vs_snr",
               {{"enabled", c.rmse_vs_snr.enabled},
                {"snr_db", c.rmse_vs_snr.snr_db},
                {"slot_counts", c.rmse_vs_snr.slot_counts},
                {"trials", c.rmse_vs_snr.trials}}},
              {"se_vs_slots",
               {{"enabled", c.se_vs_slots.enabled},
                {"snr_db", c.se_vs_slots.snr_db},
                {"slot_counts", c.se_vs_slots.slot_counts},
                {"trials", c.se_vs_slots.trials},
                {"traces", c.se_vs_slots.traces}}},
              {"se_vs_snr",
               {{"enabled", c.se_vs_snr.enabled},
                {"snr_db", c.se_vs_snr.snr_db},
                {"rcs_models", c.se_vs_snr.models},
                {"trials", c.se_vs_snr.trials}}}}},
            {"crlb",
             {{"snr_db", c.crlb.snr_db},
              {"slot_counts", c.crlb.slot_counts},
              {"draws", c.crlb.draws},
              {"phi_deg", c.crlb.phi_deg}}},
            {"codebook", {{"pattern_step_deg", c.codebook.pattern_step_deg}}}};
    }

    // Range checks on top of SystemConfig::validate, reported against key paths
    inline void validate(const RunConfig &c)
    {
        using detail::require;
        try
        {
            c.effective_system().validate();
        }
        catch (const config_error &e)
        {
            const std::string msg = e.what();
            throw field_error("system." + msg.substr(0, msg.find(' ')), msg);
        }
        auto snr_list = [&](const std::vector<double> &v, const std::string &path)
        {
            require(!v.empty(), path, "needs at least one SNR point");
            for (double x : v)
                require(std::isfinite(x), path, "SNR points must be finite");
        };
        auto slot_list = [&](const std::vector<std::size_t> &v, const std::string &path)
        {
            require(!v.empty(), path, "needs at least one slot count");
            for (auto s : v)
                require(s >= 1, path, "slot counts must be >= 1");
        };
        snr_list(c.rmse_vs_snr.snr_db, "sweeps.rmse_vs_snr.snr_db");
        slot_list(c.rmse_vs_snr.slot_counts, "sweeps.rmse_vs_snr.slot_counts");
        require(c.rmse_vs_snr.trials >= 1, "sweeps.rmse_vs_snr.trials", "must be >= 1");
        require(std::isfinite(c.se_vs_slots.snr_db), "sweeps.se_vs_slots.snr_db", "must be finite");
        slot_list(c.se_vs_slots.slot_counts, "sweeps.se_vs_slots.slot_counts");
        require(c.se_vs_slots.trials >= 1, "sweeps.se_vs_slots.trials", "must be >= 1");
        require(c.se_vs_slots.traces <= c.se_vs_slots.trials, "sweeps.se_vs_slots.traces", "must not exceed trials");
        snr_list(c.se_vs_snr.snr_db, "sweeps.se_vs_snr.snr_db");
        require(!c.se_vs_snr.models.empty(), "sweeps.se_vs_snr.rcs_models", "needs at least one model");
        require(c.se_vs_snr.trials >= 1, "sweeps.se_vs_snr.trials", "must be >= 1");
        snr_list(c.crlb.snr_db, "crlb.snr_db");
        slot_list(c.crlb.slot_counts, "crlb.slot_counts");
        require(c.crlb.draws >= 1, "crlb.draws", "must be >= 1");
        require(std::abs(c.crlb.phi_deg) < 90.0, "crlb.phi_deg", "must lie in (-90, 90)");
        require(c.codebook.pattern_step_deg >= 0.0, "codebook.pattern_step_deg", "must be >= 0");
        require(!c.output_dir.empty(), "output_dir", "must not be empty");
    }

    inline RunConfig run_config_from_json(const json &j)
    {
        RunConfig c;
        detail::ObjectReader r(j, "");
        r.get("seed", c.seed);
        r.get("output_dir", c.output_dir);
        r.get("full_scale", c.full_scale);
        if (auto s = r.child("system"))
            from_json(*s, c.system, "system");
        if (auto s = r.child("sweeps"))
        {
            detail::ObjectReader sw(*s, "sweeps");
            if (auto p = sw.child("rmse_vs_snr"))
            {
                detail::ObjectReader x(*p, "sweeps.rmse_vs_snr");
                x.get("enabled", c.rmse_vs_snr.enabled);
                x.get("snr_db", c.rmse_vs_snr.snr_db);
                x.get("slot_counts", c.rmse_vs_snr.slot_counts);
                x.get("trials", c.rmse_vs_snr.trials);
                x.finish();
            }
            if (auto p = sw.child("se_vs_slots"))
            {
                detail::ObjectReader x(*p, "sweeps.se_vs_slots");
                x.get("enabled", c.se_vs_slots.enabled);
                x.get("snr_db", c.se_vs_slots.snr_db);
                x.get("slot_counts", c.se_vs_slots.slot_counts);
                x.get("trials", c.se_vs_slots.trials);
                x.get("traces", c.se_vs_slots.traces);
                x.finish();
            }
            if (auto p = sw.child("se_vs_snr"))
            {
                detail::ObjectReader x(*p, "sweeps.se_vs_snr");
                x.get("enabled", c.se_vs_snr.enabled);
                x.get("snr_db", c.se_vs_snr.snr_db);
                x.get("rcs_models", c.se_vs_snr.models);
                x.get("trials", c.se_vs_snr.trials);
                x.finish();
            }
            sw.finish();
        }
        if (auto p = r.child("crlb"))
        {
            detail::ObjectReader x(*p, "crlb");
            x.get("snr_db", c.crlb.snr_db);
            x.get("slot_counts", c.crlb.slot_counts);
            x.get("draws", c.crlb.draws);
            x.get("phi_deg", c.crlb.phi_deg);
            x.finish();
        }
        if (auto p = r.child("codebook"))
        {
            detail::ObjectReader x(*p, "codebook");
            x.get("pattern_step_deg", c.codebook.pattern_step_deg);
            x.finish();
        }
        r.finish();
        validate(c);
        return c;
    }

    // Applies "a.b.c=value"; the value is read as JSON when it parses, else as a string
    inline void apply_override(json &doc, const std::string &assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0)
            throw field_error(assignment, "override must look like key.path=value");
        const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded())
            value = text;
        json *node = &doc;
        std::size_t start = 0;
        while (true)
        {
            const auto dot = key.find('.', start);
            const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (part.empty())
                throw field_error(key, "empty path segment");
            if (!node->is_object())
                throw field_error(key, "path runs through a non-object");
            if (dot == std::string::npos)
            {
                (*node)[part] = value;
                return;
            }
            node = &(*node)[part];
            if (node->is_null())
                *node = json::object();
            start = dot + 1;
        }
    }

    // 1-based line of the deepest key of `path` found in the source text, 0 if none
    inline std::size_t locate_key(const std::string &text, const std::string &path)
    {
        std::size_t pos = 0, found = std::string::npos;
        std::size_t start = 0;
        while (start <= path.size())
        {
            const auto dot = path.find('.', start);
            const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            const auto at = text.find("\"" + part + "\"", pos);
            if (at == std::string::npos)
                break;
            found = at;
            pos = at + part.size() + 2;
            if (dot == std::string::npos)
                break;
            start = dot + 1;
        }
        if (found == std::string::npos)
            return 0;
        return std::size_t(std::count(text.begin(), text.begin() + std::ptrdiff_t(found), '\n')) + 1;
    }

    // ---- hashing and CSV -----------------------------------------------------------------

    inline std::uint64_t fnv1a(const std::string &s)
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char ch : s)
        {
            h ^= ch;
            h *= 0x100000001b3ull;
        }
        return h;
    }

    // Identifies the experiment; the output location is not part of it
    inline std::string config_hash(const RunConfig &c)
    {
        auto doc = to_json(c);
        doc.erase("output_dir");
        char buf[17];
        auto r = std::to_chars(buf, buf + sizeof buf, fnv1a(doc.dump()), 16);
        const std::string hex(buf, r.ptr);
        return "0x" + std::string(16 - hex.size(), '0') + hex;
    }

    // Shortest round-trip text for a double; "inf" / "nan" for non-finite values
    inline std::string fmt(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[32];
        auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    }
    inline std::string fmt(std::size_t v) { return std::to_string(v); }
    inline std::string fmt(const std::string &v) { return v; }

    // Comma-separated, '.' decimal, LF line endings, '#' comment header
    class CsvTable
    {
    public:
        CsvTable(std::string title, std::vector<std::string> columns)
            : title_(std::move(title)), columns_(std::move(columns)) {}

        template <typename... Ts>
        void row(const Ts &...values)
        {
            if (sizeof...(values) != columns_.size())
                throw std::logic_error("CsvTable: row width differs from header");
            std::vector<std::string> r;
            (r.push_back(fmt(values)), ...);
            rows_.push_back(std::move(r));
        }

        // Leading value followed by a run-time sized block
        void row(double first, const std::vector<double> &rest)
        {
            if (rest.size() + 1 != columns_.size())
                throw std::logic_error("CsvTable: row width differs from header");
            std::vector<std::string> r{fmt(first)};
            for (double v : rest)
                r.push_back(fmt(v));
            rows_.push_back(std::move(r));
        }

        std::size_t rows() const { return rows_.size(); }

        std::string render(const std::string &hash, std::uint64_t seed) const
        {
            std::string out = "# balign " + title_ + "\n# config_hash=" + hash + "\n# seed=" + std::to_string(seed) + "\n";
            out += join(columns_);
            for (const auto &r : rows_)
                out += join(r);
            return out;
        }

    private:
        static std::string join(const std::vector<std::string> &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + v[i];
            return s + "\n";
        }
        std::string title_;
        std::vector<std::string> columns_;
        std::vector<std::vector<std::string>> rows_;
    };

    inline void write_text(const std::string &path, const std::string &text)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open " + path + " for writing");
        os << text;
        if (!os)
            throw std::runtime_error("write to " + path + " failed");
    }

    inline std::string read_text(const std::string &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw config_error("cannot open " + path);
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    }

    // ---- codebooks -------------------------------------------------------------------------

    inline json to_json(const codebook::Codebook &cb)
    {
        json words = json::array();
        for (const auto &w : cb.codewords)
        {
            json col = json::array();
            for (Eigen::Index i = 0; i < w.size(); ++i)
                col.push_back({w[i].real(), w[i].imag()});
            words.push_back(std::move(col));
        }
        json sectors = json::array();
        for (const auto &s : cb.sectors)
            sectors.push_back({s.lo, s.hi});
        return json{{"n_antennas", cb.n_antennas}, {"fov_rad", cb.fov_rad}, {"sectors", sectors},
                    {"converged", cb.converged}, {"codewords", words}};
    }

    inline codebook::Codebook codebook_from_json(const json &j)
    {
        try
        {
            codebook::Codebook cb;
            cb.n_antennas = j.at("n_antennas").get<std::size_t>();
            cb.fov_rad = j.at("fov_rad").get<double>();
            for (const auto &s : j.at("sectors"))
                cb.sectors.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
            cb.converged = j.at("converged").get<std::vector<bool>>();
            for (const auto &col : j.at("codewords"))
            {
                cvec w(Eigen::Index(col.size()));
                for (std::size_t i = 0; i < col.size(); ++i)
                    w[Eigen::Index(i)] = cplx(col[i].at(0).get<double>(), col[i].at(1).get<double>());
                if (std::size_t(w.size()) != cb.n_antennas)
                    throw config_error("codeword length differs from n_antennas");
                cb.codewords.push_back(std::move(w));
            }
            if (cb.codewords.size() != cb.sectors.size() || cb.converged.size() != cb.sectors.size())
                throw config_error("codewords, sectors and converged differ in length");
            return cb;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw config_error(std::string("malformed codebook: ") + e.what());
        }
    }

    // ---- episode traces --------------------------------------------------------------------

    inline json to_json(const estimator::EstimateRecord &r)
    {
        return json{{"angle_deg", rad2deg(r.angle_hat)}, {"tau_s", r.tau_hat}, {"nu_hz", r.nu_hat},
                    {"gain", {r.g_hat.real(), r.g_hat.imag()}}, {"objective", r.objective}};
    }

    inline json to_json(const sim::EpisodeResult &ep)
    {
        json slots = json::array();
        for (const auto &s : ep.slots)
        {
            json o{{"mode", s.mode == hirs::IrsMode::sensing ? "sensing" : "reflecting"},
                   {"beta", s.beta},
                   {"ue_codewords", s.ue_codewords},
                   {"bs_codewords", s.bs_codewords},
                   {"ue_estimate", s.ue ? to_json(*s.ue) : json()},
                   {"bs_estimate", s.bs ? to_json(*s.bs) : json()}};
            slots.push_back(std::move(o));
        }
        const auto &t = ep.truth;
        return json{{"seed", ep.seed},
                    {"truth",
                     {{"theta_deg", t.theta.degrees()},
                      {"phi_deg", t.phi.degrees()},
                      {"distance_m", t.distance},
                      {"tau_s", t.tau0},
                      {"nu_hz", t.nu0}}},
                    {"slots", slots},
                    {"spectral_efficiency", ep.spectral_efficiency}};
    }
}

#endif
