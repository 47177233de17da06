// SPDX-License-Identifier: Apache-2.0
//
// irsbeam - joint active/passive beamforming for distributed-IRS mmWave downlink
// Copyright (C) 2026 irsbeam contributors
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

#include "irsbeam/harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "irsbeam/errors.hpp"

namespace irsbeam {
namespace harness {

namespace {

using nlohmann::json;

// distinct sub-streams per trial so a failed solve cannot shift the baseline draws
constexpr std::uint64_t kSolveStreamSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kBaselineStreamSalt = 0xbf58476d1ce4e5b9ULL;

void expect_keys(const json &j, const char *context,
                 std::initializer_list<const char *> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char *key : allowed)
            if (it.key() == key)
                known = true;
        if (!known)
            throw config_error(std::string(context) + ": unknown field '" + it.key() + "'");
    }
}

double get_double(const json &j, const char *key, double fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number())
        throw config_error(std::string("config field '") + key + "' must be a number");
    return j[key].get<double>();
}

arma::uword get_uint(const json &j, const char *key, arma::uword fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number_unsigned())
        throw config_error(std::string("config field '") + key +
                           "' must be a non-negative integer");
    return j[key].get<arma::uword>();
}

arma::vec2 get_point(const json &j, const char *key, const arma::vec2 &fallback) {
    if (!j.contains(key))
        return fallback;
    const auto &node = j[key];
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number())
        throw config_error(std::string("config field '") + key + "' must be [x, y] in meters");
    return {node[0].get<double>(), node[1].get<double>()};
}

double mean_of(const std::vector<double> &v) {
    if (v.empty())
        return 0.0;
    double sum = 0.0;
    for (double x : v)
        sum += x;
    return sum / static_cast<double>(v.size());
}

double sample_std(const std::vector<double> &v, double mean) {
    if (v.size() < 2)
        return 0.0;
    double sq = 0.0;
    for (double x : v)
        sq += (x - mean) * (x - mean);
    return std::sqrt(sq / static_cast<double>(v.size() - 1));
}

SystemConfig apply_sweep_value(const SystemConfig &base, const std::string &param,
                               double value) {
    SystemConfig cfg = base;
    const auto as_uint = [&](const char *name) -> arma::uword {
        if (!(value >= 0.0) || value != std::floor(value))
            throw config_error(std::string("sweep value for ") + name +
                               " must be a non-negative integer");
        return static_cast<arma::uword>(value);
    };
    if (param == "m_el")
        cfg.m_el = as_uint("m_el");
    else if (param == "m_az")
        cfg.m_az = as_uint("m_az");
    else if (param == "bits")
        cfg.codebook = pbf::PhaseCodebook::discrete(static_cast<unsigned>(as_uint("bits")));
    else if (param == "p_max_dbm")
        cfg.p_max_dbm = value;
    else if (param == "k_users")
        cfg.k_users = as_uint("k_users");
    else if (param == "trials")
        cfg.trials = static_cast<unsigned>(as_uint("trials"));
    else
        throw config_error("run_sweep: unsupported sweep parameter '" + param + "'");
    return cfg;
}

struct PointStats {
    std::vector<double> continuous;
    std::vector<double> quantized;
    std::vector<double> baseline;
    unsigned proposed_failed = 0;
    unsigned baseline_failed = 0;
};

PointStats collect_point(const SystemConfig &cfg, unsigned trials, std::uint64_t seed) {
    engine::SolveOptions opts; // defaults: 50 iterations, 1e-5 relative tolerance
    const std::vector<TrialOutcome> outcomes = run_trials(cfg, opts, trials, seed);

    PointStats stats;
    for (const TrialOutcome &o : outcomes) {
        if (o.proposed_failed) {
            ++stats.proposed_failed;
        } else {
            stats.continuous.push_back(o.rate_continuous);
            if (o.rate_quantized)
                stats.quantized.push_back(*o.rate_quantized);
        }
        if (o.baseline_failed)
            ++stats.baseline_failed;
        else
            stats.baseline.push_back(o.rate_baseline);
    }
    if (stats.continuous.empty())
        throw numeric_failure("all proposed trials failed at one sweep point");
    return stats;
}

} // namespace

SystemConfig parse_config(const std::string &json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object())
        throw config_error("config root must be a JSON object");

    expect_keys(j, "config",
                {"n_bs", "g_irs", "k_users", "m_az", "m_el", "bits", "p_max_dbm", "noise_dbm",
                 "n_paths", "weights", "geometry", "pathloss", "seed", "trials"});

    SystemConfig cfg;
    cfg.n_bs = get_uint(j, "n_bs", cfg.n_bs);
    cfg.g_irs = get_uint(j, "g_irs", cfg.g_irs);
    cfg.k_users = get_uint(j, "k_users", cfg.k_users);
    cfg.m_az = get_uint(j, "m_az", cfg.m_az);
    cfg.m_el = get_uint(j, "m_el", cfg.m_el);
    cfg.p_max_dbm = get_double(j, "p_max_dbm", cfg.p_max_dbm);
    cfg.noise_dbm = get_double(j, "noise_dbm", cfg.noise_dbm);
    if (j.contains("n_paths")) {
        if (!j["n_paths"].is_number_integer() || j["n_paths"].get<long long>() < 0)
            throw config_error("config field 'n_paths' must be a non-negative integer");
        cfg.n_paths = j["n_paths"].get<int>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw config_error("config field 'seed' must be a non-negative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    cfg.trials = static_cast<unsigned>(get_uint(j, "trials", cfg.trials));

    if (j.contains("bits")) {
        const auto &node = j["bits"];
        if (node.is_string() && node.get<std::string>() == "continuous") {
            cfg.codebook = pbf::PhaseCodebook::continuous();
        } else if (node.is_number_unsigned()) {
            try {
                cfg.codebook = pbf::PhaseCodebook::discrete(node.get<unsigned>());
            } catch (const std::invalid_argument &e) {
                throw config_error(e.what());
            }
        } else {
            throw config_error("config field 'bits' must be \"continuous\" or an integer >= 1");
        }
    }

    if (j.contains("weights")) {
        const auto &node = j["weights"];
        if (node.is_string() && node.get<std::string>() == "equal") {
            cfg.weights.reset();
        } else if (node.is_array()) {
            arma::vec w(node.size());
            for (std::size_t i = 0; i < node.size(); ++i) {
                if (!node[i].is_number())
                    throw config_error("config field 'weights' must hold numbers");
                w[i] = node[i].get<double>();
            }
            cfg.weights = w;
        } else {
            throw config_error("config field 'weights' must be \"equal\" or an array");
        }
    }

    if (j.contains("geometry")) {
        const auto &node = j["geometry"];
        if (!node.is_object())
            throw config_error("config field 'geometry' must be an object");
        expect_keys(node, "geometry", {"bs_pos", "irs_pos", "user_center", "user_radius"});
        cfg.geometry.bs_pos = get_point(node, "bs_pos", cfg.geometry.bs_pos);
        cfg.geometry.user_center = get_point(node, "user_center", cfg.geometry.user_center);
        cfg.geometry.user_radius = get_double(node, "user_radius", cfg.geometry.user_radius);
        if (node.contains("irs_pos")) {
            const auto &list = node["irs_pos"];
            if (!list.is_array())
                throw config_error("geometry field 'irs_pos' must be an array of [x, y]");
            cfg.geometry.irs_pos.clear();
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (!list[i].is_array() || list[i].size() != 2)
                    throw config_error("geometry field 'irs_pos' must be an array of [x, y]");
                cfg.geometry.irs_pos.push_back(
                    arma::vec2{list[i][0].get<double>(), list[i][1].get<double>()});
            }
        }
    }

    if (j.contains("pathloss")) {
        const auto &node = j["pathloss"];
        if (!node.is_object())
            throw config_error("config field 'pathloss' must be an object");
        expect_keys(node, "pathloss",
                    {"rho_a", "rho_b", "sigma_xi_db", "gain_tx_dbi", "gain_rx_dbi"});
        cfg.pathloss.rho_a = get_double(node, "rho_a", cfg.pathloss.rho_a);
        cfg.pathloss.rho_b = get_double(node, "rho_b", cfg.pathloss.rho_b);
        cfg.pathloss.sigma_xi_db = get_double(node, "sigma_xi_db", cfg.pathloss.sigma_xi_db);
        cfg.pathloss.gain_tx_dbi = get_double(node, "gain_tx_dbi", cfg.pathloss.gain_tx_dbi);
        cfg.pathloss.gain_rx_dbi = get_double(node, "gain_rx_dbi", cfg.pathloss.gain_rx_dbi);
    }

    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<TrialOutcome> run_trials(const SystemConfig &config,
                                     const engine::SolveOptions &opts, unsigned trials,
                                     std::uint64_t base_seed, unsigned workers) {
    config.validate();
    std::vector<TrialOutcome> outcomes(trials);

    const auto run_one = [&](unsigned i) {
        const std::uint64_t trial_seed = base_seed + i;
        TrialOutcome &out = outcomes[i];

        Rng channel_rng(trial_seed);
        const channel::ChannelSet channels = channel::synth_scenario(config, channel_rng);

        try {
            Rng solve_rng(trial_seed ^ kSolveStreamSalt);
            const engine::SolveResult res = engine::run_wsm(config, channels, opts, solve_rng);
            out.rate_continuous = res.trace.final_rate_continuous;
            out.rate_quantized = res.trace.final_rate_quantized;
            out.iters_used = res.trace.iters_used;
            out.f1_per_iter = res.trace.f1_per_iter;
        } catch (const numeric_failure &) {
            out.proposed_failed = true;
        }

        try {
            Rng baseline_rng(trial_seed ^ kBaselineStreamSalt);
            out.rate_baseline = engine::run_baseline(config, channels, baseline_rng).rate;
        } catch (const zf_infeasible &) {
            out.baseline_failed = true;
        } catch (const numeric_failure &) {
            out.baseline_failed = true;
        }
    };

    if (workers == 0)
        workers = std::thread::hardware_concurrency();
    workers = std::min(workers, trials);
    if (workers <= 1) {
        for (unsigned i = 0; i < trials; ++i)
            run_one(i);
        return outcomes;
    }

    std::atomic<unsigned> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (unsigned i = next.fetch_add(1); i < trials; i = next.fetch_add(1))
                run_one(i);
        });
    }
    for (auto &t : pool)
        t.join();
    return outcomes;
}

SweepResult run_sweep(const SystemConfig &config, const SweepSpec &spec) {
    if (spec.values.empty())
        throw config_error("run_sweep: no sweep values given");

    SweepResult result;
    for (double value : spec.values) {
        const SystemConfig cfg = apply_sweep_value(config, spec.param, value);
        cfg.validate();
        const PointStats stats = collect_point(cfg, cfg.trials, cfg.seed);

        const auto push_row = [&](const std::string &algo, const std::vector<double> &rates,
                                  unsigned failed) {
            SweepRow row;
            row.sweep_param = spec.param;
            row.value = value;
            row.algo = algo;
            row.mean_rate = mean_of(rates);
            row.std_rate = sample_std(rates, row.mean_rate);
            row.n_trials = cfg.trials;
            row.n_failed = failed;
            row.seed = cfg.seed;
            result.rows.push_back(row);
        };

        if (cfg.codebook.is_continuous()) {
            push_row("proposed", stats.continuous, stats.proposed_failed);
        } else {
            push_row("proposed", stats.quantized, stats.proposed_failed);
            push_row("continuous", stats.continuous, stats.proposed_failed);
        }
        push_row("baseline", stats.baseline, stats.baseline_failed);
    }
    return result;
}

ConvergenceResult run_convergence(const SystemConfig &config,
                                  const std::vector<ConvergenceCase> &cases) {
    ConvergenceResult result;
    for (const ConvergenceCase &c : cases) {
        SystemConfig cfg = config;
        cfg.k_users = c.k_users;
        cfg.m_el = c.m_el;
        cfg.validate();

        engine::SolveOptions opts;
        const std::vector<TrialOutcome> outcomes = run_trials(cfg, opts, cfg.trials, cfg.seed);

        std::size_t longest = 0;
        unsigned used = 0;
        for (const TrialOutcome &o : outcomes)
            if (!o.proposed_failed && !o.f1_per_iter.empty()) {
                longest = std::max(longest, o.f1_per_iter.size());
                ++used;
            }
        if (used == 0)
            throw numeric_failure("all proposed trials failed in a convergence case");

        for (std::size_t it = 0; it < longest; ++it) {
            double sum = 0.0;
            for (const TrialOutcome &o : outcomes) {
                if (o.proposed_failed || o.f1_per_iter.empty())
                    continue;
                // converged traces hold their final value
                sum += it < o.f1_per_iter.size() ? o.f1_per_iter[it] : o.f1_per_iter.back();
            }
            ConvergenceRow row;
            row.k_users = cfg.k_users;
            row.m_tot = cfg.array_geometry().m_tot();
            row.iter = static_cast<unsigned>(it);
            row.mean_f1 = sum / static_cast<double>(used);
            row.n_trials = used;
            result.rows.push_back(row);
        }
    }
    return result;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_csv(const SweepResult &result) {
    std::string out = "sweep_param,value,algo,mean_rate_bpshz,std_rate,n_trials,n_failed,seed\n";
    for (const SweepRow &row : result.rows) {
        out += row.sweep_param;
        out += ',';
        out += format_double(row.value);
        out += ',';
        out += row.algo;
        out += ',';
        out += format_double(row.mean_rate);
        out += ',';
        out += format_double(row.std_rate);
        out += ',';
        out += std::to_string(row.n_trials);
        out += ',';
        out += std::to_string(row.n_failed);
        out += ',';
        out += std::to_string(row.seed);
        out += '\n';
    }
    return out;
}

std::string format_convergence_csv(const ConvergenceResult &result) {
    std::string out = "k_users,m_tot,iter,mean_f1_bpshz,n_trials\n";
    for (const ConvergenceRow &row : result.rows) {
        out += std::to_string(row.k_users);
        out += ',';
        out += std::to_string(row.m_tot);
        out += ',';
        out += std::to_string(row.iter);
        out += ',';
        out += format_double(row.mean_f1);
        out += ',';
        out += std::to_string(row.n_trials);
        out += '\n';
    }
    return out;
}

namespace {
void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open output file: " + path);
    out << content;
    if (!out)
        throw io_error("write failed: " + path);
}
} // namespace

void emit_csv(const SweepResult &result, const std::string &path) {
    write_file(path, format_csv(result));
}

void emit_convergence_csv(const ConvergenceResult &result, const std::string &path) {
    write_file(path, format_convergence_csv(result));
}

} // namespace harness
} // namespace irsbeam
