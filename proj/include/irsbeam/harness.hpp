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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irsbeam/config.hpp"
#include "irsbeam/engine.hpp"

namespace irsbeam {
namespace harness {

/// Outcome of one Monte-Carlo trial (shared channel realization for the
/// proposed algorithm and the ZF+random baseline).
struct TrialOutcome {
    double rate_continuous = 0.0;
    std::optional<double> rate_quantized;
    double rate_baseline = 0.0;
    bool proposed_failed = false;
    bool baseline_failed = false;
    unsigned iters_used = 0;
    std::vector<double> f1_per_iter;
};

struct SweepSpec {
    std::string param; // one of: m_el, m_az, bits, p_max_dbm, k_users, trials
    std::vector<double> values;
};

/// One aggregated CSV row: mean/std of the final sum rate for one algorithm at
/// one swept value. algo is "proposed" (post-projection when the codebook is
/// discrete), "continuous" (pre-projection reference, discrete configs only)
/// or "baseline".
struct SweepRow {
    std::string sweep_param;
    double value = 0.0;
    std::string algo;
    double mean_rate = 0.0;
    double std_rate = 0.0;
    unsigned n_trials = 0;
    unsigned n_failed = 0;
    std::uint64_t seed = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct ConvergenceCase {
    arma::uword k_users = 2;
    arma::uword m_el = 1;
};

/// Iteration-indexed mean rate for one (K, M_tot) case; traces shorter than
/// the longest one are padded with their converged value before averaging.
struct ConvergenceRow {
    arma::uword k_users = 0;
    arma::uword m_tot = 0;
    unsigned iter = 0;
    double mean_f1 = 0.0;
    unsigned n_trials = 0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
};

/// Parses and validates a JSON config file; absent fields fall back to the
/// SystemConfig defaults. Throws config_error with parser context on bad input.
SystemConfig load_config(const std::string &path);
SystemConfig parse_config(const std::string &json_text);

/// Runs `trials` independent (channel, solve, baseline) trials with per-trial
/// seeds config.seed + i. Trial i's outcome does not depend on execution order
/// or on the worker count (0 = one thread per hardware core).
std::vector<TrialOutcome> run_trials(const SystemConfig &config,
                                     const engine::SolveOptions &opts, unsigned trials,
                                     std::uint64_t base_seed, unsigned workers = 0);

/// Monte-Carlo sweep over one config parameter. Throws config_error on an
/// unsupported parameter name; sub-solver failures are counted per point, and
/// only a point with every trial failed is fatal.
SweepResult run_sweep(const SystemConfig &config, const SweepSpec &spec);

/// Per-iteration mean rate traces for several (k_users, m_el) cases.
ConvergenceResult run_convergence(const SystemConfig &config,
                                  const std::vector<ConvergenceCase> &cases);

/// CSV emission, UTF-8 with LF endings, '.' decimal separator, 17 significant
/// digits (round-trip exact). Columns:
/// sweep_param,value,algo,mean_rate_bpshz,std_rate,n_trials,n_failed,seed
void emit_csv(const SweepResult &result, const std::string &path);
std::string format_csv(const SweepResult &result);

/// Columns: k_users,m_tot,iter,mean_f1_bpshz,n_trials
void emit_convergence_csv(const ConvergenceResult &result, const std::string &path);
std::string format_convergence_csv(const ConvergenceResult &result);

/// Locale-independent shortest-exact double formatting used by the CSV writers.
std::string format_double(double value);

} // namespace harness
} // namespace irsbeam
