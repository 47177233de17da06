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

#include <optional>
#include <vector>

#include "irsbeam/abf.hpp"
#include "irsbeam/config.hpp"
#include "irsbeam/objective.hpp"
#include "irsbeam/pbf.hpp"

namespace irsbeam {
namespace engine {

struct SolveOptions {
    unsigned max_iters = 50;
    double conv_tol_rel = 1e-5; // on the rate surrogate between iterations
    bool record_trace = false;  // also record the per-step surrogate chain

    void validate() const;
};

/// Per-iteration record of one alternating solve. Index 0 holds the value at
/// the initial state; entry t the value after iteration t. The f2_after_*
/// vectors (filled when record_trace is set) hold the surrogate after each of
/// the three update steps of an iteration.
struct SolveTrace {
    std::vector<double> f1_per_iter;
    std::vector<double> f2_per_iter;
    unsigned iters_used = 0;
    bool converged = false;
    double final_rate_continuous = 0.0;
    std::optional<double> final_rate_quantized; // present when the codebook is discrete
    std::vector<double> f2_after_alpha;
    std::vector<double> f2_after_abf;
    std::vector<double> f2_after_pbf;
    arma::uword dual_slack_total = 0; // phase-solver slack coordinates, summed over iterations
};

struct SolveResult {
    objective::BeamformerState state; // continuous converged point
    SolveTrace trace;
};

struct BaselineResult {
    objective::BeamformerState state;
    double rate = 0.0;
};

/// Alternating maximization of the weighted sum rate: per iteration updates
/// alpha, then (beta, P) with the power bisection, then (rho, theta) with the
/// relaxed-QCQP phase solve, until the surrogate's relative change drops below
/// conv_tol_rel or max_iters is hit. With a discrete codebook the converged
/// phases are projected once at the end and the post-projection rate recorded.
/// rng is consumed only for the initial phases (m_tot uniform draws).
SolveResult run_wsm(const SystemConfig &config, const channel::ChannelSet &channels,
                    const SolveOptions &opts, Rng &rng);

/// Zero-forcing precoding over random IRS phases; no iteration.
BaselineResult run_baseline(const SystemConfig &config, const channel::ChannelSet &channels,
                            Rng &rng);

/// True iff the last two surrogate values satisfy |f(t) - f(t-1)| <= tol |f(t)|.
bool check_convergence(const std::vector<double> &f2_values, const SolveOptions &opts);

} // namespace engine
} // namespace irsbeam
