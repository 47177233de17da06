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

#include "irsbeam/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "irsbeam/errors.hpp"

namespace irsbeam {
namespace engine {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Matched filters p_k = sqrt(P_max/K) h_k / ||h_k||, full power at start.
arma::cx_mat initial_precoder(const arma::cx_mat &h_eff, double p_max) {
    const arma::uword n = h_eff.n_rows;
    const arma::uword k_users = h_eff.n_cols;
    const double per_user = p_max / static_cast<double>(k_users);
    arma::cx_mat p(n, k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const double nrm = arma::norm(h_eff.col(k));
        if (nrm > 0.0) {
            p.col(k) = h_eff.col(k) * (std::sqrt(per_user) / nrm);
        } else {
            p.col(k).fill(std::sqrt(per_user / static_cast<double>(n)));
        }
    }
    return p;
}

} // namespace

void SolveOptions::validate() const {
    if (max_iters < 1)
        throw std::invalid_argument("SolveOptions: max_iters must be >= 1");
    if (!(conv_tol_rel > 0.0))
        throw std::invalid_argument("SolveOptions: conv_tol_rel must be > 0");
}

bool check_convergence(const std::vector<double> &f2_values, const SolveOptions &opts) {
    if (f2_values.size() < 2)
        throw std::invalid_argument("check_convergence: need at least two recorded values");
    const double cur = f2_values.back();
    const double prev = f2_values[f2_values.size() - 2];
    return std::abs(cur - prev) <= opts.conv_tol_rel * std::abs(cur);
}

SolveResult run_wsm(const SystemConfig &config, const channel::ChannelSet &channels,
                    const SolveOptions &opts, Rng &rng) {
    config.validate();
    opts.validate();
    if (config.k_users < 1)
        throw std::invalid_argument("run_wsm: needs at least one user");
    if (channels.n_users() != config.k_users || channels.n_irs() != config.g_irs)
        throw std::invalid_argument("run_wsm: channel set does not match the config");

    const arma::uword m = config.array_geometry().m();
    const arma::uword m_tot = config.array_geometry().m_tot();
    const double noise_w = config.noise_watts();
    const objective::Weights weights{config.weight_vector()};

    // The internal bisection runs tighter than the public default so the
    // per-step ascent chain holds at 1e-9 absolute on the boundary.
    abf::PowerBudget budget{config.p_max_watts(), 1e-12};

    objective::BeamformerState state;
    state.theta.set_size(m, config.g_irs);
    for (arma::uword i = 0; i < m_tot; ++i)
        state.theta[i] = std::polar(1.0, rng.uniform(0.0, kTwoPi));
    state.zeta.zeros(m_tot);
    state.alpha.zeros(config.k_users);
    state.beta.zeros(config.k_users);
    state.rho.zeros(config.k_users);

    arma::cx_mat h_eff = objective::effective_channels(channels, state.theta);
    state.p = initial_precoder(h_eff, budget.p_max_watts);

    SolveTrace trace;
    trace.f1_per_iter.push_back(
        objective::weighted_sum_rate(h_eff, state.p, weights, noise_w));
    {
        const arma::vec gamma0 = objective::all_sinr(h_eff, state.p, noise_w);
        trace.f2_per_iter.push_back(objective::surrogate_f2(gamma0, gamma0, weights));
    }

    arma::cx_vec theta_vec = arma::vectorise(state.theta);
    for (unsigned iter = 1; iter <= opts.max_iters; ++iter) {
        try {
            // ratio auxiliaries from the current operating point
            const arma::vec gamma = objective::all_sinr(h_eff, state.p, noise_w);
            state.alpha = gamma;
            if (opts.record_trace)
                trace.f2_after_alpha.push_back(
                    objective::surrogate_f2(state.alpha, gamma, weights));

            // precoder block
            state.beta = abf::update_beta(h_eff, state.p, state.alpha, weights, noise_w);
            const abf::PrecoderResult pr =
                abf::update_precoder(h_eff, state.beta, state.alpha, weights, budget);
            state.p = pr.p;
            state.mu = pr.mu;
            if (opts.record_trace)
                trace.f2_after_abf.push_back(objective::surrogate_f2(
                    state.alpha, objective::all_sinr(h_eff, state.p, noise_w), weights));

            // phase block
            const pbf::StackedReflection stacked = pbf::build_stacked(channels, state.p);
            state.rho = pbf::update_rho(stacked, theta_vec, state.alpha, weights, noise_w);
            const pbf::QuadraticForm quad =
                pbf::assemble_quadratic(stacked, state.rho, state.alpha, weights);
            pbf::DualSolveOptions dual_opts;
            dual_opts.init = theta_vec; // reference point keeps the step monotone
            dual_opts.init_zeta = state.zeta;
            dual_opts.coord_tol = 1e-12; // headroom for the per-step ascent chain
            const pbf::DualSolveResult dual = pbf::solve_dual_theta(quad.a, quad.b, dual_opts);
            theta_vec = dual.theta;
            state.zeta = dual.zeta;
            trace.dual_slack_total += dual.slack_coords;
            state.theta = arma::reshape(theta_vec, m, config.g_irs);

            h_eff = objective::effective_channels(channels, state.theta);
        } catch (const numeric_failure &e) {
            throw numeric_failure("iteration " + std::to_string(iter) + ": " + e.what());
        }

        const arma::vec gamma_end = objective::all_sinr(h_eff, state.p, noise_w);
        const double f2_end = objective::surrogate_f2(state.alpha, gamma_end, weights);
        if (opts.record_trace)
            trace.f2_after_pbf.push_back(f2_end);
        trace.f2_per_iter.push_back(f2_end);
        trace.f1_per_iter.push_back(
            objective::weighted_sum_rate(h_eff, state.p, weights, noise_w));
        trace.iters_used = iter;

        if (check_convergence(trace.f2_per_iter, opts)) {
            trace.converged = true;
            break;
        }
    }

    trace.final_rate_continuous = trace.f1_per_iter.back();
    if (!config.codebook.is_continuous()) {
        const arma::cx_vec quantized = pbf::quantize_phases(theta_vec, config.codebook);
        const arma::cx_mat theta_q = arma::reshape(quantized, m, config.g_irs);
        trace.final_rate_quantized = objective::weighted_sum_rate(
            objective::effective_channels(channels, theta_q), state.p, weights, noise_w);
    }
    return {std::move(state), std::move(trace)};
}

BaselineResult run_baseline(const SystemConfig &config, const channel::ChannelSet &channels,
                            Rng &rng) {
    config.validate();
    if (config.k_users < 1)
        throw std::invalid_argument("run_baseline: needs at least one user");
    if (config.k_users > config.n_bs)
        throw zf_infeasible("run_baseline: zero forcing needs K <= N");

    const arma::uword m = config.array_geometry().m();
    const double noise_w = config.noise_watts();
    const objective::Weights weights{config.weight_vector()};
    const abf::PowerBudget budget{config.p_max_watts()};

    objective::BeamformerState state;
    const arma::cx_vec theta_vec =
        pbf::random_phases(config.array_geometry().m_tot(), config.codebook, rng);
    state.theta = arma::reshape(theta_vec, m, config.g_irs);
    state.alpha.zeros(config.k_users);
    state.beta.zeros(config.k_users);
    state.rho.zeros(config.k_users);
    state.zeta.zeros(config.array_geometry().m_tot());

    const arma::cx_mat h_eff = objective::effective_channels(channels, state.theta);
    state.p = abf::zf_precoder(h_eff, budget);

    const double rate = objective::weighted_sum_rate(h_eff, state.p, weights, noise_w);
    return {std::move(state), rate};
}

} // namespace engine
} // namespace irsbeam
