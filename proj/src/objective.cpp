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

#include "irsbeam/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace irsbeam {
namespace objective {

namespace {
constexpr double kInvLn2 = 1.4426950408889634; // 1/ln(2)
}

void Weights::validate(arma::uword k) const {
    if (omega.n_elem != k)
        throw std::invalid_argument("Weights: omega length must equal the user count");
    if (omega.n_elem > 0 && omega.min() <= 0.0)
        throw std::invalid_argument("Weights: all omega must be > 0");
}

arma::cx_vec effective_channel(const channel::ChannelSet &channels, const arma::cx_mat &theta,
                               arma::uword k) {
    const arma::uword n_irs = channels.n_irs();
    if (theta.n_cols != n_irs)
        throw std::invalid_argument("effective_channel: theta column count != IRS count");
    if (k >= channels.n_users())
        throw std::invalid_argument("effective_channel: user index out of range");

    arma::cx_vec h_eff;
    for (arma::uword g = 0; g < n_irs; ++g) {
        const arma::cx_mat &w = channels.w[g];
        if (theta.n_rows != w.n_rows || channels.h[g][k].n_elem != w.n_rows)
            throw std::invalid_argument("effective_channel: inconsistent dimensions");
        const arma::cx_vec masked = theta.col(g) % channels.h[g][k];
        if (h_eff.is_empty())
            h_eff = w.t() * masked;
        else
            h_eff += w.t() * masked;
    }
    return h_eff;
}

arma::cx_mat effective_channels(const channel::ChannelSet &channels, const arma::cx_mat &theta) {
    const arma::uword k_users = channels.n_users();
    const arma::uword n = channels.w.empty() ? 0 : channels.w.front().n_cols;
    arma::cx_mat h_eff(n, k_users);
    for (arma::uword k = 0; k < k_users; ++k)
        h_eff.col(k) = effective_channel(channels, theta, k);
    return h_eff;
}

arma::vec all_sinr(const arma::cx_mat &h_eff, const arma::cx_mat &p, double noise_w) {
    if (!(noise_w > 0.0))
        throw std::invalid_argument("all_sinr: noise power must be > 0");
    const arma::uword k_users = h_eff.n_cols;
    if (p.n_cols != k_users || p.n_rows != h_eff.n_rows)
        throw std::invalid_argument("all_sinr: precoder dimensions inconsistent");

    // gains(k, j) = |h_eff_k^H p_j|^2
    const arma::mat gains = arma::square(arma::abs(h_eff.t() * p));
    arma::vec gamma(k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const double interference = arma::accu(gains.row(k)) - gains(k, k);
        gamma[k] = gains(k, k) / (interference + noise_w);
    }
    return gamma;
}

double sinr(const channel::ChannelSet &channels, const BeamformerState &state, arma::uword k,
            double noise_w) {
    const arma::cx_mat h_eff = effective_channels(channels, state.theta);
    return all_sinr(h_eff, state.p, noise_w)[k];
}

double weighted_sum_rate(const arma::cx_mat &h_eff, const arma::cx_mat &p,
                         const Weights &weights, double noise_w) {
    const arma::vec gamma = all_sinr(h_eff, p, noise_w);
    weights.validate(gamma.n_elem);
    double rate = 0.0;
    for (arma::uword k = 0; k < gamma.n_elem; ++k)
        rate += weights.omega[k] * std::log1p(gamma[k]);
    return rate * kInvLn2;
}

double weighted_sum_rate(const channel::ChannelSet &channels, const BeamformerState &state,
                         const Weights &weights, double noise_w) {
    return weighted_sum_rate(effective_channels(channels, state.theta), state.p, weights,
                             noise_w);
}

double surrogate_f2(const arma::vec &alpha, const arma::vec &gamma, const Weights &weights) {
    if (alpha.n_elem != gamma.n_elem)
        throw std::invalid_argument("surrogate_f2: alpha/gamma length mismatch");
    weights.validate(alpha.n_elem);
    double sum = 0.0;
    for (arma::uword k = 0; k < alpha.n_elem; ++k) {
        // ln(1+a) - a + (1+a)g/(1+g) == ln(1+a) - (a-g)/(1+g); the second form
        // avoids cancellation of the large terms at high SINR
        sum += weights.omega[k] *
               (std::log1p(alpha[k]) - (alpha[k] - gamma[k]) / (1.0 + gamma[k]));
    }
    return sum * kInvLn2;
}

double surrogate_f2(const channel::ChannelSet &channels, const BeamformerState &state,
                    const Weights &weights, double noise_w) {
    const arma::cx_mat h_eff = effective_channels(channels, state.theta);
    return surrogate_f2(state.alpha, all_sinr(h_eff, state.p, noise_w), weights);
}

arma::vec update_alpha(const channel::ChannelSet &channels, const BeamformerState &state,
                       double noise_w) {
    const arma::cx_mat h_eff = effective_channels(channels, state.theta);
    return all_sinr(h_eff, state.p, noise_w);
}

} // namespace objective
} // namespace irsbeam
