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

#include <armadillo>

#include "irsbeam/channel.hpp"

namespace irsbeam {
namespace objective {

/// Per-user rate weights, all strictly positive.
struct Weights {
    arma::vec omega;

    static Weights equal(arma::uword k) { return {arma::ones<arma::vec>(k)}; }
    void validate(arma::uword k) const;
};

/// Joint solver state: precoder columns p_k (N x K), per-IRS phase columns
/// theta_g (M x G), ratio auxiliaries alpha/beta/rho, power multiplier mu and
/// unit-ball multipliers zeta. A feasible state has unit-modulus theta entries
/// and trace(P P^H) within the power budget.
struct BeamformerState {
    arma::cx_mat p;     // N x K
    arma::cx_mat theta; // M x G
    arma::vec alpha;    // K, >= 0
    arma::cx_vec beta;  // K
    arma::cx_vec rho;   // K
    double mu = 0.0;
    arma::vec zeta; // M*G, >= 0
};

/// Composite BS->user channel through all IRS units for user k (column form):
/// sum_g W_g^H (theta_g .* h[g][k]).
arma::cx_vec effective_channel(const channel::ChannelSet &channels, const arma::cx_mat &theta,
                               arma::uword k);

/// All effective channels as the N x K matrix with columns h_eff_k.
arma::cx_mat effective_channels(const channel::ChannelSet &channels, const arma::cx_mat &theta);

/// SINR of each user for precoder p given precomputed effective channels.
arma::vec all_sinr(const arma::cx_mat &h_eff, const arma::cx_mat &p, double noise_w);

double sinr(const channel::ChannelSet &channels, const BeamformerState &state, arma::uword k,
            double noise_w);

/// sum_k omega_k log2(1 + sinr_k) in bits/s/Hz.
double weighted_sum_rate(const arma::cx_mat &h_eff, const arma::cx_mat &p,
                         const Weights &weights, double noise_w);
double weighted_sum_rate(const channel::ChannelSet &channels, const BeamformerState &state,
                         const Weights &weights, double noise_w);

/// Rate surrogate with the SINR pulled out of the logarithm:
/// (1/ln 2) * sum_k [omega_k ln(1+alpha_k) - omega_k alpha_k
///                   + omega_k (1+alpha_k) sinr_k / (1+sinr_k)].
/// Equals weighted_sum_rate when alpha_k = sinr_k.
double surrogate_f2(const arma::vec &alpha, const arma::vec &gamma, const Weights &weights);
double surrogate_f2(const channel::ChannelSet &channels, const BeamformerState &state,
                    const Weights &weights, double noise_w);

/// Maximizer of the surrogate over alpha at the current (p, theta): alpha = sinr.
arma::vec update_alpha(const channel::ChannelSet &channels, const BeamformerState &state,
                       double noise_w);

} // namespace objective
} // namespace irsbeam
