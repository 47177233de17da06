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

#include "irsbeam/objective.hpp"

namespace irsbeam {
namespace abf {

struct PowerBudget {
    double p_max_watts = 1.0;
    double tolerance_rel = 1e-8; // |trace(PP^H) - P_max| <= tolerance_rel * P_max

    void validate() const;
};

struct PrecoderResult {
    arma::cx_mat p;
    double mu = 0.0;
};

/// Closed-form ratio auxiliaries for the precoder subproblem:
/// beta_k = sqrt(omega_k (1+alpha_k)) h_eff_k^H p_k / (sum_j |h_eff_k^H p_j|^2 + noise).
arma::cx_vec update_beta(const arma::cx_mat &h_eff, const arma::cx_mat &p,
                         const arma::vec &alpha, const objective::Weights &weights,
                         double noise_w);

/// Precoder for a fixed power multiplier: column k is
/// sqrt(omega_k (1+alpha_k)) beta_k (mu I + sum_i |beta_i|^2 h_i h_i^H)^{-1} h_k,
/// computed via a Cholesky solve. Throws numeric_failure when mu = 0 and the
/// Gram system is singular (rank of the beta-weighted channels < N).
arma::cx_mat precoder_for_mu(double mu, const arma::cx_mat &h_eff, const arma::cx_vec &beta,
                             const arma::vec &alpha, const objective::Weights &weights);

/// trace(P P^H), the total transmit power.
double transmit_power(const arma::cx_mat &p);

/// Power-constrained precoder update: returns the mu = 0 solution when it is
/// within budget (using a floor of 1e-12 * trace(X)/N when the mu = 0 system is
/// rank-deficient), otherwise bisects mu until trace(P P^H) = P_max within
/// tolerance. transmit_power(precoder_for_mu(mu)) is non-increasing in mu, so
/// the bracket [0, mu_hi] found by doubling always contains the root.
PrecoderResult update_precoder(const arma::cx_mat &h_eff, const arma::cx_vec &beta,
                               const arma::vec &alpha, const objective::Weights &weights,
                               const PowerBudget &budget);

/// Zero-forcing baseline: P = H^H (H H^H)^{-1} D with equal per-user power
/// summing to P_max. Throws zf_infeasible when the stacked effective channel
/// matrix is rank-deficient (requires K <= N).
arma::cx_mat zf_precoder(const arma::cx_mat &h_eff, const PowerBudget &budget);

/// Multi-ratio objective of the precoder subproblem at fixed phases.
double fractional_objective(const arma::cx_mat &h_eff, const arma::cx_mat &p,
                            const arma::vec &alpha, const objective::Weights &weights,
                            double noise_w);

/// Quadratic-transform surrogate; equals fractional_objective at
/// beta = update_beta(...).
double qt_objective(const arma::cx_mat &h_eff, const arma::cx_mat &p, const arma::cx_vec &beta,
                    const arma::vec &alpha, const objective::Weights &weights, double noise_w);

} // namespace abf
} // namespace irsbeam
