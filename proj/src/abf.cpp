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

#include "irsbeam/abf.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "irsbeam/errors.hpp"

namespace irsbeam {
namespace abf {

namespace {

constexpr unsigned kMaxBisectIters = 200;

// sqrt(omega_k * (1 + alpha_k)) per user
arma::vec sqrt_alpha_bar(const arma::vec &alpha, const objective::Weights &weights) {
    return arma::sqrt(weights.omega % (1.0 + alpha));
}

// Shared pieces of the shifted-Gram solve (mu I_N + sum_i |beta_i|^2 h_i h_i^H)^{-1}.
// Restricted to the active users S = {i : beta_i != 0} it reduces exactly to the
// K'-dimensional system (mu I + W^H W) with W = H_S diag(|beta_S|), which stays
// well conditioned down to mu = 0 whenever the active channels are independent.
struct ShiftedGram {
    arma::uvec active;       // indices with beta != 0
    arma::cx_mat w;          // N x K', beta-weighted active channels
    arma::cx_mat gram;       // K' x K', w^H w
    arma::cx_vec rhs_scale;  // sqrt(alpha_bar_i) * beta_i / |beta_i| over S
    double trace = 0.0;      // trace of the full N x N Gram
    arma::uword n = 0;
    arma::uword k_total = 0;

    static ShiftedGram build(const arma::cx_mat &h_eff, const arma::cx_vec &beta,
                             const arma::vec &alpha, const objective::Weights &weights) {
        ShiftedGram sg;
        sg.n = h_eff.n_rows;
        sg.k_total = h_eff.n_cols;
        sg.active = arma::find(arma::abs(beta) > 0.0);
        const arma::vec root = sqrt_alpha_bar(alpha, weights);
        sg.w.set_size(sg.n, sg.active.n_elem);
        sg.rhs_scale.set_size(sg.active.n_elem);
        for (arma::uword i = 0; i < sg.active.n_elem; ++i) {
            const arma::uword user = sg.active[i];
            sg.w.col(i) = h_eff.col(user) * std::abs(beta[user]);
            sg.rhs_scale[i] = root[user] * beta[user] / std::abs(beta[user]);
        }
        sg.gram = sg.w.t() * sg.w;
        sg.trace = std::real(arma::trace(sg.gram));
        return sg;
    }

    // Precoder at the given multiplier, or nullopt when the shifted system is
    // not positive definite (only possible at mu = 0).
    std::optional<arma::cx_mat> try_solve(double mu) const {
        arma::cx_mat p(n, k_total, arma::fill::zeros);
        if (active.n_elem == 0)
            return p;
        arma::cx_mat shifted = gram;
        shifted.diag() += mu;
        arma::cx_mat r;
        if (!arma::chol(r, shifted))
            return std::nullopt;
        const arma::cx_mat z = arma::solve(
            arma::trimatu(r),
            arma::solve(arma::trimatl(r.t()),
                        arma::cx_mat(arma::diagmat(rhs_scale))));
        const arma::cx_mat p_active = w * z;
        for (arma::uword i = 0; i < active.n_elem; ++i)
            p.col(active[i]) = p_active.col(i);
        return p;
    }
};

} // namespace

void PowerBudget::validate() const {
    if (!(p_max_watts > 0.0))
        throw std::invalid_argument("PowerBudget: p_max_watts must be > 0");
    if (!(tolerance_rel > 0.0))
        throw std::invalid_argument("PowerBudget: tolerance_rel must be > 0");
}

arma::cx_vec update_beta(const arma::cx_mat &h_eff, const arma::cx_mat &p,
                         const arma::vec &alpha, const objective::Weights &weights,
                         double noise_w) {
    if (!(noise_w > 0.0))
        throw std::invalid_argument("update_beta: noise power must be > 0");
    const arma::uword k_users = h_eff.n_cols;
    weights.validate(k_users);

    const arma::cx_mat cross = h_eff.t() * p; // (k, j) = h_k^H p_j
    const arma::vec root = sqrt_alpha_bar(alpha, weights);
    arma::cx_vec beta(k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const double denom = arma::accu(arma::square(arma::abs(cross.row(k)))) + noise_w;
        beta[k] = root[k] * cross(k, k) / denom;
    }
    return beta;
}

arma::cx_mat precoder_for_mu(double mu, const arma::cx_mat &h_eff, const arma::cx_vec &beta,
                             const arma::vec &alpha, const objective::Weights &weights) {
    if (mu < 0.0)
        throw std::invalid_argument("precoder_for_mu: mu must be >= 0");
    weights.validate(h_eff.n_cols);

    const ShiftedGram sg = ShiftedGram::build(h_eff, beta, alpha, weights);
    const auto p = sg.try_solve(mu);
    if (!p)
        throw numeric_failure("precoder_for_mu: shifted Gram system is rank-deficient");
    return *p;
}

double transmit_power(const arma::cx_mat &p) {
    return arma::accu(arma::square(arma::abs(p)));
}

PrecoderResult update_precoder(const arma::cx_mat &h_eff, const arma::cx_vec &beta,
                               const arma::vec &alpha, const objective::Weights &weights,
                               const PowerBudget &budget) {
    budget.validate();
    weights.validate(h_eff.n_cols);
    const arma::uword n = h_eff.n_rows;
    const arma::uword k_users = h_eff.n_cols;
    const double p_max = budget.p_max_watts;

    if (arma::norm(beta, "inf") == 0.0)
        return {arma::cx_mat(n, k_users, arma::fill::zeros), 0.0};

    const ShiftedGram sg = ShiftedGram::build(h_eff, beta, alpha, weights);

    // mu = 0 solution; a rank-deficient Gram system gets the floor multiplier
    // instead, which reproduces the pseudo-solution to O(1e-12) relative.
    const double mu_floor = 1e-12 * sg.trace / static_cast<double>(n);
    auto p0 = sg.try_solve(0.0);
    if (!p0) {
        p0 = sg.try_solve(mu_floor);
        if (!p0)
            throw numeric_failure("update_precoder: Gram system singular even at the floor");
    }
    if (transmit_power(*p0) <= p_max * (1.0 + budget.tolerance_rel))
        return {*p0, 0.0};

    // Budget violated at mu = 0: locate mu with trace(PP^H) = P_max. Power is
    // non-increasing in mu, so doubling finds a valid upper bracket.
    double mu_lo = mu_floor;
    double mu_hi = 1.0;
    while (true) {
        const auto p_hi = sg.try_solve(mu_hi);
        if (!p_hi)
            throw numeric_failure("update_precoder: bracket solve failed");
        if (transmit_power(*p_hi) < p_max)
            break;
        mu_lo = mu_hi;
        mu_hi *= 2.0;
        if (!std::isfinite(mu_hi))
            throw numeric_failure("update_precoder: no finite upper bracket for mu");
    }

    for (unsigned iter = 0; iter < kMaxBisectIters; ++iter) {
        const double mu_mid = 0.5 * (mu_lo + mu_hi);
        const auto p_mid = sg.try_solve(mu_mid);
        if (!p_mid)
            throw numeric_failure("update_precoder: bisection solve failed");
        const double power = transmit_power(*p_mid);
        if (std::abs(power - p_max) <= budget.tolerance_rel * p_max)
            return {*p_mid, mu_mid};
        if (power > p_max)
            mu_lo = mu_mid;
        else
            mu_hi = mu_mid;
        if (mu_hi - mu_lo <= 1e-14 * mu_hi)
            return {*p_mid, mu_mid};
    }
    throw numeric_failure("update_precoder: bisection did not converge in 200 iterations");
}

arma::cx_mat zf_precoder(const arma::cx_mat &h_eff, const PowerBudget &budget) {
    budget.validate();
    const arma::uword n = h_eff.n_rows;
    const arma::uword k_users = h_eff.n_cols;
    if (k_users == 0)
        throw std::invalid_argument("zf_precoder: no users");
    if (k_users > n)
        throw zf_infeasible("zf_precoder: more users than BS antennas");

    const arma::cx_mat gram = h_eff.t() * h_eff; // K x K
    arma::cx_mat r;
    if (!arma::chol(r, gram))
        throw zf_infeasible("zf_precoder: stacked effective channel matrix is rank-deficient");
    // reject numerically rank-deficient Gram matrices that pass the factorization
    const arma::vec d = arma::abs(r.diag());
    if (d.min() < 1e-10 * d.max())
        throw zf_infeasible("zf_precoder: effective channels nearly collinear");

    const arma::cx_mat pseudo =
        h_eff * arma::solve(arma::trimatu(r),
                            arma::solve(arma::trimatl(r.t()),
                                        arma::eye<arma::cx_mat>(k_users, k_users)));
    const double per_user = budget.p_max_watts / static_cast<double>(k_users);
    arma::cx_mat p(n, k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const double col_norm = arma::norm(pseudo.col(k));
        if (col_norm == 0.0)
            throw zf_infeasible("zf_precoder: zero pseudo-inverse column");
        p.col(k) = pseudo.col(k) * (std::sqrt(per_user) / col_norm);
    }
    return p;
}

double fractional_objective(const arma::cx_mat &h_eff, const arma::cx_mat &p,
                            const arma::vec &alpha, const objective::Weights &weights,
                            double noise_w) {
    weights.validate(h_eff.n_cols);
    const arma::mat gains = arma::square(arma::abs(h_eff.t() * p));
    const arma::vec alpha_bar = weights.omega % (1.0 + alpha);
    double sum = 0.0;
    for (arma::uword k = 0; k < h_eff.n_cols; ++k)
        sum += alpha_bar[k] * gains(k, k) / (arma::accu(gains.row(k)) + noise_w);
    return sum;
}

double qt_objective(const arma::cx_mat &h_eff, const arma::cx_mat &p, const arma::cx_vec &beta,
                    const arma::vec &alpha, const objective::Weights &weights, double noise_w) {
    weights.validate(h_eff.n_cols);
    const arma::cx_mat cross = h_eff.t() * p;
    const arma::vec root = sqrt_alpha_bar(alpha, weights);
    double sum = 0.0;
    for (arma::uword k = 0; k < h_eff.n_cols; ++k) {
        const double denom = arma::accu(arma::square(arma::abs(cross.row(k)))) + noise_w;
        sum += 2.0 * root[k] * std::real(std::conj(beta[k]) * cross(k, k)) -
               std::norm(beta[k]) * denom;
    }
    return sum;
}

} // namespace abf
} // namespace irsbeam
