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
#include <optional>
#include <vector>

#include "irsbeam/channel.hpp"
#include "irsbeam/objective.hpp"
#include "irsbeam/rng.hpp"

namespace irsbeam {
namespace pbf {

/// Per-user-pair reflection vectors stacked across IRS units:
/// v[k][j] has length m_tot with entry (g*M + m) equal to element m of
/// conj(h[g][k]) .* (W_g p_j), so that cdot(theta_vec, v[k][j]) equals the
/// effective-channel product for (k, j).
struct StackedReflection {
    std::vector<std::vector<arma::cx_vec>> v; // [k][j], each length m_tot
    arma::uword m_tot = 0;

    arma::uword n_users() const { return v.size(); }
};

/// The concave quadratic -theta^H a theta + 2 Re(theta^H b) maximized by the
/// phase solver; a is Hermitian PSD by construction.
struct QuadraticForm {
    arma::cx_mat a;
    arma::cx_vec b;
};

/// Phase-shifter resolution: B-bit grid {2*pi*i / 2^B} or continuous.
struct PhaseCodebook {
    std::optional<unsigned> bits; // nullopt = continuous

    static PhaseCodebook continuous() { return {}; }
    static PhaseCodebook discrete(unsigned b);

    bool is_continuous() const { return !bits.has_value(); }
};

struct DualSolveOptions {
    double unit_tol = 1e-8;   // target |theta_k| accuracy on active coordinates
    double coord_tol = 1e-10; // sweep stop: max per-coordinate theta change
    unsigned max_sweeps = 500;
    std::optional<arma::cx_vec> init;  // feasible reference point; the returned
                                       // theta never scores below it
    std::optional<arma::vec> init_zeta; // multiplier warm start, defaults to |b|
};

struct DualSolveResult {
    arma::cx_vec theta;      // |theta_k| = 1 on active coordinates
    arma::vec zeta;          // multipliers of the unit-ball constraints, >= 0
    bool degenerate = false; // b was zero; theta is an arbitrary feasible point
    unsigned sweeps = 0;
    arma::uword slack_coords = 0; // coordinates with zeta = 0 and |theta| < 1 - 1e-6
    double residual = 0.0;        // max |(a + diag(zeta)) theta - b| coordinate-wise
};

/// diag(h[g][k]^H) * W_g * p_j, the length-M reflection response of unit g.
arma::cx_vec reflection_vector(const channel::ChannelSet &channels, const arma::cx_vec &p_j,
                               arma::uword g, arma::uword k);

/// Concatenates per-unit reflection vectors into one length-M*G column
/// (column-major vectorization order).
arma::cx_vec stack(const std::vector<arma::cx_vec> &parts);

/// All stacked reflection vectors for the current precoder.
StackedReflection build_stacked(const channel::ChannelSet &channels, const arma::cx_mat &p);

/// Closed-form ratio auxiliaries for the phase subproblem.
arma::cx_vec update_rho(const StackedReflection &stacked, const arma::cx_vec &theta_vec,
                        const arma::vec &alpha, const objective::Weights &weights,
                        double noise_w);

/// Quadratic-form assembly from the stacked vectors and auxiliaries.
QuadraticForm assemble_quadratic(const StackedReflection &stacked, const arma::cx_vec &rho,
                                 const arma::vec &alpha, const objective::Weights &weights);

/// Maximizes -theta^H a theta + 2 Re(theta^H b) subject to per-coordinate
/// |theta_k| <= 1 and returns the KKT pair (theta, zeta): theta solves
/// (a + diag(zeta)) theta = b with zeta >= 0 and zeta_k (|theta_k|^2 - 1) = 0.
/// At the optimum the constraints are active (|theta_k| = 1) except on
/// coordinates reported in slack_coords.
DualSolveResult solve_dual_theta(const arma::cx_mat &a, const arma::cx_vec &b,
                                 const DualSolveOptions &opts = {});

/// Nearest-grid phase projection; ties break toward the smaller phase.
/// Identity for a continuous codebook.
arma::cx_vec quantize_phases(const arma::cx_vec &theta_vec, const PhaseCodebook &codebook);

/// i.i.d. uniform draws from the codebook (or the continuous circle).
arma::cx_vec random_phases(arma::uword m_tot, const PhaseCodebook &codebook, Rng &rng);

/// Multi-ratio objective of the phase subproblem at fixed precoder.
double fractional_objective(const StackedReflection &stacked, const arma::cx_vec &theta_vec,
                            const arma::vec &alpha, const objective::Weights &weights,
                            double noise_w);

/// Quadratic-transform surrogate of fractional_objective; equals it at
/// rho = update_rho(...).
double qt_objective(const StackedReflection &stacked, const arma::cx_vec &theta_vec,
                    const arma::cx_vec &rho, const arma::vec &alpha,
                    const objective::Weights &weights, double noise_w);

/// The assembled quadratic including the -sum |rho_k|^2 sigma^2 constant;
/// equals qt_objective at the same (theta, rho).
double quadratic_objective(const QuadraticForm &q, const arma::cx_vec &theta_vec,
                           const arma::cx_vec &rho, double noise_w);

} // namespace pbf
} // namespace irsbeam
