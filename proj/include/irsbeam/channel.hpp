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
#include <complex>
#include <vector>

#include "irsbeam/arrays.hpp"
#include "irsbeam/rng.hpp"

namespace irsbeam {

struct SystemConfig; // defined in config.hpp

namespace channel {

/// Log-distance path loss PL(r) = rho_a + 10*rho_b*log10(r) + xi [dB] plus
/// element gains for the IRS-user hop. Gains are dBi; conversion to linear
/// amplitude (10^(dBi/20)) happens at synthesis time.
struct PathLossParams {
    double rho_a = 61.4;       // dB intercept at 1 m
    double rho_b = 2.0;        // slope (decades)
    double sigma_xi_db = 5.8;  // shadowing std, dB
    double gain_tx_dbi = 9.82; // IRS element transmit gain
    double gain_rx_dbi = 0.0;  // user receive gain

    void validate() const;
};

/// Planar scenario layout in meters. User positions are drawn per trial,
/// area-uniform over the disk (user_center, user_radius).
struct ScenarioGeometry {
    arma::vec2 bs_pos{arma::fill::zeros};
    std::vector<arma::vec2> irs_pos;
    arma::vec2 user_center{arma::fill::zeros};
    double user_radius = 10.0;

    void validate() const; // positive radius, strictly positive BS-IRS distances
};

/// One channel realization: w[g] is the M x N BS->IRS matrix of unit g,
/// h[g][k] the length-M IRS->user vector, user_pos the drawn user locations.
/// Immutable after synthesis.
struct ChannelSet {
    std::vector<arma::cx_mat> w;
    std::vector<std::vector<arma::cx_vec>> h;
    std::vector<arma::vec2> user_pos;

    arma::uword n_irs() const { return w.size(); }
    arma::uword n_users() const { return h.empty() ? 0 : h.front().size(); }
};

double path_loss_db(double r_m, const PathLossParams &params, double xi_db);

/// CN(0, 10^(-0.1*pl_db)) sample; real/imag parts i.i.d. with half the variance.
std::complex<double> sample_path_gain(double pl_db, Rng &rng);

/// Sparse multipath BS->IRS matrix: one LoS term plus n_paths NLoS terms, each a
/// rank-one product of IRS and BS steering vectors with random angles. LoS gain
/// is CN(0,1); NLoS gains sit 10 dB below. Numerical rank <= n_paths + 1.
arma::cx_mat synth_bs_irs_channel(const arrays::ArrayGeometry &arrays, int n_paths, Rng &rng);

/// Pure-LoS IRS->user vector sqrt(M) * nu * g_r * g_t * a_t(phi) at the given
/// link distance; nu carries the full path loss including shadowing.
arma::cx_vec synth_irs_user_channel(double distance_m, const arrays::ArrayGeometry &arrays,
                                    const PathLossParams &params, Rng &rng);

/// Draws user positions and all channels for one trial. Deterministic in
/// (config, rng state): W matrices first, then user positions, then h[g][k]
/// in (g, k) lexicographic order.
ChannelSet synth_scenario(const SystemConfig &config, Rng &rng);

} // namespace channel
} // namespace irsbeam
