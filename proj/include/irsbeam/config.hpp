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

#include "irsbeam/arrays.hpp"
#include "irsbeam/channel.hpp"
#include "irsbeam/pbf.hpp"

namespace irsbeam {

/// Full scenario description. Power figures are stored as configured (dBm);
/// everything downstream of the *_watts() accessors is linear-scale. Defaults
/// are the standard evaluation scenario (32-antenna BS, two 10x1 IRS units at
/// (40,30) and (30,40) m, two users in a 10 m disk at (40,0), 30 dBm budget,
/// -85 dBm noise, two NLoS paths).
struct SystemConfig {
    arma::uword n_bs = 32;
    arma::uword g_irs = 2;
    arma::uword k_users = 2;
    arma::uword m_az = 10;
    arma::uword m_el = 1;
    pbf::PhaseCodebook codebook = pbf::PhaseCodebook::continuous();
    double p_max_dbm = 30.0;
    double noise_dbm = -85.0;
    int n_paths = 2;
    std::optional<arma::vec> weights; // absent = equal (all 1.0)
    channel::ScenarioGeometry geometry;
    channel::PathLossParams pathloss;
    std::uint64_t seed = 1;
    unsigned trials = 100;

    SystemConfig();

    double p_max_watts() const;
    double noise_watts() const;
    arrays::ArrayGeometry array_geometry() const;
    arma::vec weight_vector() const; // resolved per-user weights, length k_users

    void validate() const; // throws config_error naming the offending field
};

double dbm_to_watts(double dbm);

} // namespace irsbeam
