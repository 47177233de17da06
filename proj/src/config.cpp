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

#include "irsbeam/config.hpp"

#include <cmath>

#include "irsbeam/errors.hpp"

namespace irsbeam {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

SystemConfig::SystemConfig() {
    geometry.bs_pos = {0.0, 0.0};
    geometry.irs_pos = {arma::vec2{40.0, 30.0}, arma::vec2{30.0, 40.0}};
    geometry.user_center = {40.0, 0.0};
    geometry.user_radius = 10.0;
}

double SystemConfig::p_max_watts() const { return dbm_to_watts(p_max_dbm); }

double SystemConfig::noise_watts() const { return dbm_to_watts(noise_dbm); }

arrays::ArrayGeometry SystemConfig::array_geometry() const {
    return {n_bs, g_irs, m_az, m_el};
}

arma::vec SystemConfig::weight_vector() const {
    if (!weights)
        return arma::ones<arma::vec>(k_users);
    return *weights;
}

void SystemConfig::validate() const {
    try {
        array_geometry().validate();
    } catch (const std::invalid_argument &e) {
        throw config_error(e.what());
    }
    if (!(p_max_watts() > 0.0) || !std::isfinite(p_max_watts()))
        throw config_error("SystemConfig: p_max_dbm out of range");
    if (!(noise_watts() > 0.0) || !std::isfinite(noise_watts()))
        throw config_error("SystemConfig: noise_dbm out of range");
    if (n_paths < 0)
        throw config_error("SystemConfig: n_paths must be >= 0");
    if (trials < 1)
        throw config_error("SystemConfig: trials must be >= 1");
    if (weights) {
        if (weights->n_elem != k_users)
            throw config_error("SystemConfig: weights length must equal k_users");
        if (weights->n_elem > 0 && weights->min() <= 0.0)
            throw config_error("SystemConfig: weights must be > 0");
    }
    if (geometry.irs_pos.size() != g_irs)
        throw config_error("SystemConfig: geometry.irs_pos must list one position per IRS");
    try {
        geometry.validate();
        pathloss.validate();
    } catch (const std::invalid_argument &e) {
        throw config_error(e.what());
    }
}

} // namespace irsbeam
