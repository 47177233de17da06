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

#include "irsbeam/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "irsbeam/config.hpp"

namespace irsbeam {
namespace channel {

namespace {

constexpr double kNlosAttenuationDb = 10.0; // NLoS paths sit 10 dB below LoS
constexpr double kHalfPi = 1.5707963267948966;
constexpr double kQuarterPi = 0.7853981633974483;

double dbi_to_amplitude(double dbi) { return std::pow(10.0, dbi / 20.0); }

double sample_azimuth_freq(Rng &rng) {
    return arrays::angle_to_spatial_freq(rng.uniform(-kHalfPi, kHalfPi));
}

double sample_elevation_freq(Rng &rng) {
    return arrays::angle_to_spatial_freq(rng.uniform(-kQuarterPi, kQuarterPi));
}

} // namespace

void PathLossParams::validate() const {
    if (!(rho_b > 0.0))
        throw std::invalid_argument("PathLossParams: rho_b must be > 0");
    if (sigma_xi_db < 0.0)
        throw std::invalid_argument("PathLossParams: sigma_xi_db must be >= 0");
}

void ScenarioGeometry::validate() const {
    if (!(user_radius > 0.0))
        throw std::invalid_argument("ScenarioGeometry: user_radius must be > 0");
    for (const auto &pos : irs_pos) {
        if (arma::norm(pos - bs_pos) <= 0.0)
            throw std::invalid_argument("ScenarioGeometry: IRS must not coincide with the BS");
    }
}

double path_loss_db(double r_m, const PathLossParams &params, double xi_db) {
    if (!(r_m > 0.0))
        throw std::invalid_argument("path_loss_db: distance must be > 0");
    return params.rho_a + 10.0 * params.rho_b * std::log10(r_m) + xi_db;
}

std::complex<double> sample_path_gain(double pl_db, Rng &rng) {
    return rng.cgauss(std::pow(10.0, -0.1 * pl_db));
}

arma::cx_mat synth_bs_irs_channel(const arrays::ArrayGeometry &arrays_geom, int n_paths,
                                  Rng &rng) {
    arrays_geom.validate();
    if (n_paths < 0)
        throw std::invalid_argument("synth_bs_irs_channel: n_paths must be >= 0");

    const arma::uword m = arrays_geom.m();
    const arma::uword n = arrays_geom.n_bs;
    arma::cx_mat w(m, n, arma::fill::zeros);

    const double nlos_var = std::pow(10.0, -0.1 * kNlosAttenuationDb);
    for (int path = 0; path <= n_paths; ++path) {
        const double bs_freq = sample_azimuth_freq(rng);
        const double irs_az_freq = sample_azimuth_freq(rng);
        const double irs_el_freq = sample_elevation_freq(rng);
        const std::complex<double> gain = rng.cgauss(path == 0 ? 1.0 : nlos_var);

        const arma::cx_vec a_irs =
            arrays::upa_steering(irs_az_freq, irs_el_freq, arrays_geom.m_az, arrays_geom.m_el);
        const arma::cx_vec a_bs = arrays::ula_steering(bs_freq, n);
        w += gain * a_irs * a_bs.t();
    }
    return w;
}

arma::cx_vec synth_irs_user_channel(double distance_m, const arrays::ArrayGeometry &arrays_geom,
                                    const PathLossParams &params, Rng &rng) {
    arrays_geom.validate();
    const double xi = params.sigma_xi_db > 0.0 ? params.sigma_xi_db * rng.normal() : 0.0;
    const double pl = path_loss_db(distance_m, params, xi);

    const double az_freq = sample_azimuth_freq(rng);
    const double el_freq = sample_elevation_freq(rng);
    const std::complex<double> nu = sample_path_gain(pl, rng);

    const double g_t = dbi_to_amplitude(params.gain_tx_dbi);
    const double g_r = dbi_to_amplitude(params.gain_rx_dbi);
    const double m = static_cast<double>(arrays_geom.m());

    return std::sqrt(m) * nu * g_r * g_t *
           arrays::upa_steering(az_freq, el_freq, arrays_geom.m_az, arrays_geom.m_el);
}

ChannelSet synth_scenario(const SystemConfig &config, Rng &rng) {
    config.validate();
    const arrays::ArrayGeometry geom = config.array_geometry();
    const ScenarioGeometry &scene = config.geometry;

    ChannelSet set;
    set.w.reserve(geom.g_irs);
    for (arma::uword g = 0; g < geom.g_irs; ++g)
        set.w.push_back(synth_bs_irs_channel(geom, config.n_paths, rng));

    set.user_pos.resize(config.k_users);
    for (arma::uword k = 0; k < config.k_users; ++k) {
        // area-uniform draw over the disk
        const double radius = scene.user_radius * std::sqrt(rng.uniform());
        const double angle = rng.uniform(0.0, 2.0 * arma::datum::pi);
        set.user_pos[k] =
            scene.user_center + arma::vec2{radius * std::cos(angle), radius * std::sin(angle)};
    }

    set.h.resize(geom.g_irs);
    for (arma::uword g = 0; g < geom.g_irs; ++g) {
        set.h[g].reserve(config.k_users);
        for (arma::uword k = 0; k < config.k_users; ++k) {
            const double dist = arma::norm(set.user_pos[k] - scene.irs_pos[g]);
            if (!(dist > 0.0))
                throw std::invalid_argument("synth_scenario: user coincides with an IRS unit");
            set.h[g].push_back(synth_irs_user_channel(dist, geom, config.pathloss, rng));
        }
    }
    return set;
}

} // namespace channel
} // namespace irsbeam
