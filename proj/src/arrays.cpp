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

#include "irsbeam/arrays.hpp"

#include <cmath>
#include <stdexcept>

namespace irsbeam {
namespace arrays {

void ArrayGeometry::validate() const {
    if (n_bs == 0)
        throw std::invalid_argument("ArrayGeometry: n_bs must be >= 1");
    if (g_irs == 0)
        throw std::invalid_argument("ArrayGeometry: g_irs must be >= 1");
    if (m_az == 0 || m_el == 0)
        throw std::invalid_argument("ArrayGeometry: m_az and m_el must be >= 1");
}

arma::vec index_set(arma::uword n) {
    if (n == 0)
        throw std::invalid_argument("index_set: n must be >= 1");
    arma::vec idx(n);
    const double offset = 0.5 * static_cast<double>(n - 1);
    for (arma::uword i = 0; i < n; ++i)
        idx[i] = static_cast<double>(i) - offset;
    return idx;
}

arma::cx_vec ula_steering(double spatial_freq, arma::uword n) {
    if (n == 0)
        throw std::invalid_argument("ula_steering: n must be >= 1");
    if (!std::isfinite(spatial_freq))
        throw std::invalid_argument("ula_steering: spatial_freq must be finite");

    const arma::vec idx = index_set(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    // exponent -j * 2*pi * (d/lambda) * f * i with d/lambda = 1/2
    const double omega = -arma::datum::pi * spatial_freq;
    arma::cx_vec a(n);
    for (arma::uword i = 0; i < n; ++i)
        a[i] = std::polar(scale, omega * idx[i]);
    return a;
}

arma::cx_vec upa_steering(double az_freq, double el_freq, arma::uword m_az, arma::uword m_el) {
    if (m_az == 0 || m_el == 0)
        throw std::invalid_argument("upa_steering: dimensions must be >= 1");
    return arma::kron(ula_steering(az_freq, m_az), ula_steering(el_freq, m_el));
}

double angle_to_spatial_freq(double angle_rad) { return std::sin(angle_rad); }

} // namespace arrays
} // namespace irsbeam
