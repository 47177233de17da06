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

namespace irsbeam {
namespace arrays {

/// Antenna layout of one scenario: BS uniform linear array with n_bs elements,
/// g_irs reflecting surfaces, each an m_az x m_el rectangular array.
/// Element spacing is half a wavelength on every axis and is not configurable.
struct ArrayGeometry {
    arma::uword n_bs = 32;
    arma::uword g_irs = 2;
    arma::uword m_az = 10;
    arma::uword m_el = 1;

    static constexpr double element_spacing_wavelengths = 0.5;

    arma::uword m() const { return m_az * m_el; }          // elements per IRS unit
    arma::uword m_tot() const { return m() * g_irs; }      // total reflecting elements

    void validate() const; // throws std::invalid_argument on zero dimensions
};

/// Centered element index set: [0-(n-1)/2, 1-(n-1)/2, ..., (n-1)-(n-1)/2].
/// Half-integer for even n; always sums to zero.
arma::vec index_set(arma::uword n);

/// ULA steering vector: entry i is (1/sqrt(n)) * exp(-j*pi*spatial_freq*i)
/// over the centered index set (half-wavelength spacing folded into the pi).
/// Unit Euclidean norm; conjugate-symmetric about the array center.
arma::cx_vec ula_steering(double spatial_freq, arma::uword n);

/// Rectangular-array steering vector as the Kronecker product of the azimuth
/// and elevation ULA factors; length m_az*m_el, unit norm.
arma::cx_vec upa_steering(double az_freq, double el_freq, arma::uword m_az, arma::uword m_el);

/// Physical angle (radians) to the sampled spatial frequency sin(angle).
double angle_to_spatial_freq(double angle_rad);

} // namespace arrays
} // namespace irsbeam
