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

#include <doctest.h>

#include "irsbeam/arrays.hpp"
#include "irsbeam/rng.hpp"

using namespace irsbeam;

TEST_CASE("index_set centered values") {
    const arma::vec two = arrays::index_set(2);
    CHECK(two[0] == doctest::Approx(-0.5));
    CHECK(two[1] == doctest::Approx(0.5));

    const arma::vec three = arrays::index_set(3);
    CHECK(three[0] == doctest::Approx(-1.0));
    CHECK(three[1] == doctest::Approx(0.0));
    CHECK(three[2] == doctest::Approx(1.0));

    const arma::vec big = arrays::index_set(32);
    CHECK(big.min() == doctest::Approx(-15.5));
    CHECK(big.max() == doctest::Approx(15.5));
    CHECK(arma::accu(big) == doctest::Approx(0.0).epsilon(1e-14));

    CHECK_THROWS_AS(arrays::index_set(0), std::invalid_argument);
}

TEST_CASE("ula_steering closed-form entries") {
    const arma::cx_vec flat = arrays::ula_steering(0.0, 4);
    for (arma::uword i = 0; i < 4; ++i) {
        CHECK(flat[i].real() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(flat[i].imag() == doctest::Approx(0.0).epsilon(1e-14));
    }

    // indices {-1/2, +1/2}, exponent -j*pi*i: entries (1/sqrt 2)*(+j, -j)
    const arma::cx_vec pair = arrays::ula_steering(1.0, 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(pair[0].real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(pair[0].imag() == doctest::Approx(inv_sqrt2));
    CHECK(pair[1].real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(pair[1].imag() == doctest::Approx(-inv_sqrt2));

    CHECK(arma::norm(arrays::ula_steering(0.3, 32)) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(arrays::ula_steering(std::nan(""), 4), std::invalid_argument);
    CHECK_THROWS_AS(arrays::ula_steering(0.1, 0), std::invalid_argument);
}

TEST_CASE("upa_steering is the Kronecker product of the axis factors") {
    const arma::cx_vec uniform = arrays::upa_steering(0.0, 0.0, 2, 3);
    for (const auto &e : uniform)
        CHECK(std::abs(e - std::complex<double>(1.0 / std::sqrt(6.0), 0.0)) < 1e-14);

    const arma::cx_vec degenerate = arrays::upa_steering(1.0, 0.0, 2, 1);
    const arma::cx_vec ula = arrays::ula_steering(1.0, 2);
    CHECK(arma::norm(degenerate - ula) < 1e-14);

    const arma::cx_vec az = arrays::ula_steering(0.4, 10);
    const arma::cx_vec el = arrays::ula_steering(0.7, 2);
    const arma::cx_vec upa = arrays::upa_steering(0.4, 0.7, 10, 2);
    for (arma::uword p = 0; p < 10; ++p)
        for (arma::uword q = 0; q < 2; ++q)
            CHECK(std::abs(upa[p * 2 + q] - az[p] * el[q]) < 1e-14);

    CHECK_THROWS_AS(arrays::upa_steering(0.0, 0.0, 0, 2), std::invalid_argument);
}

TEST_CASE("angle_to_spatial_freq") {
    CHECK(arrays::angle_to_spatial_freq(0.0) == doctest::Approx(0.0));
    CHECK(arrays::angle_to_spatial_freq(arma::datum::pi / 2.0) == doctest::Approx(1.0));
    CHECK(arrays::angle_to_spatial_freq(arma::datum::pi / 6.0) == doctest::Approx(0.5));
}

TEST_CASE("steering vector properties over random draws") {
    Rng rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        const double f = rng.uniform(-1.0, 1.0);
        const arma::uword n = 1 + static_cast<arma::uword>(rng.uniform() * 40.0);
        const arma::cx_vec a = arrays::ula_steering(f, n);

        CHECK(arma::norm(a) == doctest::Approx(1.0).epsilon(1e-12));
        for (arma::uword i = 0; i < n; ++i)
            CHECK(std::abs(a[i]) ==
                  doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(1e-12));

        // conjugate symmetry about the center index
        for (arma::uword i = 0; i < n; ++i)
            CHECK(std::abs(a[i] - std::conj(a[n - 1 - i])) < 1e-12);

        // negated frequency conjugates the vector
        const arma::cx_vec neg = arrays::ula_steering(-f, n);
        CHECK(arma::norm(neg - arma::conj(a)) < 1e-12);
    }

    for (int trial = 0; trial < 20; ++trial) {
        const double fa = rng.uniform(-1.0, 1.0);
        const double fe = rng.uniform(-1.0, 1.0);
        const arma::uword ma = 1 + static_cast<arma::uword>(rng.uniform() * 10.0);
        const arma::uword me = 1 + static_cast<arma::uword>(rng.uniform() * 10.0);
        const arma::cx_vec upa = arrays::upa_steering(fa, fe, ma, me);
        CHECK(arma::norm(upa) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(arma::norm(upa - arma::kron(arrays::ula_steering(fa, ma),
                                          arrays::ula_steering(fe, me))) < 1e-14);
    }
}

TEST_CASE("ArrayGeometry validation and derived sizes") {
    arrays::ArrayGeometry geom{32, 2, 10, 2};
    CHECK(geom.m() == 20);
    CHECK(geom.m_tot() == 40);
    geom.validate();

    geom.m_el = 0;
    CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
}
