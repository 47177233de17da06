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

#include "irsbeam/objective.hpp"
#include "irsbeam/pbf.hpp"
#include "test_support.hpp"

using namespace irsbeam;

namespace {

objective::BeamformerState random_state(const SystemConfig &cfg,
                                        const channel::ChannelSet &channels, Rng &rng) {
    objective::BeamformerState st;
    st.theta = arma::reshape(
        test_support::random_unit_phases(cfg.array_geometry().m_tot(), rng),
        cfg.array_geometry().m(), cfg.g_irs);
    st.p = test_support::random_precoder(cfg.n_bs, cfg.k_users, cfg.p_max_watts(), rng);
    st.alpha.zeros(cfg.k_users);
    return st;
}

} // namespace

TEST_CASE("effective_channel basics") {
    SystemConfig cfg = test_support::small_config();
    Rng rng(17);
    const auto ch = channel::synth_scenario(cfg, rng);

    SUBCASE("all-zero phases give a zero vector") {
        const arma::cx_mat theta(cfg.array_geometry().m(), cfg.g_irs, arma::fill::zeros);
        CHECK(arma::norm(objective::effective_channel(ch, theta, 0)) == 0.0);
    }

    SUBCASE("out-of-range user index throws") {
        const arma::cx_mat theta(cfg.array_geometry().m(), cfg.g_irs, arma::fill::ones);
        CHECK_THROWS_AS(objective::effective_channel(ch, theta, cfg.k_users),
                        std::invalid_argument);
    }

    SUBCASE("single-unit single-element case reduces to a scalar product") {
        SystemConfig tiny = cfg;
        tiny.g_irs = 1;
        tiny.m_az = 1;
        tiny.m_el = 1;
        tiny.geometry.irs_pos = {arma::vec2{40.0, 30.0}};
        Rng r2(3);
        const auto tiny_ch = channel::synth_scenario(tiny, r2);
        arma::cx_mat theta(1, 1);
        theta(0, 0) = 1.0;
        const arma::cx_vec got = objective::effective_channel(tiny_ch, theta, 0);
        // h_eff^H = conj(h) * (row of W)
        const arma::cx_vec expect =
            tiny_ch.w[0].t() * arma::cx_vec{tiny_ch.h[0][0][0]};
        CHECK(arma::norm(got - expect) < 1e-14);
    }

    SUBCASE("matches the stacked reflection identity") {
        Rng r3(11);
        const arma::cx_mat theta = arma::reshape(
            test_support::random_unit_phases(cfg.array_geometry().m_tot(), r3),
            cfg.array_geometry().m(), cfg.g_irs);
        const arma::cx_mat p =
            test_support::random_precoder(cfg.n_bs, cfg.k_users, cfg.p_max_watts(), r3);
        const arma::cx_vec theta_vec = arma::vectorise(theta);
        const auto stacked = pbf::build_stacked(ch, p);
        const arma::cx_mat h_eff = objective::effective_channels(ch, theta);
        for (arma::uword k = 0; k < cfg.k_users; ++k)
            for (arma::uword j = 0; j < cfg.k_users; ++j) {
                const std::complex<double> via_stack = arma::cdot(theta_vec, stacked.v[k][j]);
                const std::complex<double> via_eff = arma::cdot(h_eff.col(k), p.col(j));
                CHECK(std::abs(via_stack - via_eff) <
                      1e-12 * std::max(1.0, std::abs(via_eff)));
            }
    }
}

TEST_CASE("sinr closed forms") {
    // orthogonal construction: h_eff = I columns, diagonal precoder
    arma::cx_mat h_eff = arma::eye<arma::cx_mat>(2, 2);
    arma::cx_mat p(2, 2, arma::fill::zeros);
    p(0, 0) = std::sqrt(3.0);
    p(1, 1) = 1.0;

    const arma::vec gamma = objective::all_sinr(h_eff, p, 1.0);
    CHECK(gamma[0] == doctest::Approx(3.0));
    CHECK(gamma[1] == doctest::Approx(1.0));

    // zero column k gives zero SINR
    p(0, 0) = 0.0;
    CHECK(objective::all_sinr(h_eff, p, 1.0)[0] == doctest::Approx(0.0));

    // K = 1: no interference term
    arma::cx_mat h1(3, 1, arma::fill::ones);
    arma::cx_mat p1(3, 1, arma::fill::ones);
    const double expect = std::norm(arma::cdot(h1.col(0), p1.col(0))) / 0.5;
    CHECK(objective::all_sinr(h1, p1, 0.5)[0] == doctest::Approx(expect));

    CHECK_THROWS_AS(objective::all_sinr(h_eff, p, 0.0), std::invalid_argument);
}

TEST_CASE("weighted_sum_rate on constructed SINRs") {
    arma::cx_mat h_eff = arma::eye<arma::cx_mat>(2, 2);
    const objective::Weights w = objective::Weights::equal(2);

    arma::cx_mat zero(2, 2, arma::fill::zeros);
    CHECK(objective::weighted_sum_rate(h_eff, zero, w, 1.0) == doctest::Approx(0.0));

    arma::cx_mat p(2, 2, arma::fill::zeros);
    p(0, 0) = std::sqrt(3.0); // gamma = (3, 1) -> log2 4 + log2 2 = 3
    p(1, 1) = 1.0;
    CHECK(objective::weighted_sum_rate(h_eff, p, w, 1.0) == doctest::Approx(3.0));

    arma::cx_mat h1 = arma::eye<arma::cx_mat>(1, 1);
    arma::cx_mat p1 = arma::eye<arma::cx_mat>(1, 1); // gamma = 1, rate = 1
    CHECK(objective::weighted_sum_rate(h1, p1, objective::Weights::equal(1), 1.0) ==
          doctest::Approx(1.0));
}

TEST_CASE("surrogate ties the rate at alpha = sinr") {
    SystemConfig cfg = test_support::small_config();
    const double noise_w = cfg.noise_watts();
    const objective::Weights w{cfg.weight_vector()};

    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(500 + trial);
        const auto ch = channel::synth_scenario(cfg, rng);
        auto st = random_state(cfg, ch, rng);
        st.alpha = objective::update_alpha(ch, st, noise_w);
        const double f1 = objective::weighted_sum_rate(ch, st, w, noise_w);
        const double f2 = objective::surrogate_f2(ch, st, w, noise_w);
        CHECK(std::abs(f2 - f1) <= 1e-10 * std::abs(f1));
    }

    SUBCASE("zero alpha and zero sinr give zero") {
        CHECK(objective::surrogate_f2(arma::vec{0.0}, arma::vec{0.0},
                                      objective::Weights::equal(1)) == doctest::Approx(0.0));
    }

    SUBCASE("alpha scan peaks at the sinr") {
        const arma::vec gamma{1.7};
        const objective::Weights w1 = objective::Weights::equal(1);
        const double at_gamma = objective::surrogate_f2(gamma, gamma, w1);
        for (double a = 0.0; a < 4.0; a += 0.05)
            CHECK(objective::surrogate_f2(arma::vec{a}, gamma, w1) <= at_gamma + 1e-12);
    }
}

TEST_CASE("update_alpha is the surrogate maximizer") {
    SystemConfig cfg = test_support::small_config();
    const double noise_w = cfg.noise_watts();
    const objective::Weights w{cfg.weight_vector()};

    SUBCASE("zero precoder gives zero alpha") {
        Rng rng(800);
        const auto ch = channel::synth_scenario(cfg, rng);
        auto st = random_state(cfg, ch, rng);
        st.p.zeros();
        CHECK(arma::norm(objective::update_alpha(ch, st, noise_w)) == 0.0);
    }

    SUBCASE("the update never lowers the surrogate") {
        for (int trial = 0; trial < 25; ++trial) {
            Rng rng(900 + trial);
            const auto ch = channel::synth_scenario(cfg, rng);
            auto st = random_state(cfg, ch, rng);
            st.alpha = arma::abs(test_support::random_cx_vec(cfg.k_users, rng));
            const double before = objective::surrogate_f2(ch, st, w, noise_w);
            st.alpha = objective::update_alpha(ch, st, noise_w);
            const double after = objective::surrogate_f2(ch, st, w, noise_w);
            CHECK(after >= before - 1e-12 * std::abs(after));
        }
    }

    SUBCASE("central finite differences vanish at the update") {
        const double step = 1e-5;
        for (int trial = 0; trial < 25; ++trial) {
            Rng rng(1200 + trial);
            const auto ch = channel::synth_scenario(cfg, rng);
            auto st = random_state(cfg, ch, rng);
            const arma::vec gamma = objective::update_alpha(ch, st, noise_w);
            for (arma::uword k = 0; k < cfg.k_users; ++k) {
                arma::vec hi = gamma, lo = gamma;
                hi[k] += step;
                lo[k] -= step;
                const double d = (objective::surrogate_f2(hi, gamma, w) -
                                  objective::surrogate_f2(lo, gamma, w)) /
                                 (2.0 * step);
                CHECK(std::abs(d) < 1e-6);
            }
        }
    }
}

TEST_CASE("weight scaling multiplies both objectives") {
    SystemConfig cfg = test_support::small_config();
    const double noise_w = cfg.noise_watts();
    Rng rng(77);
    const auto ch = channel::synth_scenario(cfg, rng);
    auto st = random_state(cfg, ch, rng);
    st.alpha = objective::update_alpha(ch, st, noise_w);

    const objective::Weights w{cfg.weight_vector()};
    const objective::Weights scaled{3.5 * cfg.weight_vector()};

    CHECK(objective::weighted_sum_rate(ch, st, scaled, noise_w) ==
          doctest::Approx(3.5 * objective::weighted_sum_rate(ch, st, w, noise_w)));
    CHECK(objective::surrogate_f2(ch, st, scaled, noise_w) ==
          doctest::Approx(3.5 * objective::surrogate_f2(ch, st, w, noise_w)));
}

TEST_CASE("weights validation") {
    objective::Weights w{arma::vec{1.0, -0.5}};
    CHECK_THROWS_AS(w.validate(2), std::invalid_argument);
    CHECK_THROWS_AS(w.validate(3), std::invalid_argument);
}
