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

#include "irsbeam/errors.hpp"
#include "irsbeam/objective.hpp"
#include "irsbeam/pbf.hpp"
#include "test_support.hpp"

using namespace irsbeam;

namespace {

// Small synthetic (A, b) pair with controllable definiteness.
pbf::QuadraticForm synthetic_quadratic(arma::uword m_tot, arma::uword rank, Rng &rng) {
    pbf::QuadraticForm q;
    const arma::cx_mat u = test_support::random_cx_mat(m_tot, rank, rng);
    q.a = u * u.t();
    q.a = 0.5 * (q.a + q.a.t());
    q.b = test_support::random_cx_vec(m_tot, rng, 2.0);
    return q;
}

void check_kkt(const pbf::QuadraticForm &q, const pbf::DualSolveResult &res) {
    const arma::uword m_tot = q.b.n_elem;
    // stationarity: (a + diag(zeta)) theta = b
    arma::cx_mat shifted = q.a;
    shifted.diag() += arma::conv_to<arma::cx_vec>::from(res.zeta);
    const arma::cx_vec direct = arma::solve(shifted, q.b);
    CHECK(arma::norm(direct - res.theta, "inf") < 1e-8 * std::max(1.0, arma::norm(direct, "inf")));
    for (arma::uword k = 0; k < m_tot; ++k) {
        CHECK(std::abs(res.theta[k]) <= 1.0 + 1e-8);        // primal feasibility
        CHECK(res.zeta[k] >= 0.0);                          // dual feasibility
        CHECK(std::abs(res.zeta[k] * (std::norm(res.theta[k]) - 1.0)) <= 1e-6);
    }
}

} // namespace

TEST_CASE("reflection_vector matches the effective channel") {
    SystemConfig cfg = test_support::small_config();
    Rng rng(5);
    const auto ch = channel::synth_scenario(cfg, rng);

    SUBCASE("zero precoder column gives a zero vector") {
        const arma::cx_vec zero(cfg.n_bs, arma::fill::zeros);
        CHECK(arma::norm(pbf::reflection_vector(ch, zero, 0, 0)) == 0.0);
    }

    SUBCASE("per-unit inner products reproduce the effective channel product") {
        Rng r2(6);
        const arma::cx_mat p =
            test_support::random_precoder(cfg.n_bs, cfg.k_users, cfg.p_max_watts(), r2);
        const arma::cx_mat theta = arma::reshape(
            test_support::random_unit_phases(cfg.array_geometry().m_tot(), r2),
            cfg.array_geometry().m(), cfg.g_irs);
        const arma::cx_mat h_eff = objective::effective_channels(ch, theta);
        for (arma::uword k = 0; k < cfg.k_users; ++k)
            for (arma::uword j = 0; j < cfg.k_users; ++j) {
                std::complex<double> acc = 0.0;
                for (arma::uword g = 0; g < cfg.g_irs; ++g)
                    acc += arma::cdot(theta.col(g), pbf::reflection_vector(ch, p.col(j), g, k));
                const std::complex<double> expect = arma::cdot(h_eff.col(k), p.col(j));
                CHECK(std::abs(acc - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
            }
    }

    SUBCASE("a unit-vector user channel masks one row") {
        channel::ChannelSet tiny;
        Rng r3(9);
        tiny.w.push_back(test_support::random_cx_mat(3, 4, r3));
        tiny.h.resize(1);
        arma::cx_vec e1(3, arma::fill::zeros);
        e1[0] = 1.0;
        tiny.h[0].push_back(e1);
        const arma::cx_vec p = test_support::random_cx_vec(4, r3);
        const arma::cx_vec v = pbf::reflection_vector(tiny, p, 0, 0);
        const arma::cx_vec wp = tiny.w[0] * p;
        CHECK(std::abs(v[0] - wp[0]) < 1e-14);
        CHECK(std::abs(v[1]) == 0.0);
        CHECK(std::abs(v[2]) == 0.0);
    }
}

TEST_CASE("stack concatenation and trace identity") {
    Rng rng(15);

    SUBCASE("single part is the identity") {
        const arma::cx_vec v = test_support::random_cx_vec(5, rng);
        CHECK(arma::norm(pbf::stack({v}) - v) == 0.0);
    }

    SUBCASE("entry layout is unit-major") {
        const arma::cx_vec a = test_support::random_cx_vec(3, rng);
        const arma::cx_vec b = test_support::random_cx_vec(3, rng);
        const arma::cx_vec s = pbf::stack({a, b});
        for (arma::uword m = 0; m < 3; ++m) {
            CHECK(s[m] == a[m]);
            CHECK(s[3 + m] == b[m]);
        }
    }

    SUBCASE("vectorized inner product equals the trace form") {
        const arma::uword m = 4, g = 2;
        const arma::cx_mat theta = test_support::random_cx_mat(m, g, rng);
        const arma::cx_mat v = test_support::random_cx_mat(m, g, rng);
        const std::complex<double> via_vec =
            arma::cdot(arma::vectorise(theta), arma::vectorise(v));
        const std::complex<double> via_trace = arma::trace(theta.t() * v);
        CHECK(std::abs(via_vec - via_trace) < 1e-13);

        std::vector<arma::cx_vec> parts;
        for (arma::uword i = 0; i < g; ++i)
            parts.push_back(v.col(i));
        CHECK(arma::norm(pbf::stack(parts) - arma::vectorise(v)) == 0.0);
    }
}

TEST_CASE("update_rho tightness") {
    Rng rng(25);
    const arma::uword k_users = 3, m_tot = 8;
    const arma::vec alpha = arma::abs(test_support::random_cx_vec(k_users, rng)) + 0.1;
    const objective::Weights w = objective::Weights::equal(k_users);
    const double noise_w = 0.4;

    SUBCASE("zero phases give zero auxiliaries") {
        const auto stacked = test_support::synthetic_stacked(k_users, m_tot, rng);
        const arma::cx_vec zero(m_tot, arma::fill::zeros);
        CHECK(arma::norm(pbf::update_rho(stacked, zero, alpha, w, noise_w)) == 0.0);
    }

    SUBCASE("surrogate equals the ratio objective at the update") {
        for (int trial = 0; trial < 100; ++trial) {
            Rng local(2500 + trial);
            const auto stacked = test_support::synthetic_stacked(k_users, m_tot, local);
            const arma::cx_vec theta = test_support::random_unit_phases(m_tot, local);
            const arma::cx_vec rho = pbf::update_rho(stacked, theta, alpha, w, noise_w);
            const double f7 = pbf::fractional_objective(stacked, theta, alpha, w, noise_w);
            const double f8 = pbf::qt_objective(stacked, theta, rho, alpha, w, noise_w);
            CHECK(std::abs(f8 - f7) <= 1e-10 * std::abs(f7));
        }
    }

    SUBCASE("single-user case matches the scalar formula") {
        const auto stacked = test_support::synthetic_stacked(1, m_tot, rng);
        const arma::cx_vec theta = test_support::random_unit_phases(m_tot, rng);
        const arma::vec a1{0.7};
        const arma::cx_vec rho =
            pbf::update_rho(stacked, theta, a1, objective::Weights::equal(1), noise_w);
        const std::complex<double> s = arma::cdot(theta, stacked.v[0][0]);
        const std::complex<double> expect =
            std::sqrt(1.7) * s / (std::norm(s) + noise_w);
        CHECK(std::abs(rho[0] - expect) < 1e-12);
    }
}

TEST_CASE("assemble_quadratic reproduces the surrogate") {
    Rng rng(35);
    const arma::uword k_users = 3, m_tot = 8;
    const arma::vec alpha = arma::abs(test_support::random_cx_vec(k_users, rng)) + 0.1;
    const objective::Weights w = objective::Weights::equal(k_users);
    const double noise_w = 0.4;

    SUBCASE("zero auxiliaries give a zero form") {
        const auto stacked = test_support::synthetic_stacked(k_users, m_tot, rng);
        const arma::cx_vec rho(k_users, arma::fill::zeros);
        const auto q = pbf::assemble_quadratic(stacked, rho, alpha, w);
        CHECK(arma::norm(q.a, "fro") == 0.0);
        CHECK(arma::norm(q.b) == 0.0);
    }

    SUBCASE("the assembled matrix is Hermitian PSD") {
        const auto stacked = test_support::synthetic_stacked(k_users, m_tot, rng);
        const arma::cx_vec theta = test_support::random_unit_phases(m_tot, rng);
        const arma::cx_vec rho = pbf::update_rho(stacked, theta, alpha, w, noise_w);
        const auto q = pbf::assemble_quadratic(stacked, rho, alpha, w);
        CHECK(arma::norm(q.a - q.a.t(), "fro") == 0.0);
        const arma::vec eig = arma::eig_sym(q.a);
        CHECK(eig.min() >= -1e-10 * arma::norm(q.a, "fro"));
    }

    SUBCASE("quadratic and transform objectives agree at random points") {
        for (int trial = 0; trial < 50; ++trial) {
            Rng local(3500 + trial);
            const auto stacked = test_support::synthetic_stacked(k_users, m_tot, local);
            const arma::cx_vec theta = test_support::random_unit_phases(m_tot, local);
            const arma::cx_vec rho = test_support::random_cx_vec(k_users, local);
            const auto q = pbf::assemble_quadratic(stacked, rho, alpha, w);
            const double f8 = pbf::qt_objective(stacked, theta, rho, alpha, w, noise_w);
            const double f9 = pbf::quadratic_objective(q, theta, rho, noise_w);
            CHECK(std::abs(f9 - f8) <= 1e-10 * std::max(1.0, std::abs(f8)));
        }
    }
}

TEST_CASE("solve_dual_theta closed forms") {
    SUBCASE("diagonal-free case aligns with b") {
        Rng rng(45);
        const arma::uword m_tot = 6;
        const arma::cx_mat a(m_tot, m_tot, arma::fill::zeros);
        const arma::cx_vec b = test_support::random_cx_vec(m_tot, rng);
        const auto res = pbf::solve_dual_theta(a, b);
        for (arma::uword k = 0; k < m_tot; ++k) {
            CHECK(std::abs(res.theta[k] - b[k] / std::abs(b[k])) < 1e-10);
            CHECK(res.zeta[k] == doctest::Approx(std::abs(b[k])).epsilon(1e-10));
        }
    }

    SUBCASE("scalar case with active constraint matches a phase grid") {
        const double a_val = 0.6;
        const std::complex<double> b_val{1.1, -0.9};
        arma::cx_mat a(1, 1);
        a(0, 0) = a_val;
        const auto res = pbf::solve_dual_theta(a, arma::cx_vec{b_val});
        CHECK(res.zeta[0] == doctest::Approx(std::abs(b_val) - a_val).epsilon(1e-10));
        CHECK(std::abs(res.theta[0]) == doctest::Approx(1.0).epsilon(1e-10));

        // 1e-4 grid over the circle
        double best = -1e300, best_phase = 0.0;
        for (double phase = 0.0; phase < 2.0 * arma::datum::pi; phase += 1e-4) {
            const std::complex<double> t = std::polar(1.0, phase);
            const double val = -a_val + 2.0 * std::real(std::conj(t) * b_val);
            if (val > best) {
                best = val;
                best_phase = phase;
            }
        }
        const double got_phase = std::arg(res.theta[0]);
        const double wrapped = got_phase < 0.0 ? got_phase + 2.0 * arma::datum::pi : got_phase;
        CHECK(std::abs(wrapped - best_phase) < 1e-4);
    }

    SUBCASE("scalar case with slack constraint stays interior") {
        arma::cx_mat a(1, 1);
        a(0, 0) = 4.0;
        const std::complex<double> b_val{1.0, 1.0};
        const auto res = pbf::solve_dual_theta(a, arma::cx_vec{b_val});
        CHECK(res.zeta[0] == doctest::Approx(0.0));
        CHECK(std::abs(res.theta[0] - b_val / 4.0) < 1e-10);
        CHECK(res.slack_coords == 1);
    }

    SUBCASE("zero drive returns the degenerate marker") {
        const arma::cx_mat a = arma::eye<arma::cx_mat>(3, 3);
        const arma::cx_vec b(3, arma::fill::zeros);
        const auto res = pbf::solve_dual_theta(a, b);
        CHECK(res.degenerate);
        for (const auto &t : res.theta)
            CHECK(std::abs(t - std::complex<double>(1.0, 0.0)) == 0.0);
    }
}

TEST_CASE("solve_dual_theta KKT certificate on random instances") {
    for (int trial = 0; trial < 30; ++trial) {
        Rng rng(4500 + trial);
        const arma::uword m_tot = 8;
        const auto q = synthetic_quadratic(m_tot, 3, rng);
        const auto res = pbf::solve_dual_theta(q.a, q.b);
        check_kkt(q, res);
    }
}

TEST_CASE("solve_dual_theta unit modulus on realistic instances") {
    SystemConfig cfg = test_support::small_config();
    const double noise_w = cfg.noise_watts();
    const objective::Weights w{cfg.weight_vector()};
    for (int trial = 0; trial < 10; ++trial) {
        Rng rng(5500 + trial);
        const auto ch = channel::synth_scenario(cfg, rng);
        const arma::cx_mat p =
            test_support::random_precoder(cfg.n_bs, cfg.k_users, cfg.p_max_watts(), rng);
        const arma::cx_vec theta =
            test_support::random_unit_phases(cfg.array_geometry().m_tot(), rng);
        const auto stacked = pbf::build_stacked(ch, p);
        const arma::vec alpha = arma::abs(test_support::random_cx_vec(cfg.k_users, rng)) + 0.5;
        const arma::cx_vec rho = pbf::update_rho(stacked, theta, alpha, w, noise_w);
        const auto q = pbf::assemble_quadratic(stacked, rho, alpha, w);
        const auto res = pbf::solve_dual_theta(q.a, q.b);
        CHECK(!res.degenerate);
        CHECK(res.slack_coords == 0);
        for (const auto &t : res.theta)
            CHECK(std::abs(std::abs(t) - 1.0) <= 1e-8);
        check_kkt(q, res);
    }
}

TEST_CASE("solve_dual_theta per-coordinate modulus is monotone in the multiplier") {
    Rng rng(65);
    const arma::uword m_tot = 5;
    const auto q = synthetic_quadratic(m_tot, 2, rng);
    auto res = pbf::solve_dual_theta(q.a, q.b);

    const arma::uword k = 2;
    double prev = 1e300;
    for (double z = 0.0; z <= 50.0; z += 0.5) {
        arma::vec zeta = res.zeta;
        zeta[k] = z;
        arma::cx_mat shifted = q.a;
        shifted.diag() += arma::conv_to<arma::cx_vec>::from(zeta);
        shifted.diag() += 1e-9; // keep the probe solvable at zeta = 0
        const arma::cx_vec theta = arma::solve(shifted, q.b);
        const double mod = std::abs(theta[k]);
        CHECK(mod <= prev + 1e-12);
        prev = mod;
    }
}

TEST_CASE("solve_dual_theta never lowers the quadratic from a feasible start") {
    Rng rng(75);
    for (int trial = 0; trial < 20; ++trial) {
        const arma::uword m_tot = 7;
        const auto q = synthetic_quadratic(m_tot, 3, rng);
        const arma::cx_vec start = test_support::random_unit_phases(m_tot, rng);
        pbf::DualSolveOptions opts;
        opts.init = start;
        const auto res = pbf::solve_dual_theta(q.a, q.b, opts);
        const arma::cx_vec rho0(1, arma::fill::zeros);
        const double before = pbf::quadratic_objective(q, start, rho0, 0.0);
        const double after = pbf::quadratic_objective(q, res.theta, rho0, 0.0);
        CHECK(after >= before - 1e-9);
    }
}

TEST_CASE("quantize_phases grid projection") {
    const auto one_bit = pbf::PhaseCodebook::discrete(1);
    const auto two_bit = pbf::PhaseCodebook::discrete(2);

    const arma::cx_vec in{std::polar(1.0, 0.6 * arma::datum::pi)};
    const arma::cx_vec out = pbf::quantize_phases(in, one_bit);
    CHECK(std::abs(out[0] - std::polar(1.0, arma::datum::pi)) < 1e-12);

    const arma::cx_vec in2{std::polar(1.0, 0.26 * 2.0 * arma::datum::pi)};
    const arma::cx_vec out2 = pbf::quantize_phases(in2, two_bit);
    CHECK(std::abs(out2[0] - std::polar(1.0, arma::datum::pi / 2.0)) < 1e-12);

    SUBCASE("midpoint ties break toward the smaller phase") {
        const arma::cx_vec mid{std::polar(1.0, arma::datum::pi / 4.0)};
        const arma::cx_vec snapped = pbf::quantize_phases(mid, two_bit);
        CHECK(std::abs(snapped[0] - std::complex<double>(1.0, 0.0)) < 1e-12);
    }

    SUBCASE("circular error stays within half the grid step") {
        Rng rng(85);
        for (unsigned bits = 1; bits <= 6; ++bits) {
            const auto cb = pbf::PhaseCodebook::discrete(bits);
            const arma::cx_vec phases = test_support::random_unit_phases(64, rng);
            const arma::cx_vec snapped = pbf::quantize_phases(phases, cb);
            for (arma::uword i = 0; i < phases.n_elem; ++i) {
                double diff = std::abs(std::arg(phases[i] * std::conj(snapped[i])));
                CHECK(diff <= arma::datum::pi / double(1u << bits) + 1e-12);
                CHECK(std::abs(std::abs(snapped[i]) - 1.0) < 1e-15);
            }
        }
    }

    SUBCASE("continuous codebook is the identity") {
        Rng rng(86);
        const arma::cx_vec phases = test_support::random_unit_phases(8, rng);
        CHECK(arma::norm(pbf::quantize_phases(phases, pbf::PhaseCodebook::continuous()) -
                         phases) == 0.0);
    }
}

TEST_CASE("random_phases draws") {
    Rng rng(95);
    const auto cont = pbf::random_phases(100, pbf::PhaseCodebook::continuous(), rng);
    for (const auto &t : cont)
        CHECK(std::abs(std::abs(t) - 1.0) < 1e-15);

    Rng a(7), b(7);
    const auto one_bit = pbf::PhaseCodebook::discrete(1);
    CHECK(arma::norm(pbf::random_phases(16, one_bit, a) -
                     pbf::random_phases(16, one_bit, b)) == 0.0);

    Rng big(11);
    const auto draws = pbf::random_phases(10000, one_bit, big);
    arma::uword zeros = 0;
    for (const auto &t : draws)
        if (std::real(t) > 0.0)
            ++zeros;
    CHECK(double(zeros) / 10000.0 == doctest::Approx(0.5).epsilon(0.04));

    CHECK_THROWS_AS(pbf::PhaseCodebook::discrete(0), std::invalid_argument);
}
