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

#include "irsbeam/pbf.hpp"

#include <cmath>
#include <stdexcept>

#include "irsbeam/errors.hpp"

namespace irsbeam {
namespace pbf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSnapTol = 1e-6; // near-unit moduli are renormalized after the solve

arma::vec sqrt_alpha_bar(const arma::vec &alpha, const objective::Weights &weights) {
    return arma::sqrt(weights.omega % (1.0 + alpha));
}

// s(k, j) = theta^H v[k][j]
arma::cx_mat inner_products(const StackedReflection &stacked, const arma::cx_vec &theta_vec) {
    const arma::uword k_users = stacked.n_users();
    arma::cx_mat s(k_users, k_users);
    for (arma::uword k = 0; k < k_users; ++k)
        for (arma::uword j = 0; j < k_users; ++j)
            s(k, j) = arma::cdot(theta_vec, stacked.v[k][j]);
    return s;
}

} // namespace

PhaseCodebook PhaseCodebook::discrete(unsigned b) {
    if (b < 1 || b > 30)
        throw std::invalid_argument("PhaseCodebook: bits must be in [1, 30]");
    PhaseCodebook c;
    c.bits = b;
    return c;
}

arma::cx_vec reflection_vector(const channel::ChannelSet &channels, const arma::cx_vec &p_j,
                               arma::uword g, arma::uword k) {
    if (g >= channels.n_irs() || k >= channels.n_users())
        throw std::invalid_argument("reflection_vector: index out of range");
    const arma::cx_mat &w = channels.w[g];
    if (p_j.n_elem != w.n_cols)
        throw std::invalid_argument("reflection_vector: precoder length mismatch");
    return arma::conj(channels.h[g][k]) % (w * p_j);
}

arma::cx_vec stack(const std::vector<arma::cx_vec> &parts) {
    if (parts.empty())
        throw std::invalid_argument("stack: no parts");
    arma::uword total = 0;
    for (const auto &part : parts)
        total += part.n_elem;
    arma::cx_vec out(total);
    arma::uword at = 0;
    for (const auto &part : parts) {
        out.subvec(at, at + part.n_elem - 1) = part;
        at += part.n_elem;
    }
    return out;
}

StackedReflection build_stacked(const channel::ChannelSet &channels, const arma::cx_mat &p) {
    const arma::uword n_irs = channels.n_irs();
    const arma::uword k_users = channels.n_users();
    if (p.n_cols != k_users)
        throw std::invalid_argument("build_stacked: precoder column count != user count");

    // t[g][j] = W_g p_j, shared across users
    std::vector<std::vector<arma::cx_vec>> t(n_irs);
    for (arma::uword g = 0; g < n_irs; ++g) {
        t[g].reserve(k_users);
        for (arma::uword j = 0; j < k_users; ++j)
            t[g].push_back(channels.w[g] * p.col(j));
    }

    StackedReflection stacked;
    stacked.v.resize(k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        stacked.v[k].reserve(k_users);
        for (arma::uword j = 0; j < k_users; ++j) {
            std::vector<arma::cx_vec> parts;
            parts.reserve(n_irs);
            for (arma::uword g = 0; g < n_irs; ++g)
                parts.push_back(arma::conj(channels.h[g][k]) % t[g][j]);
            stacked.v[k].push_back(stack(parts));
        }
    }
    stacked.m_tot = k_users > 0 ? stacked.v[0][0].n_elem : 0;
    return stacked;
}

arma::cx_vec update_rho(const StackedReflection &stacked, const arma::cx_vec &theta_vec,
                        const arma::vec &alpha, const objective::Weights &weights,
                        double noise_w) {
    if (!(noise_w > 0.0))
        throw std::invalid_argument("update_rho: noise power must be > 0");
    const arma::uword k_users = stacked.n_users();
    weights.validate(k_users);

    const arma::cx_mat s = inner_products(stacked, theta_vec);
    const arma::vec root = sqrt_alpha_bar(alpha, weights);
    arma::cx_vec rho(k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const double denom = arma::accu(arma::square(arma::abs(s.row(k)))) + noise_w;
        rho[k] = root[k] * s(k, k) / denom;
    }
    return rho;
}

QuadraticForm assemble_quadratic(const StackedReflection &stacked, const arma::cx_vec &rho,
                                 const arma::vec &alpha, const objective::Weights &weights) {
    const arma::uword k_users = stacked.n_users();
    weights.validate(k_users);
    const arma::uword m_tot = stacked.m_tot;

    QuadraticForm q;
    q.a.zeros(m_tot, m_tot);
    q.b.zeros(m_tot);
    const arma::vec root = sqrt_alpha_bar(alpha, weights);
    for (arma::uword k = 0; k < k_users; ++k) {
        const double rho_sq = std::norm(rho[k]);
        if (rho_sq > 0.0) {
            for (arma::uword j = 0; j < k_users; ++j)
                q.a += rho_sq * (stacked.v[k][j] * stacked.v[k][j].t());
        }
        q.b += root[k] * std::conj(rho[k]) * stacked.v[k][k];
    }
    // enforce exact Hermitian symmetry against accumulation round-off
    q.a = 0.5 * (q.a + q.a.t());
    return q;
}

namespace {

double relaxed_objective(const arma::cx_mat &a, const arma::cx_vec &b,
                         const arma::cx_vec &theta) {
    return -std::real(arma::cdot(theta, a * theta)) + 2.0 * std::real(arma::cdot(theta, b));
}

// Cyclic coordinate maximization of the relaxed quadratic over the unit
// polydisc, starting from theta. Monotone in the objective; pins active
// coordinates to exact unit modulus. Shares the fixed point with the dual
// sweep below.
unsigned polish_primal(const arma::cx_mat &a, const arma::cx_vec &b, arma::cx_vec &theta,
                       double coord_tol, unsigned max_sweeps) {
    const arma::uword m_tot = b.n_elem;
    const arma::vec diag_a = arma::real(a.diag());
    arma::cx_vec r = a * theta;
    unsigned sweeps = 0;
    for (; sweeps < max_sweeps; ++sweeps) {
        double max_change = 0.0;
        for (arma::uword k = 0; k < m_tot; ++k) {
            const std::complex<double> c = b[k] - r[k] + diag_a[k] * theta[k];
            const double c_abs = std::abs(c);
            std::complex<double> updated;
            if (c_abs > diag_a[k])
                updated = c / c_abs; // constraint active
            else if (diag_a[k] > 0.0)
                updated = c / diag_a[k]; // interior
            else
                continue; // a_kk = 0 and c = 0: any value optimal, keep current
            const std::complex<double> delta = updated - theta[k];
            const double change = std::abs(delta);
            if (change > 0.0) {
                theta[k] = updated;
                r += a.col(k) * delta;
                if (change > max_change)
                    max_change = change;
            }
        }
        if (max_change < coord_tol)
            break;
    }
    return sweeps;
}

} // namespace

DualSolveResult solve_dual_theta(const arma::cx_mat &a, const arma::cx_vec &b,
                                 const DualSolveOptions &opts) {
    const arma::uword m_tot = b.n_elem;
    if (a.n_rows != m_tot || a.n_cols != m_tot)
        throw std::invalid_argument("solve_dual_theta: dimension mismatch");
    if (m_tot == 0)
        throw std::invalid_argument("solve_dual_theta: empty problem");

    DualSolveResult res;
    res.zeta.zeros(m_tot);

    const double b_scale = arma::norm(b, "inf");
    if (b_scale == 0.0) {
        // no linear drive: any feasible point is stationary in phase
        res.theta = arma::cx_vec(m_tot, arma::fill::ones);
        res.degenerate = true;
        return res;
    }

    const arma::vec diag_a = arma::real(a.diag());
    const double scale = std::max(b_scale, arma::accu(diag_a) / static_cast<double>(m_tot));
    // keeps a + diag(zeta) positive definite through degenerate (slack) regions;
    // well below the 1e-6 complementary-slackness certificate
    const double zeta_floor = 1e-9 * scale;

    // Stage 1, coordinate descent on the dual: for coordinate k with the others
    // fixed, theta_k(zeta_k) = [D0 b]_k / (1 + zeta_k [D0]_kk) with
    // D0 = (a + diag(zeta_{-k}))^{-1}, and the unit-modulus stationarity gives
    // zeta_k = max(0, (|[D0 b]_k| - 1) / [D0]_kk), which in terms of the
    // maintained D = (a + diag(zeta))^{-1} reads zeta_k + (|[Db]_k| - 1) / D_kk.
    // Each accepted change is a Hermitian rank-one update of D.
    arma::vec zeta(m_tot);
    if (opts.init_zeta && opts.init_zeta->n_elem == m_tot && opts.init_zeta->min() >= 0.0) {
        for (arma::uword k = 0; k < m_tot; ++k)
            zeta[k] = std::max((*opts.init_zeta)[k], zeta_floor);
    } else {
        for (arma::uword k = 0; k < m_tot; ++k)
            zeta[k] = std::max(std::abs(b[k]), zeta_floor);
    }

    const auto shifted = [&](const arma::vec &z) {
        arma::cx_mat s = a;
        s.diag() += arma::conv_to<arma::cx_vec>::from(z);
        return s;
    };
    const auto refresh = [&](arma::cx_mat &d, arma::cx_vec &g) {
        if (!arma::inv_sympd(d, shifted(zeta)))
            d = arma::inv(shifted(zeta));
        g = d * b;
    };

    arma::cx_mat d;
    arma::cx_vec g;
    refresh(d, g);

    constexpr unsigned kRefreshPeriod = 16; // bound drift of the rank-one updates
    bool dual_converged = false;
    unsigned dual_sweeps = opts.max_sweeps >= 50 ? opts.max_sweeps - 50 : opts.max_sweeps;
    for (res.sweeps = 1; res.sweeps <= dual_sweeps; ++res.sweeps) {
        double max_change = 0.0;
        for (arma::uword k = 0; k < m_tot; ++k) {
            const double d_kk = std::real(d(k, k));
            if (!(d_kk > 0.0))
                continue;
            const double z_new =
                std::max(zeta_floor, zeta[k] + (std::abs(g[k]) - 1.0) / d_kk);
            const double delta = z_new - zeta[k];
            if (delta == 0.0)
                continue;
            const double denom = 1.0 + delta * d_kk;
            const std::complex<double> theta_before = g[k];
            const arma::cx_vec col = d.col(k);
            d -= (delta / denom) * (col * col.t());
            g -= (delta / denom) * (col * g[k]);
            zeta[k] = z_new;
            const double change = std::abs(g[k] - theta_before);
            if (change > max_change)
                max_change = change;
        }
        if (max_change < opts.coord_tol) {
            dual_converged = true;
            break;
        }
        if (res.sweeps % kRefreshPeriod == 0)
            refresh(d, g);
    }

    // exact primal point at the final multipliers, one refinement step
    const arma::cx_mat s_final = shifted(zeta);
    arma::cx_vec theta = arma::solve(s_final, b, arma::solve_opts::likely_sympd);
    theta += arma::solve(s_final, arma::cx_vec(b - s_final * theta),
                         arma::solve_opts::likely_sympd);

    // Stage 2, monotone primal polish: cyclic ascent pins active coordinates to
    // exact unit modulus and guarantees the result never scores below the
    // caller's reference point. When the dual stage stalled this carries the
    // whole remaining sweep budget.
    if (opts.init && opts.init->n_elem == m_tot) {
        arma::cx_vec ref = *opts.init;
        for (arma::uword i = 0; i < m_tot; ++i) {
            const double mod = std::abs(ref[i]);
            if (mod > 1.0)
                ref[i] /= mod;
        }
        if (relaxed_objective(a, b, ref) > relaxed_objective(a, b, theta))
            theta = ref;
    }
    const unsigned polish_budget =
        dual_converged ? 50 : std::max(50u, opts.max_sweeps - res.sweeps);
    res.sweeps += polish_primal(a, b, theta, opts.coord_tol, polish_budget);

    // final multipliers, slack count and stationarity residual at the fixed point
    const arma::cx_vec r = a * theta;
    res.residual = 0.0;
    for (arma::uword k = 0; k < m_tot; ++k) {
        const std::complex<double> c = b[k] - r[k] + diag_a[k] * theta[k];
        const double c_abs = std::abs(c);
        res.zeta[k] = std::max(0.0, c_abs - diag_a[k]);
        if (res.zeta[k] <= zeta_floor && std::abs(theta[k]) < 1.0 - kSnapTol)
            ++res.slack_coords;
        const double station = std::abs(r[k] + res.zeta[k] * theta[k] - b[k]);
        if (station > res.residual)
            res.residual = station;
    }

    if (res.residual > opts.unit_tol * std::max(scale, arma::norm(res.zeta, "inf")))
        throw numeric_failure("solve_dual_theta: sweep cap exceeded, residual " +
                              std::to_string(res.residual));

    // snap near-unit moduli to the circle, preserving phase
    for (arma::uword k = 0; k < m_tot; ++k) {
        const double mod = std::abs(theta[k]);
        if (std::abs(mod - 1.0) <= kSnapTol && mod > 0.0)
            theta[k] /= mod;
    }
    res.theta = theta;
    return res;
}

arma::cx_vec quantize_phases(const arma::cx_vec &theta_vec, const PhaseCodebook &codebook) {
    if (codebook.is_continuous())
        return theta_vec;
    const arma::uword levels = arma::uword(1) << *codebook.bits;
    const double step = kTwoPi / static_cast<double>(levels);

    arma::cx_vec out(theta_vec.n_elem);
    for (arma::uword i = 0; i < theta_vec.n_elem; ++i) {
        double phase = std::arg(theta_vec[i]);
        if (phase < 0.0)
            phase += kTwoPi;
        const double x = phase / step;
        arma::uword idx = static_cast<arma::uword>(std::floor(x));
        const double frac = x - static_cast<double>(idx);
        if (frac > 0.5)
            ++idx; // ties (frac == 0.5) stay on the smaller phase
        idx %= levels;
        out[i] = std::polar(1.0, static_cast<double>(idx) * step);
    }
    return out;
}

arma::cx_vec random_phases(arma::uword m_tot, const PhaseCodebook &codebook, Rng &rng) {
    arma::cx_vec out(m_tot);
    if (codebook.is_continuous()) {
        for (arma::uword i = 0; i < m_tot; ++i)
            out[i] = std::polar(1.0, rng.uniform(0.0, kTwoPi));
    } else {
        const arma::uword levels = arma::uword(1) << *codebook.bits;
        const double step = kTwoPi / static_cast<double>(levels);
        for (arma::uword i = 0; i < m_tot; ++i) {
            arma::uword idx = static_cast<arma::uword>(rng.uniform() * static_cast<double>(levels));
            if (idx >= levels)
                idx = levels - 1;
            out[i] = std::polar(1.0, static_cast<double>(idx) * step);
        }
    }
    return out;
}

double fractional_objective(const StackedReflection &stacked, const arma::cx_vec &theta_vec,
                            const arma::vec &alpha, const objective::Weights &weights,
                            double noise_w) {
    const arma::uword k_users = stacked.n_users();
    weights.validate(k_users);
    const arma::cx_mat s = inner_products(stacked, theta_vec);
    const arma::vec alpha_bar = weights.omega % (1.0 + alpha);
    double sum = 0.0;
    for (arma::uword k = 0; k < k_users; ++k) {
        const double denom = arma::accu(arma::square(arma::abs(s.row(k)))) + noise_w;
        sum += alpha_bar[k] * std::norm(s(k, k)) / denom;
    }
    return sum;
}

double qt_objective(const StackedReflection &stacked, const arma::cx_vec &theta_vec,
                    const arma::cx_vec &rho, const arma::vec &alpha,
                    const objective::Weights &weights, double noise_w) {
    const arma::uword k_users = stacked.n_users();
    weights.validate(k_users);
    const arma::cx_mat s = inner_products(stacked, theta_vec);
    const arma::vec root = sqrt_alpha_bar(alpha, weights);
    double sum = 0.0;
    for (arma::uword k = 0; k < k_users; ++k) {
        const double denom = arma::accu(arma::square(arma::abs(s.row(k)))) + noise_w;
        sum += 2.0 * root[k] * std::real(std::conj(rho[k]) * s(k, k)) -
               std::norm(rho[k]) * denom;
    }
    return sum;
}

double quadratic_objective(const QuadraticForm &q, const arma::cx_vec &theta_vec,
                           const arma::cx_vec &rho, double noise_w) {
    const double quad = std::real(arma::cdot(theta_vec, q.a * theta_vec));
    const double lin = 2.0 * std::real(arma::cdot(theta_vec, q.b));
    double noise_term = 0.0;
    for (arma::uword k = 0; k < rho.n_elem; ++k)
        noise_term += std::norm(rho[k]) * noise_w;
    return -quad + lin - noise_term;
}

} // namespace pbf
} // namespace irsbeam
