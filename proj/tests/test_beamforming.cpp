// SPDX-License-Identifier: Apache-2.0
//
// racovert: covert transmission with rotatable directional antenna arrays
// Copyright (C) 2026 The racovert authors
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


#include "racovert/beamforming.hpp"
#include "racovert/covertness.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace racovert;
using namespace racovert::testing;

namespace
{
    // Largest |u^H h0| s over random unit directions u, each scaled by the largest s that
    // keeps s^2 <= pmax and s^2 |u^H h_k|^2 <= eta. A lower estimate of the optimum.
    double sampled_best(Rng &rng, const ChannelVector &h0, const std::vector<ChannelVector> &hks, double eta,
                        double pmax, int samples, Beamformer *arg = nullptr)
    {
        const int n = static_cast<int>(h0.size());
        auto value = [&](const Beamformer &u) {
            double s2 = pmax;
            for (const auto &hk : hks)
            {
                const double g = std::norm(u.dot(hk));
                if (g > 0.0)
                    s2 = std::min(s2, eta / g);
            }
            return std::sqrt(s2) * std::abs(u.dot(h0));
        };
        double best = 0.0;
        Beamformer best_u = Beamformer::Zero(n);
        for (int s = 0; s < samples; ++s)
        {
            const Beamformer u = random_beamformer(rng, n);
            const double v = value(u);
            if (v > best)
            {
                best = v;
                best_u = u;
            }
        }
        // local random refinement
        double radius = 0.1;
        for (int round = 0; round < 4000; ++round)
        {
            Beamformer u = best_u + radius * random_channel(rng, n).cast<std::complex<double>>();
            u /= u.norm();
            const double v = value(u);
            if (v > best)
            {
                best = v;
                best_u = u;
            }
            else if (round % 200 == 199)
                radius *= 0.5;
        }
        if (arg)
            *arg = best_u;
        return best;
    }
} // namespace

TEST_CASE("maximum ratio transmission")
{
    ChannelVector h(2);
    h << std::complex<double>(3, 0), std::complex<double>(0, 4);
    const Beamformer w = mrt_closed_form(h, 4.0);
    CHECK(w(0).real() == doctest::Approx(1.2));
    CHECK(w(1).imag() == doctest::Approx(1.6));
    CHECK(w.squaredNorm() == doctest::Approx(4.0));
    CHECK(std::abs(w.dot(h)) == doctest::Approx(10.0));
    CHECK_THROWS_AS(mrt_closed_form(ChannelVector::Zero(3), 1.0), std::invalid_argument);

    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial)
    {
        const int n = 1 + static_cast<int>(rng.uniform() * 8);
        const ChannelVector h0 = random_channel(rng, n);
        const double pmax = rng.uniform(0.1, 3.0);
        const double best = std::abs(mrt_closed_form(h0, pmax).dot(h0));
        for (int s = 0; s < 20; ++s)
        {
            const Beamformer u = random_beamformer(rng, n, std::sqrt(pmax) * rng.uniform());
            CHECK(std::abs(u.dot(h0)) <= best * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("without wardens the solver reproduces MRT")
{
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial)
    {
        const int n = 1 + static_cast<int>(rng.uniform() * 16);
        const ChannelVector h0 = random_channel(rng, n, 1e-4);
        const double pmax = rng.uniform(0.1, 3.0);
        const BeamformingSolution sol = solve_beamforming(h0, {}, 1.0, pmax);
        REQUIRE(sol.status == SolveStatus::optimal);
        const Beamformer mrt = mrt_closed_form(h0, pmax);
        CHECK((sol.w - mrt).norm() <= 1e-6 * mrt.norm());
        CHECK(sol.t == doctest::Approx(std::sqrt(pmax) * h0.norm()).epsilon(1e-8));

        // a budget no unit-power beam can reach changes nothing
        const ChannelVector h1 = random_channel(rng, n, 1e-4);
        const BeamformingSolution loose = solve_beamforming(h0, {h1}, 1e3 * pmax * h1.squaredNorm(), pmax);
        CHECK(loose.t == doctest::Approx(sol.t).epsilon(1e-8));
    }
}

TEST_CASE("single antenna with one warden")
{
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial)
    {
        ChannelVector h0 = random_channel(rng, 1);
        ChannelVector h1 = random_channel(rng, 1);
        const double pmax = rng.uniform(0.5, 2.0);
        const double eta = rng.uniform(0.01, 2.0) * pmax * std::norm(h1(0));
        const BeamformingSolution sol = solve_beamforming(h0, {h1}, eta, pmax);
        REQUIRE(sol.status == SolveStatus::optimal);
        const double mag = std::min(std::sqrt(pmax), std::sqrt(eta) / std::abs(h1(0)));
        CHECK(sol.t == doctest::Approx(mag * std::abs(h0(0))).epsilon(1e-7));
        CHECK(std::abs(std::conj(sol.w(0)) * h0(0) - sol.t) < 1e-10 * sol.t);
    }
}

TEST_CASE("solution feasibility and phase")
{
    Rng rng(44);
    for (int trial = 0; trial < 40; ++trial)
    {
        const int n = 1 + static_cast<int>(rng.uniform() * 9);
        const int k_count = static_cast<int>(rng.uniform() * 3);
        const ChannelVector h0 = random_channel(rng, n, 1e-4);
        std::vector<ChannelVector> hks;
        for (int k = 0; k < k_count; ++k)
            hks.push_back(random_channel(rng, n, 1e-4));
        const double pmax = 1.0;
        const double eta = rng.uniform(1e-3, 1.0) * 1e-8;
        const BeamformingSolution sol = solve_beamforming(h0, hks, eta, pmax);
        REQUIRE(sol.status == SolveStatus::optimal);
        CHECK(sol.w.squaredNorm() <= pmax);
        for (const auto &hk : hks)
            CHECK(received_power(sol.w, hk) <= eta);
        const std::complex<double> g = sol.w.dot(h0);
        CHECK(std::abs(g.imag()) <= 1e-12 * std::abs(g) + 1e-300);
        CHECK(g.real() >= 0.0);
        CHECK(g.real() == doctest::Approx(sol.t).epsilon(1e-14));

        // a common phase on the receiver channel rotates w but not the optimum
        const std::complex<double> phase = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
        const BeamformingSolution rot = solve_beamforming(h0 * phase, hks, eta, pmax);
        CHECK(rot.t == doctest::Approx(sol.t).epsilon(1e-6));

        // a larger budget never hurts
        const BeamformingSolution more = solve_beamforming(h0, hks, 2.0 * eta, pmax);
        CHECK(more.t >= sol.t * (1.0 - 1e-7));
    }
}

TEST_CASE("zero receiver channel")
{
    std::vector<ChannelVector> hks{ChannelVector::Ones(3)};
    const BeamformingSolution sol = solve_beamforming(ChannelVector::Zero(3), hks, 1.0, 1.0);
    CHECK(sol.status == SolveStatus::optimal);
    CHECK(sol.w.norm() == 0.0);
    CHECK(sol.t == 0.0);
    CHECK_THROWS_AS(solve_beamforming(ChannelVector::Ones(3), hks, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_beamforming(ChannelVector::Ones(3), {ChannelVector::Ones(2)}, 1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("two antennas with one warden against the polar grid")
{
    Rng rng(45);
    for (int trial = 0; trial < 10; ++trial)
    {
        const ChannelVector h0 = random_channel(rng, 2);
        const ChannelVector h1 = random_channel(rng, 2);
        const double pmax = 1.0;
        const double eta = rng.uniform(0.01, 0.5) * std::norm(mrt_closed_form(h0, pmax).dot(h1));
        const BeamformingSolution sol = solve_beamforming(h0, {h1}, eta, pmax);
        REQUIRE(sol.status == SolveStatus::optimal);
        const double grid = polar_grid_oracle(h0, h1, eta, pmax, 2e-3);
        CHECK(std::abs(sol.t - grid) <= 1e-3 * grid);
        CHECK(sol.t >= grid * (1.0 - 1e-7));
    }
}

TEST_CASE("small instances against direction sampling")
{
    Rng rng(46);
    for (int trial = 0; trial < 20; ++trial)
    {
        const int n = 1 + trial % 3;
        const int k_count = 1 + (trial / 3) % 2;
        const ChannelVector h0 = random_channel(rng, n);
        std::vector<ChannelVector> hks;
        for (int k = 0; k < k_count; ++k)
            hks.push_back(random_channel(rng, n));
        const double eta = rng.uniform(0.02, 0.5);
        const BeamformingSolution sol = solve_beamforming(h0, hks, eta, 1.0);
        REQUIRE(sol.status == SolveStatus::optimal);
        const double sampled = sampled_best(rng, h0, hks, eta, 1.0, 20000);
        CHECK(sol.t >= sampled * (1.0 - 1e-7));
        if (k_count < n)
            CHECK(sol.t <= sampled * (1.0 + 1e-3));
    }
}

TEST_CASE("stationarity with the fitted multipliers")
{
    Rng rng(47);
    int with_active = 0;
    for (int trial = 0; trial < 30; ++trial)
    {
        const int n = 2 + static_cast<int>(rng.uniform() * 6);
        const int k_count = 1 + static_cast<int>(rng.uniform() * 2);
        const ChannelVector h0 = random_channel(rng, n);
        std::vector<ChannelVector> hks;
        for (int k = 0; k < k_count; ++k)
            hks.push_back(random_channel(rng, n));
        const double eta = rng.uniform(0.005, 0.2);
        const BeamformingSolution sol = solve_beamforming(h0, hks, eta, 1.0, 1e-10);
        REQUIRE(sol.status == SolveStatus::optimal);
        const BeamformingMultipliers mult = kkt_multipliers(sol.w, h0, hks, eta, 1.0);
        CHECK(mult.power >= 0.0);
        Eigen::VectorXcd resid = 0.5 * h0 - mult.power * sol.w;
        for (int k = 0; k < k_count; ++k)
        {
            CHECK(mult.wardens[static_cast<size_t>(k)] >= 0.0);
            const auto &hk = hks[static_cast<size_t>(k)];
            resid -= mult.wardens[static_cast<size_t>(k)] * hk * hk.dot(sol.w);
            with_active += mult.wardens[static_cast<size_t>(k)] > 0.0 ? 1 : 0;
        }
        CHECK(resid.norm() <= 1e-4 * h0.norm());
    }
    CHECK(with_active > 0);

    // inactive constraints everywhere: no multipliers
    const BeamformingMultipliers none =
        kkt_multipliers(Beamformer::Constant(2, 0.1), ChannelVector::Ones(2), {ChannelVector::Ones(2)}, 1.0, 1.0);
    CHECK(none.power == 0.0);
    CHECK(none.wardens[0] == 0.0);
}

TEST_CASE("realistic array channels")
{
    const SystemParams params;
    const ArrayScene scene = default_scene();
    const RotationState zeros = RotationState::zeros(scene.num_antennas());
    const ChannelVector h0 = channel_vector(scene, 0, zeros, params);
    const std::vector<ChannelVector> hks{channel_vector(scene, 1, zeros, params), channel_vector(scene, 2, zeros, params)};
    const double eta = covert_budget(params).eta;
    const BeamformingSolution sol = solve_beamforming(h0, hks, eta, params.pmax);
    REQUIRE(sol.status == SolveStatus::optimal);
    for (const auto &hk : hks)
        CHECK(received_power(sol.w, hk) <= eta);
    CHECK(sol.w.squaredNorm() <= params.pmax);
    const double rate = covert_rate(sol.w, h0, params);
    CHECK(rate > 20.0);
    CHECK(rate < std::log2(1.0 + params.pmax * h0.squaredNorm() / params.noise_bob) + 1e-9);
}
