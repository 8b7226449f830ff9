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


#include "racovert/ao.hpp"
#include "racovert/covertness.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cstring>

using namespace racovert;
using namespace racovert::testing;

namespace
{
    AOConfig ra_config(std::uint64_t seed = 7, double jitter = 1e-3)
    {
        AOConfig c;
        c.seed = seed;
        c.init_jitter = jitter;
        return c;
    }

    bool same_bits(const std::vector<double> &a, const std::vector<double> &b)
    {
        return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
    }
} // namespace

TEST_CASE("scheme names")
{
    for (Scheme s : {Scheme::ra, Scheme::fixed, Scheme::random, Scheme::isotropic})
        CHECK(parse_scheme(to_string(s)) == s);
    CHECK_THROWS_AS(parse_scheme("RA"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scheme(""), std::invalid_argument);

    AOConfig bad;
    bad.max_iters = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = AOConfig{};
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = AOConfig{};
    bad.init_jitter = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    const SystemParams params;
    CHECK_THROWS_AS(run_baseline(default_scene(2, 2), params, AOConfig{}), std::invalid_argument);
}

TEST_CASE("alternating optimization trace")
{
    const SystemParams params;
    for (int side : {2, 3, 4})
    {
        const ArrayScene scene = default_scene(side, side);
        const AOResult res = run_ao(scene, params, ra_config());
        REQUIRE(res.status == SolveStatus::optimal);
        REQUIRE(res.rate_trace.size() == res.power_ratio_trace.size());
        CHECK(res.rate_trace.size() == static_cast<size_t>(res.iterations) + 1);
        for (size_t i = 1; i < res.rate_trace.size(); ++i)
            CHECK(res.rate_trace[i] >= res.rate_trace[i - 1]);
        for (double r : res.power_ratio_trace)
            CHECK(r <= 1.0 + 1e-6);
        const double eta = covert_budget(params).eta;
        for (double p : res.willie_powers)
            CHECK(p <= eta * (1.0 + 1e-6));
        CHECK(res.final_rate() <= rate_upper_bound(scene, params));
        CHECK(res.theta_opt.within_bounds(params.theta_max));
        CHECK(res.final_rate() == doctest::Approx(covert_rate(res.w_opt, channel_vector(scene, 0, res.theta_opt, params),
                                                              params))
                                      .epsilon(1e-12));

        const AOResult again = run_ao(scene, params, ra_config());
        CHECK(same_bits(res.rate_trace, again.rate_trace));
    }
}

TEST_CASE("loose tolerance stops after one rotation")
{
    const SystemParams params;
    AOConfig c = ra_config();
    c.rel_tol = 1e9;
    const AOResult res = run_ao(default_scene(3, 3), params, c);
    CHECK(res.iterations == 1);
    CHECK(res.converged);
    CHECK(res.rate_trace.size() == 2);

    c.rel_tol = 1e-12;
    c.max_iters = 2;
    const AOResult capped = run_ao(default_scene(3, 3), params, c);
    CHECK(capped.iterations <= 2);
}

TEST_CASE("baselines")
{
    const SystemParams params;
    const ArrayScene scene = default_scene(3, 3);
    AOConfig zero_start = ra_config(7, 0.0);
    const AOResult ra = run_ao(scene, params, zero_start);
    AOConfig fc = zero_start;
    fc.scheme = Scheme::fixed;
    const AOResult fixed = run_scheme(scene, params, fc);
    REQUIRE(fixed.rate_trace.size() == 1);
    CHECK(fixed.rate_trace[0] == ra.rate_trace[0]);
    CHECK(fixed.theta_opt.angles().isZero(0.0));
    CHECK(ra.final_rate() >= fixed.final_rate());

    AOConfig rc = fc;
    rc.scheme = Scheme::random;
    rc.seed = 99;
    const AOResult r1 = run_scheme(scene, params, rc);
    const AOResult r2 = run_scheme(scene, params, rc);
    CHECK(same_bits(r1.rate_trace, r2.rate_trace));
    CHECK(r1.theta_opt.angles() == random_rotation(9, params.theta_max, 99).angles());
    rc.seed = 100;
    CHECK(run_scheme(scene, params, rc).theta_opt.angles() != r1.theta_opt.angles());

    AOConfig ic = fc;
    ic.scheme = Scheme::isotropic;
    const AOResult iso = run_scheme(scene, params, ic);
    SystemParams flat = params;
    flat.directivity = 0.0;
    Rng rng(61);
    const AOResult turned = evaluate_fixed_angles(scene, flat, random_angles(rng, 9, params.theta_max));
    CHECK(turned.final_rate() == doctest::Approx(iso.final_rate()).epsilon(1e-7));

    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL})
        CHECK(random_rotation(16, params.theta_max, seed).within_bounds(params.theta_max));
}

TEST_CASE("single element without wardens turns to the receiver")
{
    SystemParams params;
    const double pi = kPi;
    struct Case
    {
        double zenith, azimuth;
    };
    for (const Case c : {Case{0.0, 0.0}, Case{pi / 6.0, 0.0}, Case{0.3, 2.0}, Case{0.45, 4.0}})
    {
        const ArrayScene scene(build_upa(1, 1, 0.0625), {spherical_node(20.0, c.zenith, c.azimuth)});
        AOConfig cfg = ra_config(5, 0.0);
        cfg.rel_tol = 1e-12;
        cfg.max_iters = 60;
        const AOResult res = run_ao(scene, params, cfg);
        REQUIRE(res.status == SolveStatus::optimal);
        const double align = incidence_cosine(res.theta_opt.pointing(0), scene.unit_dir(0, 0));
        CHECK(std::acos(std::min(align, 1.0)) <= 1e-3);
        const double best = std::log2(1.0 + params.pmax * channel_power_gain(1.0, scene.distance(0, 0), params) /
                                                 params.noise_bob);
        CHECK(res.final_rate() == doctest::Approx(best).epsilon(1e-6));
        CHECK(rate_upper_bound(scene, params) == doctest::Approx(best).epsilon(1e-14));
    }
}

TEST_CASE("weighted rotation model follows the re-optimized objective")
{
    const SystemParams params;
    const double eta = covert_budget(params).eta;
    Rng rng(62);
    for (int trial = 0; trial < 5; ++trial)
    {
        const ArrayScene scene = default_scene(2, 2);
        const RotationState rot = random_angles(rng, 4, 0.3);
        auto channels = [&](const Eigen::Matrix2Xd &a, ChannelVector &h0, std::vector<ChannelVector> &hks) {
            const RotationState r(a);
            h0 = channel_vector(scene, 0, r, params);
            hks = {channel_vector(scene, 1, r, params), channel_vector(scene, 2, r, params)};
        };
        auto reoptimized = [&](const Eigen::Matrix2Xd &a) {
            ChannelVector h0;
            std::vector<ChannelVector> hks;
            channels(a, h0, hks);
            const double t = solve_beamforming(h0, hks, eta, params.pmax, 1e-12).t;
            return t * t;
        };

        ChannelVector h0;
        std::vector<ChannelVector> hks;
        channels(rot.angles(), h0, hks);
        const BeamformingSolution bf = solve_beamforming(h0, hks, eta, params.pmax, 1e-12);
        const BeamformingMultipliers mult = kkt_multipliers(bf.w, h0, hks, eta, params.pmax);
        SurrogateQuadratic model = objective_surrogate(scene, rot, bf.w, params);
        for (int k = 1; k <= 2; ++k)
        {
            const SurrogateQuadratic ck = constraint_surrogate(scene, rot, bf.w, params, k);
            model.b -= 2.0 * bf.t * mult.wardens[static_cast<size_t>(k - 1)] * ck.b;
        }
        const Eigen::VectorXd fd = angle_gradient_fd(reoptimized, rot.angles(), 1e-5);
        CHECK(rel_err(model.b, fd) <= 1e-3);
    }
}

TEST_CASE("fixed-beamformer acceptance")
{
    const SystemParams params;
    AOConfig c = ra_config();
    c.acceptance = RotationAcceptance::fixed_beamformer;
    const AOResult res = run_ao(default_scene(3, 3), params, c);
    REQUIRE(res.status == SolveStatus::optimal);
    for (size_t i = 1; i < res.rate_trace.size(); ++i)
        CHECK(res.rate_trace[i] >= res.rate_trace[i - 1]);
    for (double r : res.power_ratio_trace)
        CHECK(r <= 1.0 + 1e-6);
}

TEST_CASE("re-optimized update")
{
    const SystemParams params;
    const ArrayScene scene = default_scene(2, 2);
    const RotationState zeros = RotationState::zeros(4);
    AngleStep none;
    none.delta = Eigen::Matrix2Xd::Zero(2, 4);
    none.accepted = true;
    const ReoptimizedOutcome still = reoptimized_update(scene, zeros, none, params, 0.0);
    CHECK_FALSE(still.accepted);
    CHECK(still.rotation.angles() == zeros.angles());

    // a step that cannot beat an unreachable incumbent is refused after ten halvings
    AngleStep some = none;
    some.delta.row(0).setConstant(0.1);
    const ReoptimizedOutcome refused = reoptimized_update(scene, zeros, some, params, 1e9);
    CHECK_FALSE(refused.accepted);
    CHECK(refused.backtracks == 10);

    const ReoptimizedOutcome taken = reoptimized_update(scene, zeros, some, params, 0.0);
    CHECK(taken.accepted);
    CHECK(taken.rotation.within_bounds(params.theta_max));
    CHECK(taken.rate > 0.0);
}
