#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "snrctl/errors.hpp"
#include "snrctl/loop.hpp"
#include "snrctl/norms.hpp"
#include "snrctl/synthesis.hpp"

using namespace snrctl;

namespace {

RationalTransfer stable_p() {
    return RationalTransfer(Polynomial({1.0}), Polynomial({-0.5, 1.0}));
}

RationalTransfer example_p() {
    return RationalTransfer(Polynomial({1.0}), Polynomial({0.0, -2.0, 1.0}));
}

SynthesisResult synthesize_example(double snr, int nc = 32) {
    SynthesisOptions opts;
    opts.spectral_order = nc;
    return synthesize(siso_plant(example_p()), make_channel(constant_tf(1.0), snr), opts);
}

}  // namespace

TEST_CASE("open loop: C = D = 0 gives the forced T entries and S = 1") {
    const GeneralizedPlant plant = siso_plant(stable_p());
    const ClosedLoop loop =
        closed_loop(plant, constant_tf(0.0), constant_tf(0.0), constant_tf(1.0));
    CHECK(loop.k.is_zero());
    CHECK(loop.s.num.eval(0.0) == doctest::Approx(1.0));
    CHECK(loop.s.den.degree() == 0);
    // Only the (y <- w2) entry is nonzero.
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == 0 && j == 1) {
                CHECK_FALSE(loop.t_map(i, j).is_zero());
            } else {
                CHECK(loop.t_map(i, j).is_zero());
            }
        }
    }
    CHECK(check_internal_stability(loop).stable);

    const AnalyticCost cost = analytic_cost(loop);
    CHECK(cost.j == doctest::Approx(h2_norm_sq(stable_p())).epsilon(1e-9));
    CHECK(cost.channel_power == doctest::Approx(0.0));
    CHECK(cost.grid_cross_check < 1e-6);
}

TEST_CASE("open loop on the unstable example plant is flagged unstable") {
    const GeneralizedPlant plant = siso_plant(example_p());
    const ClosedLoop loop =
        closed_loop(plant, constant_tf(0.0), constant_tf(0.0), constant_tf(1.0));
    CHECK_FALSE(check_internal_stability(loop).stable);
    CHECK_THROWS_AS(analytic_cost(loop), UnstableLoop);
    CHECK_THROWS_AS(simulate(loop, 100000, 1), UnstableLoop);
}

TEST_CASE("synthesized loop for the example plant is internally stable") {
    // A compact controller keeps the fully generic assembly (no Youla
    // shortcut, S = 1/(1-KGyu) by rational arithmetic) well conditioned.
    SynthesisOptions opts;
    opts.n_grid = 256;
    opts.fir_order = 6;
    opts.spectral_order = 24;
    const SynthesisResult res = synthesize(siso_plant(example_p()),
                                           make_channel(constant_tf(1.0), 20.0), opts);
    const GeneralizedPlant plant = siso_plant(example_p());
    const ClosedLoop loop = closed_loop(plant, res.c, res.d, constant_tf(1.0));
    const StabilityReport report = check_internal_stability(loop);
    CHECK(report.stable);
    const AnalyticCost cost = analytic_cost(loop);
    CHECK(cost.j == doctest::Approx(res.j_analytic).epsilon(1e-6));
    CHECK(cost.channel_power == doctest::Approx(res.channel_power).epsilon(1e-6));
    // SNR activity
    CHECK(res.channel_power >= 0.98 * 20.0);
    CHECK(res.channel_power <= 1.02 * 20.0);
    // Entries that hinge on C being outer: D S Gyu and D S stable
    CHECK(report.entry_stable[2]);
    CHECK(report.entry_stable[8]);
}

TEST_CASE("hidden unstable factor in D flips exactly the two D-column entries") {
    SynthesisOptions opts;
    opts.n_grid = 256;
    opts.fir_order = 6;
    opts.spectral_order = 24;
    const SynthesisResult res = synthesize(siso_plant(example_p()),
                                           make_channel(constant_tf(1.0), 20.0), opts);
    const GeneralizedPlant plant = siso_plant(example_p());
    // Move an unstable factor between C and D: K = D'C' is unchanged.
    const RationalTransfer f(Polynomial({-1.5, 1.0}), Polynomial({0.0, 1.0}));  // (z-1.5)/z
    const RationalTransfer c2 = res.c * f;
    const RationalTransfer d2 = res.d / f;
    const ClosedLoop loop = closed_loop(plant, c2, d2, constant_tf(1.0));
    const StabilityReport report = check_internal_stability(loop);
    CHECK_FALSE(report.stable);
    // D-column entries: (0,2) = D Gyu S and (2,2) = D S.
    CHECK_FALSE(report.entry_stable[2]);
    CHECK_FALSE(report.entry_stable[8]);
    // All other entries keep their poles inside the disk.
    for (int idx : {0, 1, 3, 4, 5, 6, 7}) CHECK(report.entry_stable[idx]);
}

TEST_CASE("simulation matches the analytic variance for the stable open loop") {
    const GeneralizedPlant plant = siso_plant(stable_p());
    const ClosedLoop loop =
        closed_loop(plant, constant_tf(0.0), constant_tf(0.0), constant_tf(1.0));
    const SimulationEstimate est = simulate(loop, 1000000, 42);
    const double expect = h2_norm_sq(stable_p());
    CHECK(std::abs(est.z_variance - expect) <= est.z_halfwidth);
    CHECK(est.t_power == doctest::Approx(0.0));
}

TEST_CASE("simulation is bitwise deterministic for a fixed seed") {
    const GeneralizedPlant plant = siso_plant(stable_p());
    const ClosedLoop loop =
        closed_loop(plant, constant_tf(0.0), constant_tf(0.0), constant_tf(1.0));
    const SimulationEstimate a = simulate(loop, 50000, 7);
    const SimulationEstimate b = simulate(loop, 50000, 7);
    CHECK(a.z_variance == b.z_variance);
    CHECK(a.t_power == b.t_power);
    CHECK(a.z_halfwidth == b.z_halfwidth);
}

TEST_CASE("uniform noise option reproduces the same second moments") {
    const GeneralizedPlant plant = siso_plant(stable_p());
    const ClosedLoop loop =
        closed_loop(plant, constant_tf(0.0), constant_tf(0.0), constant_tf(1.0));
    const SimulationEstimate est = simulate(loop, 1000000, 11, NoiseKind::Uniform);
    CHECK(std::abs(est.z_variance - h2_norm_sq(stable_p())) <= est.z_halfwidth);
}

TEST_CASE("simulated channel power tracks the analytic value on a synthesized loop") {
    const SynthesisResult res = synthesize_example(20.0);
    const GeneralizedPlant plant = siso_plant(example_p());
    YoulaLoopData youla{coprime_factorize(plant), res.q_hat};
    const ClosedLoop loop = closed_loop(plant, res.c, res.d, constant_tf(1.0), &youla);
    const SimulationEstimate est = simulate(loop, 1000000, 2024);
    CHECK(std::abs(est.t_power - res.channel_power) <= 0.02 * res.channel_power);
    CHECK(std::abs(est.z_variance - res.j_analytic) <=
          std::max(est.z_halfwidth, 0.02 * res.j_analytic));
}

TEST_CASE("3-sigma intervals cover the analytic values across seeds") {
    const GeneralizedPlant plant = siso_plant(stable_p());
    const ClosedLoop loop =
        closed_loop(plant, constant_tf(0.0), constant_tf(0.0), constant_tf(1.0));
    const double expect = h2_norm_sq(stable_p());
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const SimulationEstimate est = simulate(loop, 200000, seed);
        if (std::abs(est.z_variance - expect) <= est.z_halfwidth) ++covered;
    }
    CHECK(covered >= 38);  // 95% of 40 runs
}

TEST_CASE("simulate validates the step count") {
    const GeneralizedPlant plant = siso_plant(stable_p());
    const ClosedLoop loop =
        closed_loop(plant, constant_tf(0.0), constant_tf(0.0), constant_tf(1.0));
    CHECK_THROWS_AS(simulate(loop, 1000, 1), OutsideDomain);
}
