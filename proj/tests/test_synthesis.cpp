#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "snrctl/errors.hpp"
#include "snrctl/norms.hpp"
#include "snrctl/solver.hpp"
#include "snrctl/synthesis.hpp"
#include "snrctl/trig.hpp"

using namespace snrctl;

namespace {

RationalTransfer stable_p() {
    return RationalTransfer(Polynomial({1.0}), Polynomial({-0.5, 1.0}));
}

RationalTransfer example_p() {
    return RationalTransfer(Polynomial({1.0}), Polynomial({0.0, -2.0, 1.0}));
}

}  // namespace

TEST_CASE("unstable pole product bound") {
    CHECK(unstable_pole_product_bound(example_p()) == doctest::Approx(3.0));
    CHECK(unstable_pole_product_bound(stable_p()) == doctest::Approx(0.0));
    // poles {2, 1.25}: 4 * 1.5625 - 1 = 5.25
    RationalTransfer p(Polynomial({1.0}),
                       Polynomial({-2.0, 1.0}) * Polynomial({-1.25, 1.0}));
    CHECK(unstable_pole_product_bound(p) == doctest::Approx(5.25));
}

TEST_CASE("minimum snr for the example plant is about 12") {
    const double est = min_snr_for_stabilization(siso_plant(example_p()),
                                                 constant_tf(1.0), 20, 629);
    CHECK(est == doctest::Approx(12.0).epsilon(0.02));
    CHECK(est >= unstable_pole_product_bound(example_p()));
}

TEST_CASE("minimum snr of a stable plant is zero and monotone in the order") {
    const double est = min_snr_for_stabilization(siso_plant(stable_p()),
                                                 constant_tf(1.0), 8, 256);
    CHECK(est < 1e-9);
    const GeneralizedPlant plant = siso_plant(example_p());
    const double m20 = min_snr_for_stabilization(plant, constant_tf(1.0), 20, 629);
    const double m40 = min_snr_for_stabilization(plant, constant_tf(1.0), 40, 629);
    CHECK(m40 <= m20 + 1e-12);
}

TEST_CASE("channel construction validates and normalizes") {
    ChannelSpec c = make_channel(RationalTransfer(Polynomial({0.5, 1.0}), monomial(1)), 10.0);
    CHECK(std::abs(h2_norm_sq(c.h) - 1.0) < 1e-10);
    CHECK_THROWS_AS(make_channel(constant_tf(1.0), -1.0), OutsideDomain);
    CHECK_THROWS_AS(make_channel(RationalTransfer(Polynomial({1.0}), Polynomial({-2.0, 1.0})),
                                 10.0),
                    Unstable);
}

TEST_CASE("synthesize on the example plant at snr 20") {
    SynthesisOptions opts;
    const SynthesisResult res = synthesize(siso_plant(example_p()),
                                           make_channel(constant_tf(1.0), 20.0), opts);
    CHECK(res.solver_report.status == SolveStatus::Optimal);
    CHECK(std::abs(res.j_analytic - res.gamma) <= 0.05 * res.gamma);
    CHECK(res.channel_power <= 20.0 * 1.02);
    CHECK(res.channel_power >= 20.0 * 0.98);
    // D C = K on the grid
    const FrequencyGrid grid = FrequencyGrid::uniform(128);
    for (int k = 0; k < grid.n; k += 5) {
        const double w = grid.omegas[k];
        const Complex dc = eval_freq(res.d, w) * eval_freq(res.c, w);
        const Complex kv = eval_freq(res.k, w);
        CHECK(std::abs(dc - kv) <= 1e-8 * (1.0 + std::abs(kv)));
    }
    // C stable and minimum phase
    CHECK(is_schur_stable(res.c));
    for (const Complex& z : zeros(res.c)) CHECK(std::abs(z) < 1.0);
}

TEST_CASE("synthesize reports infeasibility below the threshold") {
    SynthesisOptions opts;
    CHECK_THROWS_AS(synthesize(siso_plant(example_p()),
                               make_channel(constant_tf(1.0), 10.0), opts),
                    Infeasible);
}

TEST_CASE("large-snr synthesis of the stable plant matches the least-squares oracle") {
    SynthesisOptions opts;
    opts.n_grid = 256;
    opts.fir_order = 10;
    const GeneralizedPlant plant = siso_plant(stable_p());
    const SynthesisResult res = synthesize(plant, make_channel(constant_tf(1.0), 1e6), opts);

    // Normal-equations oracle over the same grid and FIR basis.
    const CoprimeFactors factors = coprime_factorize(plant);
    const ProgramData data = build_program_data(plant, factors, constant_tf(1.0),
                                                FrequencyGrid::uniform(256), 1e6, 0);
    const int n = data.n(), m = 10;
    Matrix design(2 * n, m);
    ColVec rhs(2 * n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < m; ++j) {
            const Complex c = data.g[k] * data.m2[k] *
                              std::polar(1.0, -j * data.grid.omegas[k]);
            design(k, j) = c.real();
            design(n + k, j) = c.imag();
        }
        rhs[k] = -(data.g[k] * data.b[k]).real();
        rhs[n + k] = -(data.g[k] * data.b[k]).imag();
    }
    const ColVec q = design.colPivHouseholderQr().solve(rhs);
    const double oracle = (design * q - rhs).squaredNorm() / n;
    CHECK(std::abs(res.j_analytic - oracle) <= 0.02 * oracle);
}

TEST_CASE("zero-weight regulation branch returns C = D = 0") {
    // G_zv = 0 makes q = 0 optimal, so M Q - U vanishes identically.
    GeneralizedPlant plant = siso_plant(stable_p());
    plant.g_zv(0, 0) = constant_tf(0.0);
    SynthesisOptions opts;
    opts.n_grid = 128;
    opts.fir_order = 6;
    const SynthesisResult res = synthesize(plant, make_channel(constant_tf(1.0), 10.0), opts);
    CHECK(res.c.is_zero());
    CHECK(res.d.is_zero());
    CHECK(res.j_analytic == doctest::Approx(0.0));
    CHECK(res.channel_power == doctest::Approx(0.0));
}

TEST_CASE("factorize_nominal_k: K = 0 returns D = 0 within the power budget") {
    const GeneralizedPlant plant = siso_plant(stable_p());
    const ChannelSpec channel = make_channel(constant_tf(1.0), 4.0);
    const FrequencyGrid grid = FrequencyGrid::uniform(256);
    const NominalFactorization nf =
        factorize_nominal_k(constant_tf(0.0), plant, channel, grid, 16);
    CHECK(nf.d.is_zero());
    CHECK(nf.bound == doctest::Approx(0.0));
    CHECK(nf.achieved == doctest::Approx(0.0));
    // C is a nonzero constant whose power stays within the budget alpha.
    CHECK(std::abs(eval_freq(nf.c, 0.0)) > 0.0);
    double c_power = 0.0;
    for (int k = 0; k < grid.n; ++k) {
        const double w = grid.omegas[k];
        const double gyv = gyv_magnitude(plant, w);
        c_power += std::norm(eval_freq(nf.c, w)) * gyv * gyv;  // S = 1 (K = 0)
    }
    c_power /= grid.n;
    CHECK(c_power <= nf.alpha);
}

TEST_CASE("factorize_nominal_k is tight for random stabilizing K") {
    const GeneralizedPlant plant = siso_plant(example_p());
    const CoprimeFactors factors = coprime_factorize(plant);
    const ChannelSpec channel = make_channel(constant_tf(1.0), 30.0);
    const FrequencyGrid grid = FrequencyGrid::uniform(629);
    const ProgramData data = build_program_data(plant, factors, channel.h, grid, 30.0, 0);
    const PowerLeastSquares ls = minimum_power_fir(data, 8);

    std::mt19937 rng(123);
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    int tested = 0;
    for (int trial = 0; trial < 40 && tested < 5; ++trial) {
        ColVec q = ls.q.coeffs;
        for (int j = 0; j < q.size(); ++j) q[j] += 0.3 * unif(rng);
        const FirParameter qp(q);
        if (!in_theta_q(data, qp).member) continue;
        const YoulaController yc = k_from_q(factors, qp);
        if (yc.roots_near_circle) continue;
        NominalFactorization nf;
        try {
            nf = factorize_nominal_k(yc.k, plant, channel, grid, 48);
        } catch (const AlphaNonpositive&) {
            continue;
        }
        ++tested;
        CHECK(nf.achieved <= 1.02 * nf.bound + 1e-12);
        CHECK(nf.achieved >= nf.bound * 0.999 - 1e-12);
        // SNR-activity of the encoder side
        const RationalTransfer s = inverse(constant_tf(1.0) - yc.k * plant.g_yu);
        double act = 0.0;
        for (int k = 0; k < grid.n; ++k) {
            const double w = grid.omegas[k];
            const double gyv = gyv_magnitude(plant, w);
            act += std::norm(eval_freq(nf.c, w) * eval_freq(s, w)) * gyv * gyv;
        }
        act /= grid.n;
        CHECK(act == doctest::Approx(nf.alpha).epsilon(0.02));
    }
    CHECK(tested >= 3);
}

TEST_CASE("encoder and decoder magnitudes are proportional to sqrt|K|") {
    // G_yv = G_zu and H = 1: |C|^2 and |D|^2 are both proportional to |K|.
    SynthesisOptions opts;
    const SynthesisResult res = synthesize(siso_plant(example_p()),
                                           make_channel(constant_tf(1.0), 20.0), opts);
    const FrequencyGrid grid = FrequencyGrid::uniform(256);
    double c_ratio_min = 1e300, c_ratio_max = 0.0, d_ratio_min = 1e300, d_ratio_max = 0.0;
    for (int k = 0; k < grid.n; ++k) {
        const double w = grid.omegas[k];
        const double k_abs = std::abs(eval_freq(res.k, w));
        const double rc = std::norm(eval_freq(res.c, w)) / k_abs;
        const double rd = std::norm(eval_freq(res.d, w)) / k_abs;
        c_ratio_min = std::min(c_ratio_min, rc);
        c_ratio_max = std::max(c_ratio_max, rc);
        d_ratio_min = std::min(d_ratio_min, rd);
        d_ratio_max = std::max(d_ratio_max, rd);
    }
    CHECK(c_ratio_max / c_ratio_min <= 1.0 + 1e-4);
    CHECK(d_ratio_max / d_ratio_min <= 1.0 + 1e-4);
}

TEST_CASE("spectral-fit residual of the optimal |C|^2 target is monotone in Nc") {
    const GeneralizedPlant plant = siso_plant(example_p());
    const CoprimeFactors factors = coprime_factorize(plant);
    const FrequencyGrid grid = FrequencyGrid::uniform(629);
    const ProgramData data = build_program_data(plant, factors, constant_tf(1.0), grid,
                                                20.0, 0);
    const MinimizeResult sol = minimize(assemble(data, 20), 1e-8);
    REQUIRE(sol.report.status == SolveStatus::Optimal);
    const RationalTransfer qhr = sol.q.to_rational();
    const RationalTransfer mq_u = factors.m * qhr - factors.u;
    const RationalTransfer nq_v = factors.n * qhr + factors.v;
    ColVec target(grid.n);
    for (int k = 0; k < grid.n; ++k) {
        const double w = grid.omegas[k];
        target[k] = std::abs(eval_freq(mq_u, w)) / std::abs(eval_freq(nq_v, w));
    }
    double prev = 1e300;
    for (int nc : {4, 8, 16, 32}) {
        const MagnitudeFit fit = fit_magnitude_sq(target, grid, nc);
        CHECK(fit.relative_rms_residual < prev);
        prev = fit.relative_rms_residual;
    }
}

TEST_CASE("alpha <= 0 is rejected") {
    const GeneralizedPlant plant = siso_plant(example_p());
    const CoprimeFactors factors = coprime_factorize(plant);
    const ChannelSpec tight = make_channel(constant_tf(1.0), 0.5);
    const FrequencyGrid grid = FrequencyGrid::uniform(256);
    // Any stabilizing K on this plant needs ||K H Gyu S||^2 >= 12 > 0.5.
    const ProgramData data =
        build_program_data(plant, factors, tight.h, grid, 30.0, 0);
    const PowerLeastSquares ls = minimum_power_fir(data, 8);
    const YoulaController yc = k_from_q(factors, ls.q);
    CHECK_THROWS_AS(factorize_nominal_k(yc.k, plant, tight, grid, 16), AlphaNonpositive);
}
