#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "snrctl/errors.hpp"
#include "snrctl/grid.hpp"
#include "snrctl/norms.hpp"

using namespace snrctl;

TEST_CASE("h2 norm against geometric-series oracle") {
    // 1/(z-0.5): impulse response 0, 1, 0.5, 0.25, ... energy = sum 0.25^k = 4/3
    double oracle = 0.0;
    double term = 1.0;
    for (int k = 0; k < 200; ++k) {
        oracle += term;
        term *= 0.25;
    }
    RationalTransfer tf(Polynomial({1.0}), Polynomial({-0.5, 1.0}));
    CHECK(std::abs(h2_norm_sq(tf) - oracle) < 1e-9);
    CHECK(h2_norm_sq(tf) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("h2 norm of constants and delays") {
    CHECK(h2_norm_sq(constant_tf(1.0)) == doctest::Approx(1.0));
    CHECK(h2_norm_sq(delay_tf(1)) == doctest::Approx(1.0));
    CHECK(h2_norm_sq(delay_tf(5)) == doctest::Approx(1.0));
    CHECK(h2_norm_sq(constant_tf(-2.0)) == doctest::Approx(4.0));
}

TEST_CASE("h2 norm rejects unstable and improper input") {
    CHECK_THROWS_AS(h2_norm_sq(RationalTransfer(Polynomial({1.0}), Polynomial({-2.0, 1.0}))),
                    Unstable);
    CHECK_THROWS_AS(h2_norm_sq(RationalTransfer(Polynomial({1.0}), Polynomial({-1.0, 1.0}))),
                    Unstable);
}

TEST_CASE("grid quadrature norms on constants and unimodular samples") {
    FrequencyGrid grid = FrequencyGrid::uniform(64);
    GridSamples s;
    s.grid = grid;
    s.values = ComplexVec::Constant(64, Complex(3.0, 0.0));
    CHECK(l1_norm_grid(s) == doctest::Approx(3.0));
    CHECK(l2_norm_sq_grid(s) == doctest::Approx(9.0));

    for (int k = 0; k < grid.n; ++k) s.values[k] = std::polar(1.0, grid.omegas[k]);
    CHECK(l1_norm_grid(s) == doctest::Approx(1.0));
}

TEST_CASE("grid L1 of 1+e^{-iw} converges to 4/pi at second order") {
    const double target = 4.0 / M_PI;
    auto l1_at = [&](int n) {
        FrequencyGrid grid = FrequencyGrid::uniform(n);
        GridSamples s;
        s.grid = grid;
        s.values.resize(n);
        for (int k = 0; k < n; ++k) {
            s.values[k] = 1.0 + std::polar(1.0, -grid.omegas[k]);
        }
        return l1_norm_grid(s);
    };
    const double e1 = std::abs(l1_at(64) - target);
    const double e2 = std::abs(l1_at(128) - target);
    const double e3 = std::abs(l1_at(256) - target);
    CHECK(e1 / e2 > 3.0);
    CHECK(e2 / e3 > 3.0);
}

TEST_CASE("gramian h2 agrees with grid quadrature, improving with refinement") {
    RationalTransfer tf(Polynomial({0.4, 1.0}),
                        Polynomial({-0.97, 1.0}) * Polynomial({-0.1, 1.0}));
    const double exact = h2_norm_sq(tf);
    auto grid_err = [&](int n) {
        GridSamples s = sample_on_grid(tf, FrequencyGrid::uniform(n));
        return std::abs(l2_norm_sq_grid(s) - exact);
    };
    const double e1 = grid_err(64);
    const double e2 = grid_err(128);
    CHECK(e1 / std::max(e2, 1e-15) > 3.0);
    CHECK(grid_err(1024) < 1e-8 * std::max(1.0, exact));
}

TEST_CASE("matrix L1 quadrature matches the rank-one reduction") {
    // X(w) = u v^T s(w) has nuclear norm |u||v||s(w)|.
    const int n = 32;
    std::vector<ComplexMatrix> samples(n);
    Eigen::Vector2cd u;
    u << Complex(1.0, 0.5), Complex(-0.3, 0.2);
    Eigen::RowVector3cd v;
    v << Complex(0.7, 0.0), Complex(0.1, -0.4), Complex(0.0, 1.1);
    double expect = 0.0;
    for (int k = 0; k < n; ++k) {
        const Complex s = std::polar(1.0 + 0.3 * std::cos(2.0 * M_PI * k / n),
                                     2.0 * M_PI * k / n);
        samples[k] = u * v * s;
        expect += u.norm() * v.norm() * std::abs(s);
    }
    expect /= n;
    CHECK(l1_norm_grid(samples) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("normalize_channel_factor") {
    CHECK(std::abs(h2_norm_sq(normalize_channel_factor(constant_tf(1.0))) - 1.0) < 1e-10);
    CHECK(std::abs(h2_norm_sq(normalize_channel_factor(constant_tf(2.0))) - 1.0) < 1e-10);

    // H = 1 + 0.5 z^{-1}: energy 1.25, factor 1/sqrt(1.25)
    RationalTransfer h(Polynomial({0.5, 1.0}), Polynomial({0.0, 1.0}));
    RationalTransfer hn = normalize_channel_factor(h);
    CHECK(std::abs(h2_norm_sq(hn) - 1.0) < 1e-10);
    const double expected_gain = 1.0 / std::sqrt(1.25);
    CHECK(std::abs(eval_freq(hn, 0.0)) == doctest::Approx(1.5 * expected_gain));

    // Idempotence
    RationalTransfer hnn = normalize_channel_factor(hn);
    CHECK(std::abs(h2_norm_sq(hnn) - 1.0) < 1e-10);
    CHECK(std::abs(eval_freq(hnn, 0.7) - eval_freq(hn, 0.7)) < 1e-10);

    CHECK_THROWS_AS(normalize_channel_factor(RationalTransfer(Polynomial({1.0}),
                                                              Polynomial({-2.0, 1.0}))),
                    Unstable);
    // zero at z=1 sits on the circle
    CHECK_THROWS_AS(normalize_channel_factor(RationalTransfer(Polynomial({-1.0, 1.0}),
                                                              Polynomial({0.0, 1.0}))),
                    ZeroOnCircle);
}
