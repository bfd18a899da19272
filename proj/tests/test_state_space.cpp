#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "snrctl/errors.hpp"
#include "snrctl/plant.hpp"
#include "snrctl/state_space.hpp"

using namespace snrctl;

TEST_CASE("transfer_entry recovers 1/(z-0.5) from a shared realization") {
    Matrix a(1, 1), b(1, 2), c(2, 1), d(2, 2);
    a << 0.5;
    b << 1.0, 1.0;
    c << 1.0, 1.0;
    d.setZero();
    StateSpaceModel ss(a, b, c, d);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            RationalTransfer tf = transfer_entry(ss, i, j);
            CHECK(tf.den.degree() == 1);
            CHECK(std::abs(eval_freq(tf, 0.3) - 1.0 / (std::polar(1.0, 0.3) - 0.5)) < 1e-12);
        }
    }
}

TEST_CASE("blocks_from_state_space on the shared-state plant") {
    Matrix a(1, 1), b(1, 2), c(2, 1), d(2, 2);
    a << 0.5;
    b << 1.0, 1.0;
    c << 1.0, 1.0;
    d.setZero();
    GeneralizedPlant plant = blocks_from_state_space(StateSpaceModel(a, b, c, d), 1, 1);
    CHECK(plant.stabilizable);
    CHECK(plant.detectable);
    CHECK(is_strictly_proper(plant.g_yu));
    CHECK(std::abs(eval_freq(plant.g_zv(0, 0), 1.1) - eval_freq(plant.g_yu, 1.1)) < 1e-12);
}

TEST_CASE("static plant with empty state dimension") {
    Matrix a(0, 0), b(0, 2), c(2, 0), d(2, 2);
    d << 1.5, -0.5, 2.0, 0.0;
    GeneralizedPlant plant = blocks_from_state_space(StateSpaceModel(a, b, c, d), 1, 1);
    CHECK(plant.g_zv(0, 0).num.eval(0.0) == doctest::Approx(1.5));
    CHECK(plant.g_zu[0].num.eval(0.0) == doctest::Approx(-0.5));
    CHECK(plant.g_yv[0].num.eval(0.0) == doctest::Approx(2.0));
    CHECK(plant.g_yu.is_zero());
}

TEST_CASE("nonzero D22 is rejected") {
    Matrix a(0, 0), b(0, 2), c(2, 0), d(2, 2);
    d << 1.0, 1.0, 1.0, 0.1;
    CHECK_THROWS_AS(blocks_from_state_space(StateSpaceModel(a, b, c, d), 1, 1), NonzeroD22);
}

TEST_CASE("dimension mismatch is rejected") {
    Matrix a(1, 1), b(1, 2), c(2, 1), d(2, 2);
    a << 0.5;
    b << 1.0, 1.0;
    c << 1.0, 1.0;
    d.setZero();
    CHECK_THROWS_AS(blocks_from_state_space(StateSpaceModel(a, b, c, d), 2, 1),
                    DimensionMismatch);
}

TEST_CASE("siso convenience plant equals four copies of P") {
    RationalTransfer p(Polynomial({1.0}), Polynomial({0.0, -2.0, 1.0}));
    GeneralizedPlant plant = siso_plant(p);
    for (double w : {0.0, 0.7, 2.1}) {
        const Complex pv = eval_freq(p, w);
        CHECK(std::abs(eval_freq(plant.g_zv(0, 0), w) - pv) < 1e-12);
        CHECK(std::abs(eval_freq(plant.g_zu[0], w) - pv) < 1e-12);
        CHECK(std::abs(eval_freq(plant.g_yv[0], w) - pv) < 1e-12);
        CHECK(std::abs(eval_freq(plant.g_yu, w) - pv) < 1e-12);
    }
    // Realization blocks must reproduce the same transfer functions
    GeneralizedPlant from_ss = blocks_from_state_space(plant.realization, 1, 1);
    CHECK(std::abs(eval_freq(from_ss.g_yu, 0.9) - eval_freq(p, 0.9)) < 1e-10);
}

TEST_CASE("stabilizability and detectability flags") {
    // Unreachable unstable mode
    Matrix a(2, 2), b(2, 1), c(1, 2);
    a << 2.0, 0.0, 0.0, 0.5;
    b << 0.0, 1.0;
    c << 1.0, 1.0;
    CHECK_FALSE(is_stabilizable(a, b));
    CHECK(is_detectable(a, c));
    b << 1.0, 1.0;
    CHECK(is_stabilizable(a, b));
    Matrix c2(1, 2);
    c2 << 0.0, 1.0;
    CHECK_FALSE(is_detectable(a, c2));
    // Unreachable stable mode is fine
    Matrix a2(2, 2), b2(2, 1);
    a2 << 0.5, 0.0, 0.0, 0.3;
    b2 << 0.0, 1.0;
    CHECK(is_stabilizable(a2, b2));
}

TEST_CASE("realize_siso round trip including direct term") {
    RationalTransfer tf(Polynomial({0.2, 1.2, 0.8}), Polynomial({0.1, -0.6, 1.0}));
    StateSpaceModel ss = realize_siso(tf);
    RationalTransfer back = transfer_entry(ss, 0, 0);
    for (double w : {0.1, 1.0, 2.5}) {
        CHECK(std::abs(eval_freq(back, w) - eval_freq(tf, w)) < 1e-11);
    }
}
