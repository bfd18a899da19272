#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "snrctl/errors.hpp"
#include "snrctl/grid.hpp"
#include "snrctl/rational.hpp"

using namespace snrctl;

namespace {
RationalTransfer tf_1_over_z_minus(double a) {
    return RationalTransfer(Polynomial({1.0}), Polynomial({-a, 1.0}));
}
}  // namespace

TEST_CASE("eval_freq direct substitutions") {
    RationalTransfer tf = tf_1_over_z_minus(0.5);
    CHECK(eval_freq(tf, 0.0).real() == doctest::Approx(2.0));
    CHECK(eval_freq(tf, 0.0).imag() == doctest::Approx(0.0));
    CHECK(eval_freq(tf, M_PI).real() == doctest::Approx(-2.0 / 3.0));

    // 1/(z(z-2)) at omega = 0 -> 1/(1*(-1)) = -1
    RationalTransfer p(Polynomial({1.0}), Polynomial({0.0, -2.0, 1.0}));
    CHECK(eval_freq(p, 0.0).real() == doctest::Approx(-1.0));
}

TEST_CASE("eval_freq pole on circle") {
    RationalTransfer tf(Polynomial({1.0}), Polynomial({-1.0, 1.0}));  // 1/(z-1)
    CHECK_THROWS_AS(eval_freq(tf, 0.0), PoleOnCircle);
}

TEST_CASE("poles and zeros") {
    RationalTransfer p(Polynomial({1.0}), Polynomial({0.0, -2.0, 1.0}));
    auto pl = poles(p);
    REQUIRE(pl.size() == 2);
    CHECK(std::abs(pl[0]) < 1e-12);
    CHECK(std::abs(pl[1] - 2.0) < 1e-12);

    // (z-1)/(z-1) reduces to constant: no poles
    RationalTransfer one = reduce(RationalTransfer(Polynomial({-1.0, 1.0}), Polynomial({-1.0, 1.0})));
    CHECK(poles(one).empty());
    CHECK(one.num.eval(0.0) == doctest::Approx(1.0));

    // (z^2 - 0.25)/z^2 zeros at +-0.5
    RationalTransfer q(Polynomial({-0.25, 0.0, 1.0}), Polynomial({0.0, 0.0, 1.0}));
    auto zr = zeros(q);
    REQUIRE(zr.size() == 2);
    CHECK(zr[0].real() == doctest::Approx(-0.5));
    CHECK(zr[1].real() == doctest::Approx(0.5));
}

TEST_CASE("schur stability") {
    CHECK(is_schur_stable(tf_1_over_z_minus(0.5)));
    CHECK_FALSE(is_schur_stable(tf_1_over_z_minus(2.0)));
    CHECK_FALSE(is_schur_stable(tf_1_over_z_minus(1.0)));  // pole on the circle
}

TEST_CASE("conjugate symmetry of eval_freq") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RationalTransfer tf(Polynomial({u(rng), u(rng), u(rng)}),
                        Polynomial({0.3, u(rng) * 0.2, 1.0}));
    for (int i = 0; i < 16; ++i) {
        const double w = u(rng) * M_PI;
        const Complex a = eval_freq(tf, w);
        const Complex b = eval_freq(tf, -w);
        CHECK(std::abs(a - std::conj(b)) < 1e-13);
    }
}

TEST_CASE("poles/zeros of a product are multiset unions") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int trial = 0; trial < 25; ++trial) {
        // Random reduced pair with well-separated roots
        const double p1 = u(rng), p2 = u(rng) + 2.0, z1 = u(rng) - 2.0;
        const double p3 = u(rng) * 0.5 + 1.2, z2 = u(rng) * 0.3 - 0.95;
        RationalTransfer a(Polynomial({-z1, 1.0}), Polynomial({p1 * p2, -(p1 + p2), 1.0}));
        RationalTransfer b(Polynomial({-z2, 1.0}), Polynomial({-p3, 1.0}));
        RationalTransfer prod = a * b;
        auto pp = poles(prod);
        auto zz = zeros(prod);
        REQUIRE(pp.size() == 3);
        REQUIRE(zz.size() == 2);
        std::vector<double> expect_p = {p1, p2, p3};
        std::sort(expect_p.begin(), expect_p.end());
        std::vector<double> got_p;
        for (auto& c : pp) got_p.push_back(c.real());
        std::sort(got_p.begin(), got_p.end());
        for (int i = 0; i < 3; ++i) CHECK(got_p[i] == doctest::Approx(expect_p[i]).epsilon(1e-8));
    }
}

TEST_CASE("reduce cancels coincident pole/zero pairs") {
    // (z-0.7)(z-0.3) / (z-0.7)(z+0.2) -> (z-0.3)/(z+0.2)
    RationalTransfer tf(Polynomial({-0.7, 1.0}) * Polynomial({-0.3, 1.0}),
                        Polynomial({-0.7, 1.0}) * Polynomial({0.2, 1.0}));
    RationalTransfer r = reduce(tf);
    CHECK(r.num.degree() == 1);
    CHECK(r.den.degree() == 1);
    CHECK(eval_freq(r, 1.0) == eval_freq(r, 1.0));
    // Values must agree with the unreduced function away from the cancel point
    CHECK(std::abs(eval_freq(r, 2.0) - eval_freq(tf, 2.0)) < 1e-12);
}

TEST_CASE("properness predicates") {
    CHECK(is_proper(constant_tf(3.0)));
    CHECK_FALSE(is_strictly_proper(constant_tf(3.0)));
    CHECK(is_strictly_proper(tf_1_over_z_minus(0.5)));
    RationalTransfer improper(Polynomial({0.0, 0.0, 1.0}), Polynomial({1.0, 1.0}));
    CHECK_FALSE(is_proper(improper));
}

TEST_CASE("delay helper") {
    RationalTransfer d2 = delay_tf(2);
    CHECK(std::abs(eval_freq(d2, 0.3) - std::polar(1.0, -0.6)) < 1e-14);
}
