#include "snrctl/trig.hpp"

#include <algorithm>
#include <cmath>

#include "snrctl/errors.hpp"
#include "snrctl/rational.hpp"

namespace snrctl {

double TrigPolynomial::eval(double omega) const {
    double acc = coeffs[0];
    for (int k = 1; k < static_cast<int>(coeffs.size()); ++k) {
        acc += 2.0 * coeffs[k] * std::cos(k * omega);
    }
    return acc;
}

double TrigPolynomial::min_on_grid(int n) const {
    double m = 1e300;
    for (int k = 0; k < n; ++k) m = std::min(m, eval(2.0 * M_PI * k / n));
    return m;
}

double TrigPolynomial::max_on_grid(int n) const {
    double m = -1e300;
    for (int k = 0; k < n; ++k) m = std::max(m, eval(2.0 * M_PI * k / n));
    return m;
}

MagnitudeFit fit_magnitude_sq(const ColVec& target, const FrequencyGrid& grid, int order) {
    if (target.size() != grid.n) throw DimensionMismatch("target length must match grid");
    if (target.minCoeff() < 0.0) throw NotPositive("fit_magnitude_sq: negative target");
    const int cols = order + 1;
    Matrix design(grid.n, cols);
    for (int k = 0; k < grid.n; ++k) {
        design(k, 0) = 1.0;
        for (int j = 1; j < cols; ++j) design(k, j) = 2.0 * std::cos(j * grid.omegas[k]);
    }
    MagnitudeFit out;
    out.fit.coeffs = design.colPivHouseholderQr().solve(target);
    const double res = (design * out.fit.coeffs - target).norm();
    out.relative_rms_residual = res / std::max(target.norm(), 1e-300);

    const double max_a = out.fit.max_on_grid();
    const double floor_eps = 1e-9 * std::max(max_a, 0.0);
    const double min_a = out.fit.min_on_grid();
    if (min_a < floor_eps) {
        out.positivity_shift = floor_eps - min_a;
        out.fit.coeffs[0] += out.positivity_shift;
    }
    return out;
}

ColVec spectral_factor_trig(const TrigPolynomial& a) {
    const double max_abs = a.coeffs.cwiseAbs().maxCoeff();
    if (max_abs == 0.0) throw NotPositive("spectral factor of the zero polynomial");
    const double min_a = a.min_on_grid();
    const double max_a = a.max_on_grid();
    if (min_a < -1e-12 * std::max(1.0, max_a)) {
        throw NotPositive("A(w) is negative on the check grid, min = " + std::to_string(min_a));
    }

    // Effective order after dropping negligible high harmonics. Keeping
    // noise-level coefficients would seed the lifted polynomial with junk
    // roots and blow up the factor's degree.
    int nc = a.order();
    while (nc > 0 && std::abs(a.coeffs[nc]) <= 1e-11 * max_abs) --nc;
    if (nc == 0) {
        ColVec taps(1);
        taps[0] = std::sqrt(std::max(a.coeffs[0], 0.0));
        if (taps[0] <= 0.0) throw NotPositive("constant A must be positive");
        return taps;
    }

    // Lifted polynomial z^nc * A(z): palindromic, degree 2 nc.
    ColVec lifted(2 * nc + 1);
    for (int k = 1; k <= nc; ++k) {
        lifted[nc - k] = a.coeffs[k];
        lifted[nc + k] = a.coeffs[k];
    }
    lifted[nc] = a.coeffs[0];
    std::vector<Complex> rts = roots(Polynomial(lifted));

    // Pick one root of each (r, 1/r) pair: all strictly inside roots plus
    // every second boundary root (circle roots have even multiplicity).
    constexpr double band = 1e-7;
    std::vector<Complex> inside, boundary;
    for (const Complex& r : rts) {
        const double mag = std::abs(r);
        if (mag < 1.0 - band) {
            inside.push_back(r);
        } else if (mag <= 1.0 + band) {
            boundary.push_back(r);
        }
    }
    // Newton-polish the strictly inside roots on the lifted polynomial
    // (skipped on the boundary, where double roots defeat the iteration).
    const Polynomial lifted_poly(lifted);
    Polynomial lifted_deriv;
    {
        ColVec dcoef(2 * nc);
        for (int k = 1; k <= 2 * nc; ++k) dcoef[k - 1] = k * lifted[k];
        lifted_deriv = Polynomial(dcoef);
    }
    for (Complex& r : inside) {
        for (int it = 0; it < 3; ++it) {
            const Complex dp = lifted_deriv.eval(r);
            if (std::abs(dp) < 1e-14) break;
            const Complex step = lifted_poly.eval(r) / dp;
            if (std::abs(step) > 1e-2) break;
            r -= step;
        }
        if (std::abs(r) >= 1.0) r *= (1.0 - 1e-12) / std::abs(r);
    }

    std::sort(boundary.begin(), boundary.end(), [](Complex x, Complex y) {
        const double ax = std::arg(x), ay = std::arg(y);
        if (ax != ay) return ax < ay;
        return std::abs(x) < std::abs(y);
    });
    for (size_t i = 0; i < boundary.size(); i += 2) inside.push_back(boundary[i]);
    if (static_cast<int>(inside.size()) != nc) {
        throw NotPositive("spectral factorization: root pairing failed (" +
                          std::to_string(inside.size()) + " of " + std::to_string(nc) + ")");
    }

    // |C|^2 = A with C(z) = c0 * prod (1 - r_i z^{-1}); c0^2 = |A_nc| / prod |r_i|.
    double prod_mag = 1.0;
    for (const Complex& r : inside) prod_mag *= std::abs(r);
    const double c0 = std::sqrt(std::abs(a.coeffs[nc]) / prod_mag);
    const Polynomial monic = from_roots(inside, 1.0);
    ColVec taps(nc + 1);
    for (int j = 0; j <= nc; ++j) taps[j] = c0 * monic.coeffs[nc - j];
    if (taps[0] < 0.0) taps = -taps;
    // Drop a noise-level tail so the factor's degree reflects its content.
    int last = nc;
    const double tap_scale = taps.cwiseAbs().maxCoeff();
    while (last > 0 && std::abs(taps[last]) <= 1e-12 * tap_scale) --last;
    taps = taps.head(last + 1).eval();

    // Round-trip guard against gross pairing failures; the achievable
    // accuracy degrades near floored minima, so this is a coarse gate.
    double worst = 0.0;
    for (int k = 0; k < 2048; ++k) {
        const double w = 2.0 * M_PI * k / 2048;
        worst = std::max(worst, std::abs(fir_magnitude_sq(taps, w) - a.eval(w)));
    }
    if (worst > 1e-5 * std::max(1.0, max_a)) {
        throw NotPositive("spectral factorization residual too large: " + std::to_string(worst));
    }
    return taps;
}

RationalTransfer fir_to_rational(const ColVec& taps) {
    int last = static_cast<int>(taps.size()) - 1;
    while (last > 0 && taps[last] == 0.0) --last;
    ColVec num(last + 1);
    for (int j = 0; j <= last; ++j) num[j] = taps[last - j];
    return RationalTransfer(Polynomial(num), monomial(last));
}

double fir_magnitude_sq(const ColVec& taps, double omega) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < taps.size(); ++j) acc += taps[j] * std::polar(1.0, -j * omega);
    return std::norm(acc);
}

}  // namespace snrctl
