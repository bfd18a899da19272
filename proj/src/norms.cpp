#include "snrctl/norms.hpp"

#include <cmath>

#include "snrctl/errors.hpp"
#include "snrctl/grid.hpp"

namespace snrctl {

Matrix discrete_lyapunov(const Matrix& a, const Matrix& w) {
    Matrix x = w;
    Matrix ak = a;
    for (int it = 0; it < 128; ++it) {
        const Matrix term = ak * x * ak.transpose();
        x += term;
        const double rel = term.norm() / std::max(1e-300, x.norm());
        if (rel < 1e-18) break;
        ak = ak * ak;
    }
    return x;
}

double h2_norm_sq(const RationalTransfer& tf) {
    RationalTransfer h = reduce(tf);
    if (!is_proper(h)) throw Unstable("h2_norm_sq: improper transfer function");
    for (const Complex& p : poles(h)) {
        if (std::abs(p) >= 1.0 - tol::kStabilityMargin) {
            throw Unstable("h2_norm_sq: pole at |z| = " + std::to_string(std::abs(p)));
        }
    }
    StateSpaceModel ss = realize_siso(h);
    const int n = ss.states();
    const double d = ss.D(0, 0);
    if (n == 0) return d * d;

    const Matrix x = discrete_lyapunov(ss.A, ss.B * ss.B.transpose());
    const double tail = (ss.C * x * ss.C.transpose())(0, 0);
    const double value = d * d + tail;
    if (!std::isfinite(value)) {
        throw Unstable("h2_norm_sq: gramian iteration did not converge");
    }
    return value;
}

RationalTransfer normalize_channel_factor(const RationalTransfer& h) {
    RationalTransfer hr = reduce(h);
    if (!is_schur_stable(hr)) throw Unstable("channel factor must be Schur stable");
    const FrequencyGrid grid = FrequencyGrid::uniform(512);
    double min_abs = 1e300, max_abs = 0.0;
    for (int k = 0; k < grid.n; ++k) {
        const double v = std::abs(eval_freq(hr, grid.omegas[k]));
        min_abs = std::min(min_abs, v);
        max_abs = std::max(max_abs, v);
    }
    if (min_abs <= 1e-9 * std::max(1.0, max_abs)) {
        throw ZeroOnCircle("channel factor has a zero on the unit circle");
    }
    const double nrm = std::sqrt(h2_norm_sq(hr));
    return RationalTransfer((1.0 / nrm) * hr.num, hr.den);
}

}  // namespace snrctl
