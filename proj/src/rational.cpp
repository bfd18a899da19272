#include "snrctl/rational.hpp"

#include <algorithm>
#include <cmath>

#include "snrctl/errors.hpp"

namespace snrctl {

RationalTransfer::RationalTransfer(Polynomial n, Polynomial d)
    : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw ZeroDenominator("rational transfer with zero denominator");
}

RationalTransfer constant_tf(double c) {
    return RationalTransfer(Polynomial({c}), Polynomial({1.0}));
}

RationalTransfer delay_tf(int k) {
    return RationalTransfer(Polynomial({1.0}), monomial(k));
}

namespace {

// Deflates each listed root once; a complex root consumes its conjugate
// partner from the list because deflate() divides by the real quadratic.
Polynomial deflate_list(Polynomial p, const std::vector<Complex>& rts) {
    std::vector<bool> done(rts.size(), false);
    for (size_t i = 0; i < rts.size(); ++i) {
        if (done[i]) continue;
        done[i] = true;
        const Complex r = rts[i];
        if (std::abs(r.imag()) > 1e-10 * (1.0 + std::abs(r.real()))) {
            for (size_t j = i + 1; j < rts.size(); ++j) {
                if (!done[j] &&
                    std::abs(rts[j] - std::conj(r)) <= 1e-6 * (1.0 + std::abs(r))) {
                    done[j] = true;
                    break;
                }
            }
        }
        p = deflate(p, r);
    }
    return p;
}

// a/b + s*c/d over the least common denominator: roots shared by b and d
// enter the result denominator once instead of being squared by the naive
// product b*d, which keeps repeated-root cancellations well conditioned.
RationalTransfer add_over_lcm(const RationalTransfer& x, const RationalTransfer& y,
                              double sign) {
    const auto naive = [&] {
        return reduce(RationalTransfer(x.num * y.den + sign * (y.num * x.den),
                                       x.den * y.den));
    };
    if (x.den.degree() < 1 || y.den.degree() < 1) return naive();

    const std::vector<Complex> rb = roots(x.den);
    const std::vector<Complex> rd = roots(y.den);
    std::vector<bool> used(rd.size(), false);
    std::vector<Complex> shared_b, shared_d;
    for (const Complex& r : rb) {
        int best = -1;
        double best_dist = tol::kCancel * std::max(1.0, std::abs(r));
        for (size_t i = 0; i < rd.size(); ++i) {
            if (used[i]) continue;
            const double dist = std::abs(rd[i] - r);
            if (dist <= best_dist) {
                best_dist = dist;
                best = static_cast<int>(i);
            }
        }
        if (best >= 0) {
            used[best] = true;
            shared_b.push_back(r);
            shared_d.push_back(rd[best]);
        }
    }
    if (shared_b.empty()) return naive();

    const Polynomial b_prime = deflate_list(x.den, shared_b);
    const Polynomial d_prime = deflate_list(y.den, shared_d);
    const Polynomial num = x.num * d_prime + sign * (y.num * b_prime);
    const Polynomial den = x.den * d_prime;
    return reduce(RationalTransfer(num, den));
}

}  // namespace

RationalTransfer operator+(const RationalTransfer& a, const RationalTransfer& b) {
    return add_over_lcm(a, b, 1.0);
}

RationalTransfer operator-(const RationalTransfer& a, const RationalTransfer& b) {
    return add_over_lcm(a, b, -1.0);
}

namespace {

// Strips exact common powers of z and normalizes to a monic denominator
// without re-extracting roots (coefficient-level operations only).
RationalTransfer assemble_no_reroot(Polynomial num, Polynomial den);

}  // namespace

RationalTransfer operator*(const RationalTransfer& a, const RationalTransfer& b) {
    if (a.num.is_zero() || b.num.is_zero()) {
        return RationalTransfer(Polynomial(), Polynomial({1.0}));
    }
    // Inputs are kept reduced, so any true cancellation in the product is a
    // cross cancellation; matching it at the factors' own degrees keeps the
    // root extraction well conditioned.
    const RationalTransfer r1 = reduce(RationalTransfer(a.num, b.den));
    const RationalTransfer r2 = reduce(RationalTransfer(b.num, a.den));
    return assemble_no_reroot(r1.num * r2.num, r1.den * r2.den);
}

RationalTransfer operator/(const RationalTransfer& a, const RationalTransfer& b) {
    if (b.num.is_zero()) throw ZeroDenominator("division by the zero transfer function");
    if (a.num.is_zero()) return RationalTransfer(Polynomial(), Polynomial({1.0}));
    const RationalTransfer r1 = reduce(RationalTransfer(a.num, b.num));
    const RationalTransfer r2 = reduce(RationalTransfer(b.den, a.den));
    return assemble_no_reroot(r1.num * r2.num, r1.den * r2.den);
}

RationalTransfer operator*(double s, const RationalTransfer& a) {
    return RationalTransfer(s * a.num, a.den);
}

RationalTransfer inverse(const RationalTransfer& a) {
    if (a.num.is_zero()) throw ZeroDenominator("inverse of the zero transfer function");
    return reduce(RationalTransfer(a.den, a.num));
}

namespace {

// Number of leading low-order coefficients that are numerically zero,
// i.e. the multiplicity of the root z = 0 up to coefficient noise.
int zero_root_multiplicity(const Polynomial& p) {
    const double scale = p.coeffs.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0;
    int k = 0;
    while (k < p.degree() && std::abs(p.coeffs[k]) <= 1e-12 * scale) ++k;
    return k;
}

Polynomial shift_down(const Polynomial& p, int k) {
    if (k <= 0) return p;
    return Polynomial(ColVec(p.coeffs.tail(p.coeffs.size() - k)));
}

RationalTransfer assemble_no_reroot(Polynomial num, Polynomial den) {
    num = trimmed(num);
    den = trimmed(den);
    if (den.is_zero()) throw ZeroDenominator("assemble: zero denominator");
    if (num.is_zero()) return RationalTransfer(Polynomial(), Polynomial({1.0}));
    const int kz = std::min(zero_root_multiplicity(num), zero_root_multiplicity(den));
    num = shift_down(num, kz);
    den = shift_down(den, kz);
    const double lead = den.leading();
    return RationalTransfer((1.0 / lead) * num, (1.0 / lead) * den);
}

}  // namespace

RationalTransfer reduce(const RationalTransfer& tf, double root_tol) {
    Polynomial num = trimmed(tf.num);
    Polynomial den = trimmed(tf.den);
    if (den.is_zero()) throw ZeroDenominator("reduce: zero denominator");
    if (num.is_zero()) return RationalTransfer(Polynomial(), Polynomial({1.0}));

    // Exact cancellation of common powers of z.
    const int kz = std::min(zero_root_multiplicity(num), zero_root_multiplicity(den));
    num = shift_down(num, kz);
    den = shift_down(den, kz);

    if (den.degree() > 0 && num.degree() > 0) {
        std::vector<Complex> nr = roots(num);
        std::vector<Complex> dr = roots(den);
        std::vector<bool> num_used(nr.size(), false);
        std::vector<Complex> cancelled_n, cancelled_d;
        for (const Complex& rd : dr) {
            int best = -1;
            double best_dist = root_tol * std::max(1.0, std::abs(rd));
            for (size_t i = 0; i < nr.size(); ++i) {
                if (num_used[i]) continue;
                const double dist = std::abs(nr[i] - rd);
                if (dist <= best_dist) {
                    best_dist = dist;
                    best = static_cast<int>(i);
                }
            }
            if (best >= 0) {
                num_used[best] = true;
                cancelled_n.push_back(nr[best]);
                cancelled_d.push_back(rd);
            }
        }
        if (!cancelled_n.empty()) {
            auto deflate_all = [](Polynomial p, std::vector<Complex> rts) {
                // Deflate conjugate pairs via one quadratic each.
                std::vector<bool> used(rts.size(), false);
                for (size_t i = 0; i < rts.size(); ++i) {
                    if (used[i]) continue;
                    used[i] = true;
                    if (std::abs(rts[i].imag()) <= 1e-10 * (1.0 + std::abs(rts[i].real()))) {
                        p = deflate(p, rts[i]);
                        continue;
                    }
                    for (size_t j = i + 1; j < rts.size(); ++j) {
                        if (!used[j] &&
                            std::abs(rts[j] - std::conj(rts[i])) <=
                                1e-6 * (1.0 + std::abs(rts[i]))) {
                            used[j] = true;
                            break;
                        }
                    }
                    p = deflate(p, rts[i]);
                }
                return p;
            };
            num = deflate_all(num, cancelled_n);
            den = deflate_all(den, cancelled_d);
        }
    }

    // Monic denominator.
    const double lead = den.leading();
    return RationalTransfer((1.0 / lead) * num, (1.0 / lead) * den);
}

Complex eval_freq(const RationalTransfer& tf, double omega) {
    const Complex z = std::polar(1.0, omega);
    const Complex d = tf.den.eval(z);
    if (std::abs(d) < tol::kPoleOnCircle) {
        throw PoleOnCircle("denominator vanishes on the unit circle at omega=" +
                           std::to_string(omega));
    }
    return tf.num.eval(z) / d;
}

Complex eval_at(const RationalTransfer& tf, Complex z) {
    const Complex d = tf.den.eval(z);
    if (std::abs(d) < tol::kPoleOnCircle) {
        throw PoleOnCircle("denominator vanishes at the evaluation point");
    }
    return tf.num.eval(z) / d;
}

std::vector<Complex> poles(const RationalTransfer& tf) { return roots(tf.den); }

std::vector<Complex> zeros(const RationalTransfer& tf) { return roots(tf.num); }

bool is_schur_stable(const RationalTransfer& tf) {
    for (const Complex& p : poles(tf)) {
        if (std::abs(p) >= 1.0 - tol::kStabilityMargin) return false;
    }
    return true;
}

bool is_proper(const RationalTransfer& tf) {
    return tf.num.degree() <= tf.den.degree();
}

bool is_strictly_proper(const RationalTransfer& tf) {
    return tf.num.degree() < tf.den.degree();
}

double spectral_radius(const RationalTransfer& tf) {
    double r = 0.0;
    for (const Complex& p : poles(tf)) r = std::max(r, std::abs(p));
    return r;
}

double max_coeff_abs(const RationalTransfer& tf) {
    return std::max(tf.num.coeffs.cwiseAbs().maxCoeff(),
                    tf.den.coeffs.cwiseAbs().maxCoeff());
}

}  // namespace snrctl
