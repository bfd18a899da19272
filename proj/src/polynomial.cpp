#include "snrctl/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snrctl {

namespace {

ColVec drop_exact_leading_zeros(const ColVec& c) {
    int last = static_cast<int>(c.size()) - 1;
    while (last > 0 && c[last] == 0.0) --last;
    return c.head(last + 1);
}

}  // namespace

Polynomial::Polynomial(ColVec c) {
    if (c.size() == 0) {
        coeffs = ColVec::Zero(1);
    } else {
        coeffs = drop_exact_leading_zeros(c);
    }
}

Polynomial::Polynomial(std::initializer_list<double> c) {
    if (c.size() == 0) {
        coeffs = ColVec::Zero(1);
        return;
    }
    ColVec v(static_cast<int>(c.size()));
    int i = 0;
    for (double x : c) v[i++] = x;
    coeffs = drop_exact_leading_zeros(v);
}

int Polynomial::degree() const {
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
        if (coeffs[i] != 0.0) return i;
    }
    return -1;
}

double Polynomial::leading() const {
    const int d = degree();
    return d < 0 ? 0.0 : coeffs[d];
}

Complex Polynomial::eval(Complex z) const {
    Complex acc(0.0, 0.0);
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
        acc = acc * z + coeffs[i];
    }
    return acc;
}

double Polynomial::eval(double x) const {
    double acc = 0.0;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
        acc = acc * x + coeffs[i];
    }
    return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    const int n = static_cast<int>(std::max(a.coeffs.size(), b.coeffs.size()));
    ColVec c = ColVec::Zero(n);
    c.head(a.coeffs.size()) += a.coeffs;
    c.head(b.coeffs.size()) += b.coeffs;
    return Polynomial(c);
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return a + (-1.0 * b);
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    const int da = a.degree(), db = b.degree();
    ColVec c = ColVec::Zero(da + db + 1);
    for (int i = 0; i <= da; ++i) {
        if (a.coeffs[i] == 0.0) continue;
        for (int j = 0; j <= db; ++j) {
            c[i + j] += a.coeffs[i] * b.coeffs[j];
        }
    }
    return Polynomial(c);
}

Polynomial operator*(double s, const Polynomial& a) {
    return Polynomial(ColVec(s * a.coeffs));
}

Polynomial trimmed(const Polynomial& p, double rel_tol) {
    const double scale = p.coeffs.cwiseAbs().maxCoeff();
    if (scale == 0.0) return Polynomial();
    int last = static_cast<int>(p.coeffs.size()) - 1;
    while (last > 0 && std::abs(p.coeffs[last]) <= rel_tol * scale) --last;
    ColVec c = p.coeffs.head(last + 1);
    if (last == 0 && std::abs(c[0]) <= rel_tol * scale) c[0] = 0.0;
    return Polynomial(c);
}

Polynomial monomial(int k) {
    ColVec c = ColVec::Zero(k + 1);
    c[k] = 1.0;
    return Polynomial(c);
}

void balance_in_place(Matrix& a) {
    const int n = static_cast<int>(a.rows());
    constexpr double radix = 2.0;
    bool done = false;
    int sweeps = 0;
    while (!done && sweeps++ < 100) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.col(i) *= f;
                a.row(i) /= f;
            }
        }
    }
}

std::vector<Complex> roots(const Polynomial& p) {
    const Polynomial q = trimmed(p, 1e-13);
    const int d = q.degree();
    if (d <= 0) return {};
    // Monic companion matrix of q.
    Matrix comp = Matrix::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    const double lead = q.coeffs[d];
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -q.coeffs[i] / lead;
    balance_in_place(comp);
    Eigen::EigenSolver<Matrix> es(comp, /*computeEigenvectors=*/false);
    std::vector<Complex> out(d);
    for (int i = 0; i < d; ++i) out[i] = es.eigenvalues()[i];
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

Polynomial from_roots(const std::vector<Complex>& rts, double leading, double pair_tol) {
    Polynomial p({leading});
    std::vector<bool> used(rts.size(), false);
    for (size_t i = 0; i < rts.size(); ++i) {
        if (used[i]) continue;
        const Complex r = rts[i];
        if (std::abs(r.imag()) <= pair_tol * (1.0 + std::abs(r.real()))) {
            p = p * Polynomial({-r.real(), 1.0});
            used[i] = true;
            continue;
        }
        // Find the conjugate partner and emit a real quadratic factor.
        size_t partner = rts.size();
        double best = std::numeric_limits<double>::max();
        for (size_t j = i + 1; j < rts.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(rts[j] - std::conj(r));
            if (dist < best) {
                best = dist;
                partner = j;
            }
        }
        if (partner < rts.size() && best <= 1e-6 * (1.0 + std::abs(r))) {
            used[i] = used[partner] = true;
            const Complex s = rts[partner];
            // (z - r)(z - s) with s ~= conj(r); symmetrize to keep it real.
            const double sum = (r + s).real();
            const double prod = (r * s).real();
            p = p * Polynomial({prod, -sum, 1.0});
        } else {
            // Unpaired complex root: fall back to its real/|.| symmetrization.
            used[i] = true;
            p = p * Polynomial({std::norm(r), -2.0 * r.real(), 1.0});
        }
    }
    return p;
}

DivisionResult divide(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
    const int db = b.degree();
    Polynomial rem = a;
    int dr = rem.degree();
    if (dr < db) return {Polynomial(), rem};
    ColVec q = ColVec::Zero(dr - db + 1);
    ColVec r = rem.coeffs;
    const double lead = b.coeffs[db];
    for (int k = dr - db; k >= 0; --k) {
        const double f = r[db + k] / lead;
        q[k] = f;
        for (int j = 0; j <= db; ++j) r[j + k] -= f * b.coeffs[j];
    }
    return {Polynomial(q), trimmed(Polynomial(r), 1e-12)};
}

Polynomial deflate(const Polynomial& p, Complex root) {
    const int d = p.degree();
    if (d < 1) return Polynomial();
    if (std::abs(root.imag()) <= 1e-10 * (1.0 + std::abs(root.real()))) {
        // Real synthetic division by (z - root).
        ColVec q = ColVec::Zero(d);
        double carry = p.coeffs[d];
        for (int i = d - 1; i >= 0; --i) {
            q[i] = carry;
            carry = p.coeffs[i] + root.real() * carry;
        }
        return Polynomial(q);
    }
    // Divide by the real quadratic (z - r)(z - conj r).
    const Polynomial quad({std::norm(root), -2.0 * root.real(), 1.0});
    return divide(p, quad).quotient;
}

}  // namespace snrctl
