#ifndef SNRCTL_POLYNOMIAL_HPP
#define SNRCTL_POLYNOMIAL_HPP

#include <vector>

#include "snrctl/types.hpp"

namespace snrctl {

/// Real polynomial in z, coefficients stored ascending in powers of z.
/// The zero polynomial is represented by the single coefficient {0}.
struct Polynomial {
    ColVec coeffs;

    Polynomial() : coeffs(ColVec::Zero(1)) {}
    explicit Polynomial(ColVec c);
    Polynomial(std::initializer_list<double> c);

    // Index of the last nonzero coefficient; -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return degree() < 0; }
    double leading() const;

    Complex eval(Complex z) const;
    double eval(double x) const;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double s, const Polynomial& a);

// Drops leading coefficients with magnitude <= rel_tol * max|coeff|.
Polynomial trimmed(const Polynomial& p, double rel_tol = tol::kCoeffTrim);

// Monic z^k for k >= 0.
Polynomial monomial(int k);

// Roots with multiplicity, via balanced companion-matrix eigenvalues.
std::vector<Complex> roots(const Polynomial& p);

// Real polynomial with the given roots (conjugates paired within pair_tol)
// scaled by `leading`.
Polynomial from_roots(const std::vector<Complex>& rts, double leading = 1.0,
                      double pair_tol = 1e-8);

// Quotient and remainder of a / b, deg(rem) < deg(b).
struct DivisionResult {
    Polynomial quotient;
    Polynomial remainder;
};
DivisionResult divide(const Polynomial& a, const Polynomial& b);

// Removes one root (or a conjugate pair, when |Im r| is significant) by
// synthetic division. The root is assumed accurate; the residual is dropped.
Polynomial deflate(const Polynomial& p, Complex root);

// In-place diagonal balancing of a square matrix (Parlett-Reinsch, powers
// of two), used before eigenvalue extraction of companion matrices.
void balance_in_place(Matrix& a);

}  // namespace snrctl

#endif
