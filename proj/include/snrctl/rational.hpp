#ifndef SNRCTL_RATIONAL_HPP
#define SNRCTL_RATIONAL_HPP

#include <vector>

#include "snrctl/polynomial.hpp"
#include "snrctl/types.hpp"

namespace snrctl {

/// Scalar rational function of z with real coefficients. Denominator is
/// never identically zero; reduce() keeps num/den free of common roots.
struct RationalTransfer {
    Polynomial num;
    Polynomial den;

    RationalTransfer() : num(), den({1.0}) {}
    RationalTransfer(Polynomial n, Polynomial d);

    bool is_zero() const { return num.is_zero(); }
};

// Constant and pure-delay helpers.
RationalTransfer constant_tf(double c);
RationalTransfer delay_tf(int k);  // z^{-k}

RationalTransfer operator+(const RationalTransfer& a, const RationalTransfer& b);
RationalTransfer operator-(const RationalTransfer& a, const RationalTransfer& b);
RationalTransfer operator*(const RationalTransfer& a, const RationalTransfer& b);
RationalTransfer operator/(const RationalTransfer& a, const RationalTransfer& b);
RationalTransfer operator*(double s, const RationalTransfer& a);
RationalTransfer inverse(const RationalTransfer& a);

// Cancels common num/den roots within root_tol, cancels common powers of z
// exactly, and normalizes to a monic denominator.
RationalTransfer reduce(const RationalTransfer& tf, double root_tol = tol::kCancel);

Complex eval_freq(const RationalTransfer& tf, double omega);

// Evaluation at an arbitrary complex point (must not be a pole).
Complex eval_at(const RationalTransfer& tf, Complex z);

std::vector<Complex> poles(const RationalTransfer& tf);
std::vector<Complex> zeros(const RationalTransfer& tf);

bool is_schur_stable(const RationalTransfer& tf);
bool is_proper(const RationalTransfer& tf);
bool is_strictly_proper(const RationalTransfer& tf);

// Largest pole modulus; 0 for constants.
double spectral_radius(const RationalTransfer& tf);

double max_coeff_abs(const RationalTransfer& tf);

}  // namespace snrctl

#endif
