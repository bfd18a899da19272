#ifndef SNRCTL_TRIG_HPP
#define SNRCTL_TRIG_HPP

#include "snrctl/grid.hpp"
#include "snrctl/polynomial.hpp"
#include "snrctl/types.hpp"

namespace snrctl {

/// Real trigonometric polynomial A(w) = A_0 + sum_k A_k (e^{ikw} + e^{-ikw}).
struct TrigPolynomial {
    ColVec coeffs;  // A_0 .. A_Nc

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    double eval(double omega) const;
    double min_on_grid(int n = 4096) const;
    double max_on_grid(int n = 4096) const;
};

struct MagnitudeFit {
    TrigPolynomial fit;
    double relative_rms_residual = 0.0;
    double positivity_shift = 0.0;
};

// Least-squares cosine fit of nonnegative grid samples, floored so the
// fitted minimum stays above 1e-9 * max A.
MagnitudeFit fit_magnitude_sq(const ColVec& target, const FrequencyGrid& grid, int order);

// Stable minimum-phase factor C(z) = sum_j taps[j] z^{-j} of A(w) = |C|^2,
// computed by root-flipping on the lifted degree-2Nc polynomial. taps[0] > 0.
ColVec spectral_factor_trig(const TrigPolynomial& a);

// FIR in z^{-1} as a rational function of z.
RationalTransfer fir_to_rational(const ColVec& taps);

// |C(e^{iw})|^2 for an FIR given by taps in z^{-1}.
double fir_magnitude_sq(const ColVec& taps, double omega);

}  // namespace snrctl

#endif
