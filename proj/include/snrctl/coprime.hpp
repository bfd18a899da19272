#ifndef SNRCTL_COPRIME_HPP
#define SNRCTL_COPRIME_HPP

#include "snrctl/plant.hpp"
#include "snrctl/rational.hpp"

namespace snrctl {

/// Doubly-coprime data for G_yu = N M^{-1} with Bezout identity VM + UN = 1.
/// All four factors are Schur stable and proper; N is strictly proper.
struct CoprimeFactors {
    RationalTransfer m, n, u, v;
    double bezout_residual = 0.0;
};

// State-feedback gain F with A + B F Schur stable: deadbeat pole placement
// when (A, B) is well-conditioned controllable, Riccati-based otherwise.
RowVec stabilizing_state_feedback(const Matrix& a, const Matrix& b);

// Observer gain L with A + L C Schur stable (dual construction).
ColVec stabilizing_observer_gain(const Matrix& a, const Matrix& c);

// Coprime factorization of plant.g_yu built from stabilizing gains. The
// returned sign convention is certified against VM + UN = 1 on a grid.
CoprimeFactors coprime_factorize(const GeneralizedPlant& plant);

// Max over the grid of |V M + U N - 1|.
double bezout_residual_on_grid(const CoprimeFactors& f, int grid_n = 512);

}  // namespace snrctl

#endif
