#ifndef SNRCTL_NORMS_HPP
#define SNRCTL_NORMS_HPP

#include "snrctl/rational.hpp"
#include "snrctl/state_space.hpp"
#include "snrctl/types.hpp"

namespace snrctl {

// Solves X = A X A^T + W for Schur-stable A by squared Smith iteration.
Matrix discrete_lyapunov(const Matrix& a, const Matrix& w);

// Squared H2 norm of a stable proper scalar transfer function, computed
// from the controllability Gramian of a minimal realization.
double h2_norm_sq(const RationalTransfer& tf);

// H = H / ||H||_2 so the result has unit squared H2 norm.
RationalTransfer normalize_channel_factor(const RationalTransfer& h);

}  // namespace snrctl

#endif
