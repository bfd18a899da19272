#ifndef SNRCTL_STATE_SPACE_HPP
#define SNRCTL_STATE_SPACE_HPP

#include "snrctl/rational.hpp"
#include "snrctl/types.hpp"

namespace snrctl {

/// Discrete-time state-space model x+ = Ax + Bu, y = Cx + Du.
struct StateSpaceModel {
    Matrix A, B, C, D;

    StateSpaceModel() = default;
    StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d);

    int states() const { return static_cast<int>(A.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
    int outputs() const { return static_cast<int>(C.rows()); }
};

// PBH tests over the closed unit disk boundary-and-outside eigenvalues.
bool is_stabilizable(const Matrix& a, const Matrix& b);
bool is_detectable(const Matrix& a, const Matrix& c);

// Reduced transfer function of the (i,j) scalar channel
// C_i (zI - A)^{-1} B_j + D_ij, computed by interpolation on a circle
// enclosing the spectrum.
RationalTransfer transfer_entry(const StateSpaceModel& ss, int i, int j);

// Controllable-canonical realization of a proper scalar transfer function.
StateSpaceModel realize_siso(const RationalTransfer& tf);

}  // namespace snrctl

#endif
