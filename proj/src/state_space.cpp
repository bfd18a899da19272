#include "snrctl/state_space.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "snrctl/errors.hpp"

namespace snrctl {

StateSpaceModel::StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || B.rows() != n || C.cols() != n || D.rows() != C.rows() ||
        D.cols() != B.cols()) {
        throw DimensionMismatch("inconsistent state-space dimensions");
    }
}

namespace {

bool pbh_full_rank(const Matrix& a, const Matrix& b_or_ct) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return true;
    Eigen::EigenSolver<Matrix> es(a, false);
    for (int i = 0; i < n; ++i) {
        const Complex lambda = es.eigenvalues()[i];
        if (std::abs(lambda) < 1.0 - tol::kStabilityMargin) continue;
        ComplexMatrix m(n, n + b_or_ct.cols());
        m.leftCols(n) = lambda * ComplexMatrix::Identity(n, n) - a.cast<Complex>();
        m.rightCols(b_or_ct.cols()) = b_or_ct.cast<Complex>();
        Eigen::JacobiSVD<ComplexMatrix> svd(m);
        const double smin = svd.singularValues()[n - 1];
        const double smax = svd.singularValues()[0];
        if (smin <= 1e-10 * std::max(1.0, smax)) return false;
    }
    return true;
}

}  // namespace

bool is_stabilizable(const Matrix& a, const Matrix& b) { return pbh_full_rank(a, b); }

bool is_detectable(const Matrix& a, const Matrix& c) {
    return pbh_full_rank(a.transpose(), c.transpose());
}

RationalTransfer transfer_entry(const StateSpaceModel& ss, int i, int j) {
    const int n = ss.states();
    if (i < 0 || i >= ss.outputs() || j < 0 || j >= ss.inputs()) {
        throw DimensionMismatch("transfer_entry index out of range");
    }
    if (n == 0) return constant_tf(ss.D(i, j));

    // Denominator from the spectrum of A.
    Eigen::EigenSolver<Matrix> es(ss.A, false);
    std::vector<Complex> eigs(n);
    double rad = 0.0;
    for (int k = 0; k < n; ++k) {
        eigs[k] = es.eigenvalues()[k];
        rad = std::max(rad, std::abs(eigs[k]));
    }
    const Polynomial den = from_roots(eigs, 1.0);

    // Numerator by interpolation at n+1 points on a circle outside the
    // spectrum: num(z_l) = H(z_l) * den(z_l), recovered by inverse DFT.
    const double r = 2.0 * rad + 2.0;
    const int npts = n + 1;
    ComplexVec numvals(npts);
    const ComplexMatrix row_c = ss.C.row(i).cast<Complex>();
    const ComplexVec col_b = ss.B.col(j).cast<Complex>();
    for (int l = 0; l < npts; ++l) {
        const Complex z = std::polar(r, 2.0 * M_PI * l / npts);
        ComplexMatrix zia = z * ComplexMatrix::Identity(n, n) - ss.A.cast<Complex>();
        const Complex h = (row_c * zia.partialPivLu().solve(col_b))(0, 0);
        numvals[l] = (h + ss.D(i, j)) * den.eval(z);
    }
    ColVec num_coeffs(npts);
    for (int k = 0; k < npts; ++k) {
        Complex acc(0.0, 0.0);
        for (int l = 0; l < npts; ++l) {
            acc += numvals[l] * std::polar(1.0, -2.0 * M_PI * l * k / npts);
        }
        num_coeffs[k] = (acc / static_cast<double>(npts)).real() / std::pow(r, k);
    }
    return reduce(RationalTransfer(Polynomial(num_coeffs), den));
}

StateSpaceModel realize_siso(const RationalTransfer& tf) {
    RationalTransfer h = reduce(tf);
    if (!is_proper(h)) throw std::invalid_argument("realize_siso: improper transfer function");
    const int n = h.den.degree();
    // Split off the direct term: num = q*den + rem with deg(rem) < n.
    DivisionResult dv = divide(h.num, h.den);
    const double d = dv.quotient.is_zero() ? 0.0 : dv.quotient.coeffs[0];
    Matrix A = Matrix::Zero(n, n);
    Matrix B = Matrix::Zero(n, 1);
    Matrix C = Matrix::Zero(1, n);
    if (n > 0) {
        for (int k = 0; k + 1 < n; ++k) A(k, k + 1) = 1.0;
        for (int k = 0; k < n; ++k) A(n - 1, k) = -h.den.coeffs[k];
        B(n - 1, 0) = 1.0;
        for (int k = 0; k < n && k < static_cast<int>(dv.remainder.coeffs.size()); ++k) {
            C(0, k) = dv.remainder.coeffs[k];
        }
    }
    Matrix Dm(1, 1);
    Dm(0, 0) = d;
    return StateSpaceModel(A, B, C, Dm);
}

}  // namespace snrctl
