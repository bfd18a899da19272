#include "snrctl/coprime.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "snrctl/errors.hpp"
#include "snrctl/grid.hpp"

namespace snrctl {

namespace {

// Riccati gain by value iteration with Q = R = I; converges for
// stabilizable (A, B).
RowVec dare_gain(const Matrix& a, const Matrix& b) {
    const int n = static_cast<int>(a.rows());
    Matrix x = Matrix::Identity(n, n);
    for (int it = 0; it < 10000; ++it) {
        const Matrix btxb = b.transpose() * x * b;
        const Matrix gain = (Matrix::Identity(1, 1) + btxb).ldlt().solve(
            b.transpose() * x * a);
        const Matrix xn = Matrix::Identity(n, n) + a.transpose() * x * a -
                          a.transpose() * x * b * gain;
        const double diff = (xn - x).norm();
        x = xn;
        if (diff < 1e-13 * std::max(1.0, x.norm())) break;
    }
    const Matrix btxb = b.transpose() * x * b;
    return -(Matrix::Identity(1, 1) + btxb).ldlt().solve(b.transpose() * x * a);
}

double spectral_radius_of(const Matrix& a) {
    if (a.rows() == 0) return 0.0;
    return a.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

RowVec stabilizing_state_feedback(const Matrix& a, const Matrix& b) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return RowVec(0);
    if (!is_stabilizable(a, b)) throw NotStabilizable("(A, B) not stabilizable");

    // Controllability matrix and its conditioning.
    Matrix ctrb(n, n);
    Matrix col = b;
    for (int k = 0; k < n; ++k) {
        ctrb.col(k) = col;
        col = a * col;
    }
    Eigen::JacobiSVD<Matrix> svd(ctrb, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues()[n - 1];
    const double smax = svd.singularValues()[0];
    if (smin > 1e-9 * std::max(1.0, smax)) {
        // Deadbeat placement via Ackermann: F = -e_n^T Ctrb^{-1} A^n.
        Matrix an = Matrix::Identity(n, n);
        for (int k = 0; k < n; ++k) an = an * a;
        RowVec en = RowVec::Zero(n);
        en[n - 1] = 1.0;
        RowVec f = -(ctrb.transpose().partialPivLu().solve(en.transpose())).transpose() * an;
        if (spectral_radius_of(a + b * f) < 1e-6) return f;
    }
    RowVec f = dare_gain(a, b);
    if (spectral_radius_of(a + b * f) >= 1.0 - tol::kStabilityMargin) {
        throw NotStabilizable("stabilizing gain computation failed");
    }
    return f;
}

ColVec stabilizing_observer_gain(const Matrix& a, const Matrix& c) {
    return stabilizing_state_feedback(a.transpose(), c.transpose()).transpose();
}

double bezout_residual_on_grid(const CoprimeFactors& f, int grid_n) {
    const FrequencyGrid grid = FrequencyGrid::uniform(grid_n);
    double worst = 0.0;
    for (int k = 0; k < grid.n; ++k) {
        const double w = grid.omegas[k];
        const Complex r = eval_freq(f.v, w) * eval_freq(f.m, w) +
                          eval_freq(f.u, w) * eval_freq(f.n, w) - 1.0;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

CoprimeFactors coprime_factorize(const GeneralizedPlant& plant) {
    const RationalTransfer gyu = reduce(plant.g_yu);

    CoprimeFactors out;
    if (is_schur_stable(gyu)) {
        out.m = constant_tf(1.0);
        out.n = gyu;
        out.u = constant_tf(0.0);
        out.v = constant_tf(1.0);
        out.bezout_residual = bezout_residual_on_grid(out);
        return out;
    }

    StateSpaceModel ss = realize_siso(gyu);
    const Matrix& a = ss.A;
    const Matrix& b = ss.B;
    const Matrix& c = ss.C;
    if (!is_stabilizable(a, b)) throw NotStabilizable("G_yu realization not stabilizable");
    if (!is_detectable(a, c)) throw NotDetectable("G_yu realization not detectable");

    const RowVec f = stabilizing_state_feedback(a, b);
    const ColVec l = stabilizing_observer_gain(a, c);
    const Matrix af = a + b * f;
    const Matrix al = a + l * c;

    Matrix one(1, 1), zero(1, 1);
    one << 1.0;
    zero << 0.0;
    const RationalTransfer m = transfer_entry(StateSpaceModel(af, b, f, one), 0, 0);
    const RationalTransfer n = transfer_entry(StateSpaceModel(af, b, c, zero), 0, 0);
    const RationalTransfer u0 = transfer_entry(StateSpaceModel(al, l, f, zero), 0, 0);
    const RationalTransfer v0 = transfer_entry(StateSpaceModel(al, b, Matrix(-f), one), 0, 0);

    out.m = m;
    out.n = n;
    // The Bezout certificate fixes the sign convention empirically.
    for (int su : {+1, -1}) {
        out.u = su > 0 ? u0 : -1.0 * u0;
        out.v = v0;
        out.bezout_residual = bezout_residual_on_grid(out);
        if (out.bezout_residual < tol::kBezout) return out;
    }
    throw NotStabilizable("coprime factorization failed the Bezout certificate, residual " +
                          std::to_string(out.bezout_residual));
}

}  // namespace snrctl
