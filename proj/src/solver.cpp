#include "snrctl/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <random>

#include "snrctl/errors.hpp"

namespace snrctl {

namespace {
constexpr double kStrictness = 1e-6;  // power <= snr_eff * (1 - kStrictness)
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

DiscreteProgram assemble(const ProgramData& data, int fir_order) {
    if (data.n() < 2 * fir_order) {
        throw GridTooCoarse("grid must satisfy n >= 2 m to resolve the FIR parameter");
    }
    DiscreteProgram prog;
    prog.data = data;
    prog.fir_order = fir_order;
    const int n = data.n();
    prog.h_rows.resize(n, fir_order);
    prog.w_rows.resize(n, fir_order);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < fir_order; ++j) {
            const Complex basis = std::polar(1.0, -j * data.grid.omegas[k]);
            prog.h_rows(k, j) = data.m2[k] * basis;
            prog.w_rows(k, j) = data.e[k] * basis;
        }
    }
    // The affine maps must reproduce direct evaluation.
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ColVec probe(fir_order);
    for (int j = 0; j < fir_order; ++j) probe[j] = unif(rng);
    const FirParameter q(probe);
    const ComplexVec h = prog.h_rows * probe + data.b;
    const ComplexVec w = prog.w_rows * probe + data.f;
    for (int s = 0; s < n; s += std::max(1, n / 16)) {
        const double omega = data.grid.omegas[s];
        const Complex hd = data.m2[s] * q.eval(omega) + data.b[s];
        const Complex wd = data.e[s] * q.eval(omega) + data.f[s];
        if (std::abs(h[s] - hd) > 1e-12 * (1.0 + std::abs(hd)) ||
            std::abs(w[s] - wd) > 1e-12 * (1.0 + std::abs(wd))) {
            throw std::logic_error("assembled affine maps disagree with direct evaluation");
        }
    }
    return prog;
}

double reduced_objective(const DiscreteProgram& prog, const ColVec& q, double tau,
                         double mu, ColVec* grad, Matrix* hess) {
    const ProgramData& data = prog.data;
    const int n = data.n();
    const int m = prog.fir_order;
    const double snr_eff = data.snr_effective();
    const ComplexVec h = prog.h_rows * q + data.b;
    const ComplexVec w = prog.w_rows * q + data.f;

    const double power = w.squaredNorm() / n;
    const double slack_strict = snr_eff * (1.0 - kStrictness) - power;
    if (slack_strict <= 0.0) return kInf;

    const double tau2 = tau * tau;
    ColVec sh(n), sw(n);
    double quad = 0.0, cross = 0.0, p_term = 0.0;
    for (int k = 0; k < n; ++k) {
        sh[k] = std::sqrt(std::norm(h[k]) + tau2);
        sw[k] = std::sqrt(std::norm(w[k]) + tau2);
        quad += data.g[k] * data.g[k] * std::norm(h[k]);
        cross += 2.0 * (data.ell[k] * h[k]).real();
        p_term += data.g[k] * sh[k] * sw[k];
    }
    quad /= n;
    cross /= n;
    p_term /= n;
    const double den = snr_eff - power;
    double f = data.l_norm_sq + cross + quad + p_term * p_term / den;
    if (mu > 0.0) f -= mu * std::log(slack_strict);

    if (!grad && !hess) return f;

    ComplexVec uh(n), uw(n), uq(n);
    for (int k = 0; k < n; ++k) {
        uq[k] = data.g[k] * data.g[k] * h[k];
        uh[k] = data.g[k] * (sw[k] / sh[k]) * h[k];
        uw[k] = data.g[k] * (sh[k] / sw[k]) * w[k];
    }
    const ColVec grad_quad = (2.0 / n) * (prog.h_rows.adjoint() * uq).real();
    const ColVec grad_cross = (2.0 / n) * (prog.h_rows.transpose() * data.ell).real();
    const ColVec grad_p = (1.0 / n) * ((prog.h_rows.adjoint() * uh).real() +
                                       (prog.w_rows.adjoint() * uw).real());
    const ColVec grad_power = (2.0 / n) * (prog.w_rows.adjoint() * w).real();
    if (grad) {
        ColVec g = grad_cross + grad_quad + (2.0 * p_term / den) * grad_p +
                   (p_term * p_term / (den * den)) * grad_power;
        if (mu > 0.0) g += (mu / slack_strict) * grad_power;
        *grad = g;
    }

    if (hess) {
        // Real Jacobians of h and w enter all curvature terms as
        // Re(row)^T Re(row) + Im(row)^T Im(row) blocks.
        const Matrix hr = prog.h_rows.real(), hi = prog.h_rows.imag();
        const Matrix wr = prog.w_rows.real(), wi = prog.w_rows.imag();
        Matrix hess_quad = Matrix::Zero(m, m);   // of quad
        Matrix hess_power = Matrix::Zero(m, m);  // of power
        Matrix hess_p = Matrix::Zero(m, m);      // of p_term
        for (int k = 0; k < n; ++k) {
            const ColVec jhr = hr.row(k).transpose();
            const ColVec jhi = hi.row(k).transpose();
            const ColVec jwr = wr.row(k).transpose();
            const ColVec jwi = wi.row(k).transpose();
            const Matrix hh = jhr * jhr.transpose() + jhi * jhi.transpose();
            const Matrix ww = jwr * jwr.transpose() + jwi * jwi.transpose();
            hess_quad += data.g[k] * data.g[k] * hh;
            hess_power += ww;
            // grad sh = Re(conj(h) row_h)/sh, and analogously for sw.
            const ColVec gsh = (h[k].real() * jhr + h[k].imag() * jhi) / sh[k];
            const ColVec gsw = (w[k].real() * jwr + w[k].imag() * jwi) / sw[k];
            const Matrix hess_sh = hh / sh[k] - gsh * gsh.transpose() / sh[k];
            const Matrix hess_sw = ww / sw[k] - gsw * gsw.transpose() / sw[k];
            hess_p += data.g[k] * (hess_sh * sw[k] + gsh * gsw.transpose() +
                                   gsw * gsh.transpose() + sh[k] * hess_sw);
        }
        hess_quad *= 2.0 / n;
        hess_power *= 2.0 / n;
        hess_p /= n;
        Matrix hm = hess_quad + (2.0 / den) * (grad_p * grad_p.transpose()) +
                    (2.0 * p_term / den) * hess_p +
                    (2.0 * p_term / (den * den)) *
                        (grad_p * grad_power.transpose() + grad_power * grad_p.transpose()) +
                    (2.0 * p_term * p_term / (den * den * den)) *
                        (grad_power * grad_power.transpose()) +
                    (p_term * p_term / (den * den)) * hess_power;
        if (mu > 0.0) {
            hm += (mu / (slack_strict * slack_strict)) *
                      (grad_power * grad_power.transpose()) +
                  (mu / slack_strict) * hess_power;
        }
        *hess = hm;
    }
    return f;
}

PowerLeastSquares minimum_power_fir(const ProgramData& data, int fir_order) {
    const int n = data.n();
    Matrix design(2 * n, fir_order);
    ColVec rhs(2 * n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < fir_order; ++j) {
            const Complex c = data.e[k] * std::polar(1.0, -j * data.grid.omegas[k]);
            design(k, j) = c.real();
            design(n + k, j) = c.imag();
        }
        rhs[k] = -data.f[k].real();
        rhs[n + k] = -data.f[k].imag();
    }
    PowerLeastSquares out;
    ColVec q = design.colPivHouseholderQr().solve(rhs);
    out.q = FirParameter(q);
    out.min_power = (design * q - rhs).squaredNorm() / n;
    return out;
}

namespace {

struct StageResult {
    ColVec q;
    double f = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Damped Newton with Armijo backtracking; infeasible trial points are
// rejected through the +inf objective. The objective is convex, so the
// Hessian is PSD up to roundoff; a small ridge keeps the solve stable.
StageResult newton_stage(const DiscreteProgram& prog, ColVec q0, double tau, double mu,
                         double gtol, int max_iter) {
    const int m = static_cast<int>(q0.size());
    StageResult res;
    ColVec q = q0;
    ColVec grad(m);
    Matrix hess(m, m);
    double f = reduced_objective(prog, q, tau, mu, &grad, &hess);
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        if (grad.norm() <= gtol * (1.0 + std::abs(f))) {
            res.converged = true;
            break;
        }
        const double ridge = 1e-12 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
        Matrix hreg = hess + ridge * Matrix::Identity(m, m);
        Eigen::LDLT<Matrix> ldlt(hreg);
        ColVec d = -ldlt.solve(grad);
        double slope = grad.dot(d);
        if (!std::isfinite(slope) || slope >= 0.0) {
            d = -grad;
            slope = grad.dot(d);
        }
        double step = 1.0;
        double f_new = kInf;
        ColVec q_new(m);
        bool accepted = false;
        for (int ls = 0; ls < 70; ++ls) {
            q_new = q + step * d;
            f_new = reduced_objective(prog, q_new, tau, mu, nullptr, nullptr);
            if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // Stalled line search: accept only if the Newton decrement says
            // the remaining descent is below double precision.
            res.converged = -slope <= 1e-14 * (1.0 + std::abs(f));
            break;
        }
        q = q_new;
        f = reduced_objective(prog, q, tau, mu, &grad, &hess);
    }
    res.q = q;
    res.f = f;
    res.grad_norm = grad.norm();
    return res;
}

}  // namespace

MinimizeResult minimize(const DiscreteProgram& prog, double tol, int max_iter) {
    if (tol <= 0.0) throw OutsideDomain("minimize needs tol > 0");
    const ProgramData& data = prog.data;
    const int m = prog.fir_order;
    const double snr_eff = data.snr_effective();
    const double bound = snr_eff * (1.0 - kStrictness);

    MinimizeResult out;
    out.q = FirParameter::zero(m);

    // Phase 1: start from q = 0 when feasible, else from the exact
    // least-squares power minimizer.
    ColVec q = ColVec::Zero(m);
    double p0 = power_of(data, FirParameter(q));
    if (p0 >= bound) {
        PowerLeastSquares ls = minimum_power_fir(data, m);
        if (ls.min_power >= bound) {
            out.report.status = SolveStatus::Infeasible;
            out.report.power_slack = snr_eff - ls.min_power;
            out.q = ls.q;
            out.gamma = kInf;
            return out;
        }
        q = ls.q.coeffs;
    }

    const double f0 = reduced_objective(prog, q, 1e-3, 0.0, nullptr);
    const double mu_scale = 1e-2 * (1.0 + std::abs(f0));
    int total_iter = 0;
    bool final_converged = false;
    double final_grad = 0.0, final_mu = 0.0;
    for (double tau = 1e-3; tau >= 0.99e-10; tau *= 0.1) {
        const double mu = tau * mu_scale;
        const bool last = tau < 0.99e-9;
        const double gtol = last ? tol : std::max(tol, tau);
        StageResult stage = newton_stage(prog, q, tau, mu, gtol, max_iter);
        q = stage.q;
        total_iter += stage.iterations;
        if (last) {
            final_converged = stage.converged;
            final_grad = stage.grad_norm;
            final_mu = mu;
        }
    }

    out.q = FirParameter(q);
    out.gamma = reduced_objective(prog, q, 0.0, 0.0, nullptr);
    out.report.iterations = total_iter;
    out.report.final_gradient_norm = final_grad;
    out.report.barrier_parameter = final_mu;
    out.report.power_slack = snr_eff - power_of(data, out.q);
    out.report.lmi_min_eigenvalue = verify_lmi(prog, out.q, out.gamma);
    // Optimal implies the gradient really is below tolerance.
    const bool grad_ok = final_grad <= tol * (1.0 + std::abs(out.gamma));
    out.report.status =
        (final_converged && grad_ok) ? SolveStatus::Optimal : SolveStatus::MaxIter;
    return out;
}

namespace {

void tight_ae(const DiscreteProgram& prog, const FirParameter& q, ColVec& a, ColVec& e,
              double& delta_n) {
    const ProgramData& data = prog.data;
    const int n = data.n();
    a.resize(n);
    e.resize(n);
    double cross = 0.0;
    for (int k = 0; k < n; ++k) {
        const double w = data.grid.omegas[k];
        const Complex qv = q.eval(w);
        const Complex h = data.m2[k] * qv + data.b[k];
        const Complex wv = data.e[k] * qv + data.f[k];
        a[k] = data.g[k] * std::abs(h);
        e[k] = std::abs(wv);
        cross += 2.0 * (data.ell[k] * h).real();
    }
    delta_n = data.l_norm_sq + cross / n;
}

}  // namespace

double verify_lmi(const DiscreteProgram& prog, const FirParameter& q, double gamma) {
    const int n = prog.data.n();
    ColVec a, e;
    double delta_n = 0.0;
    tight_ae(prog, q, a, e, delta_n);

    Matrix b(n, 2);
    b.col(0) = e;
    b.col(1) = a;
    const Eigen::HouseholderQR<Matrix> qr(b);
    const Matrix r = qr.matrixQR().topRows(2).triangularView<Eigen::Upper>();

    Matrix block = Matrix::Zero(4, 4);
    block.topLeftCorner(2, 2).setIdentity();
    block.topRightCorner(2, 2) = r;
    block.bottomLeftCorner(2, 2) = r.transpose();
    block(2, 2) = n * prog.data.snr_effective();
    block(3, 3) = n * gamma - n * delta_n;
    Eigen::SelfAdjointEigenSolver<Matrix> es(block);
    double min_eig = es.eigenvalues().minCoeff();
    if (n > 2) min_eig = std::min(min_eig, 1.0);
    return min_eig;
}

double verify_lmi_dense(const DiscreteProgram& prog, const FirParameter& q, double gamma) {
    const int n = prog.data.n();
    ColVec a, e;
    double delta_n = 0.0;
    tight_ae(prog, q, a, e, delta_n);
    Matrix m = Matrix::Zero(n + 2, n + 2);
    m.topLeftCorner(n, n).setIdentity();
    m.block(0, n, n, 1) = e;
    m.block(0, n + 1, n, 1) = a;
    m.block(n, 0, 1, n) = e.transpose();
    m.block(n + 1, 0, 1, n) = a.transpose();
    m(n, n) = n * prog.data.snr_effective();
    m(n + 1, n + 1) = n * gamma - n * delta_n;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return es.eigenvalues().minCoeff();
}

}  // namespace snrctl
