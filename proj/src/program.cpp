#include "snrctl/program.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "snrctl/errors.hpp"
#include "snrctl/norms.hpp"
#include "snrctl/trig.hpp"

namespace snrctl {

Complex FirParameter::eval(double omega) const {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * std::polar(1.0, -j * omega);
    return acc;
}

Complex FirParameter::eval_at(Complex z) const {
    const Complex zi = 1.0 / z;
    Complex acc(0.0, 0.0);
    for (int j = static_cast<int>(coeffs.size()) - 1; j >= 0; --j) {
        acc = acc * zi + coeffs[j];
    }
    return acc;
}

RationalTransfer FirParameter::to_rational() const { return fir_to_rational(coeffs); }

namespace {

// L = G_zv - M N^{-1} G_zu G_yv, entrywise and reduced.
RationalMatrix build_l_matrix(const GeneralizedPlant& plant, const CoprimeFactors& fac) {
    RationalMatrix l(plant.n_z, plant.n_v);
    for (int i = 0; i < plant.n_z; ++i) {
        for (int j = 0; j < plant.n_v; ++j) {
            RationalTransfer t = fac.m * plant.g_zu[i];
            t = t * plant.g_yv[j];
            t = t / fac.n;
            l(i, j) = plant.g_zv(i, j) - t;
        }
    }
    return l;
}

}  // namespace

ProgramData build_program_data(const GeneralizedPlant& plant, const CoprimeFactors& factors,
                               const RationalTransfer& h, const FrequencyGrid& grid,
                               double snr, int snr_offset) {
    if (snr <= 0.0) throw OutsideDomain("snr must be positive");
    if (std::abs(h2_norm_sq(h) - 1.0) > 1e-8) {
        throw NonNormalizedChannel("channel factor must satisfy ||H||_2^2 = 1");
    }

    ProgramData data;
    data.grid = grid;
    data.snr = snr;
    data.snr_offset = snr_offset;
    const int n = grid.n;
    data.m2.resize(n);
    data.b.resize(n);
    data.e.resize(n);
    data.f.resize(n);
    data.g.resize(n);
    data.ell.resize(n);

    const RationalMatrix l_matrix = build_l_matrix(plant, factors);
    for (const RationalTransfer& entry : l_matrix.entries) {
        if (!entry.is_zero() && !is_schur_stable(entry)) {
            throw Unstable("L = G_zv - M N^{-1} G_zu G_yv has an unstable entry");
        }
    }
    data.l_norm_sq = h2_norm_sq(l_matrix);

    double l2_grid = 0.0;
    for (int k = 0; k < n; ++k) {
        const double w = grid.omegas[k];
        const Complex mv = eval_freq(factors.m, w);
        const Complex nv = eval_freq(factors.n, w);
        const Complex vv = eval_freq(factors.v, w);
        const Complex hv = eval_freq(h, w);
        if (std::abs(nv) <= 1e-9) {
            throw ZeroOnCircle("N vanishes on the grid at omega=" + std::to_string(w));
        }
        data.m2[k] = mv * mv;
        data.b[k] = mv * mv * vv / nv;
        data.e[k] = mv * nv * hv;
        data.f[k] = (mv * vv - 1.0) * hv;
        const double gzu = gzu_magnitude(plant, w);
        const double gyv = gyv_magnitude(plant, w);
        if (gzu <= 0.0 || gyv <= 0.0) {
            throw ZeroOnCircle("plant weighting magnitudes must be positive on the grid");
        }
        data.g[k] = gzu * gyv;
        Complex ell(0.0, 0.0);
        ComplexMatrix lv = l_matrix.eval(w);
        l2_grid += lv.squaredNorm();
        for (int i = 0; i < plant.n_z; ++i) {
            const Complex zu = eval_freq(plant.g_zu[i], w);
            for (int j = 0; j < plant.n_v; ++j) {
                ell += std::conj(lv(i, j)) * zu * eval_freq(plant.g_yv[j], w);
            }
        }
        data.ell[k] = ell;
    }
    l2_grid /= n;
    if (std::abs(l2_grid - data.l_norm_sq) > 1e-6 * (1.0 + data.l_norm_sq)) {
        std::ostringstream msg;
        msg << "L norm cross-check failed: gramian " << data.l_norm_sq << " vs grid "
            << l2_grid;
        throw std::logic_error(msg.str());
    }

    // Scalar-reduction identity check against the matrix form of A Q + B
    // at a few points, for random FIR Q.
    std::mt19937 rng(0x5eed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        ColVec qc(4);
        for (int j = 0; j < 4; ++j) qc[j] = unif(rng);
        const FirParameter q(qc);
        for (int s = 0; s < 8; ++s) {
            const int k = (s * n) / 8;
            const double w = grid.omegas[k];
            const Complex qv = q.eval(w);
            double frob_sq = 0.0;
            for (int i = 0; i < plant.n_z; ++i) {
                const Complex zu = eval_freq(plant.g_zu[i], w);
                for (int j = 0; j < plant.n_v; ++j) {
                    const Complex yv = eval_freq(plant.g_yv[j], w);
                    frob_sq += std::norm(data.m2[k] * zu * yv * qv +
                                         data.m2[k] * yv * zu *
                                             eval_freq(factors.v, w) /
                                             eval_freq(factors.n, w));
                }
            }
            const double scalar = data.g[k] * std::abs(data.m2[k] * qv + data.b[k]);
            if (std::abs(std::sqrt(frob_sq) - scalar) > 1e-8 * (1.0 + scalar)) {
                throw std::logic_error("scalar reduction of A Q + B failed the identity check");
            }
        }
    }
    return data;
}

double power_of(const ProgramData& data, const FirParameter& q) {
    double acc = 0.0;
    for (int k = 0; k < data.n(); ++k) {
        acc += std::norm(data.e[k] * q.eval(data.grid.omegas[k]) + data.f[k]);
    }
    return acc / data.n();
}

ThetaMembership in_theta_q(const ProgramData& data, const FirParameter& q) {
    ThetaMembership m;
    m.power = power_of(data, q);
    m.slack = data.snr_effective() - m.power;
    m.member = m.slack > 0.0;
    return m;
}

namespace {

struct PhiParts {
    double quad = 0.0;   // (1/n) sum g^2 |h|^2
    double cross = 0.0;  // (2/n) sum Re(ell h)
    double l1num = 0.0;  // (1/n) sum g |h| |w|
    double power = 0.0;  // (1/n) sum |w|^2
};

PhiParts phi_parts(const ProgramData& data, const FirParameter& q) {
    PhiParts p;
    for (int k = 0; k < data.n(); ++k) {
        const double w = data.grid.omegas[k];
        const Complex qv = q.eval(w);
        const Complex h = data.m2[k] * qv + data.b[k];
        const Complex wv = data.e[k] * qv + data.f[k];
        p.quad += data.g[k] * data.g[k] * std::norm(h);
        p.cross += 2.0 * (data.ell[k] * h).real();
        p.l1num += data.g[k] * std::abs(h) * std::abs(wv);
        p.power += std::norm(wv);
    }
    const double n = data.n();
    p.quad /= n;
    p.cross /= n;
    p.l1num /= n;
    p.power /= n;
    return p;
}

}  // namespace

double phi(const ProgramData& data, const FirParameter& q) {
    const PhiParts p = phi_parts(data, q);
    if (p.power >= data.snr_effective()) {
        throw OutsideDomain("q outside Theta_Q: channel power " + std::to_string(p.power) +
                            " >= " + std::to_string(data.snr_effective()));
    }
    return data.l_norm_sq + p.cross + p.quad +
           p.l1num * p.l1num / (data.snr_effective() - p.power);
}

double delta(const ProgramData& data, const FirParameter& q) {
    const PhiParts p = phi_parts(data, q);
    return data.l_norm_sq + p.cross;
}

double phi0(const ProgramData& data, const FirParameter& q) {
    return phi(data, q) - delta(data, q);
}

YoulaController k_from_q(const CoprimeFactors& factors, const FirParameter& q) {
    const RationalTransfer qr = q.to_rational();
    const RationalTransfer num = factors.m * qr - factors.u;
    const RationalTransfer den = factors.n * qr + factors.v;
    if (den.num.is_zero()) {
        throw ZeroDenominator("N Q + V is identically zero; Bezout identity violated");
    }
    YoulaController out;
    out.loop_roots = zeros(den);
    for (const Complex& r : out.loop_roots) {
        if (std::abs(std::abs(r) - 1.0) <= tol::kCircleBand) {
            out.roots_near_circle = true;
            break;
        }
    }
    out.k = num.num.is_zero() ? constant_tf(0.0) : reduce(num / den);
    return out;
}

FirParameter perturb_q(const CoprimeFactors& factors, const ProgramData& data,
                       const FirParameter& q, double eps) {
    if (eps <= 0.0) throw OutsideDomain("perturb_q needs eps > 0");
    if (!in_theta_q(data, q).member) throw OutsideDomain("perturb_q: q outside Theta_Q");
    const double phi_base = phi(data, q);

    auto circle_roots_of = [&](const FirParameter& qq) {
        const RationalTransfer den = factors.n * qq.to_rational() + factors.v;
        std::vector<Complex> on_circle;
        for (const Complex& r : zeros(den)) {
            if (std::abs(std::abs(r) - 1.0) <= tol::kCircleBand) on_circle.push_back(r);
        }
        return on_circle;
    };

    FirParameter qh = q;
    for (int outer = 0; outer < 64; ++outer) {
        const std::vector<Complex> circle = circle_roots_of(qh);
        if (circle.empty()) return qh;
        const Complex z0 = circle.front();
        const bool real_root = std::abs(z0.imag()) <= 1e-9 * (1.0 + std::abs(z0.real()));

        double mu = 1e-3;
        bool moved = false;
        while (mu >= 1e-12) {
            const Complex z_new = (1.0 + mu) * z0;
            FirParameter cand = qh;
            if (cand.coeffs.size() < 2) {
                ColVec ext = ColVec::Zero(2);
                ext.head(cand.coeffs.size()) = cand.coeffs;
                cand.coeffs = ext;
            }
            const Complex nv = eval_at(factors.n, z_new);
            // Residual of N Q + V at the displaced point.
            const Complex res = nv * cand.eval_at(z_new) + eval_at(factors.v, z_new);
            if (real_root) {
                const double lambda0 = -(res / nv).real();
                cand.coeffs[0] += lambda0;
            } else {
                // Solve N(z)(l0 + l1/z) = -res for real l0, l1.
                const Complex c0 = nv;
                const Complex c1 = nv / z_new;
                Matrix sys(2, 2);
                sys << c0.real(), c1.real(), c0.imag(), c1.imag();
                ColVec rhs2(2);
                rhs2 << -res.real(), -res.imag();
                const ColVec lam = sys.partialPivLu().solve(rhs2);
                cand.coeffs[0] += lam[0];
                cand.coeffs[1] += lam[1];
            }
            const ThetaMembership member = in_theta_q(data, cand);
            if (member.member && phi(data, cand) < phi_base + eps &&
                circle_roots_of(cand).size() < circle.size()) {
                qh = cand;
                moved = true;
                break;
            }
            mu *= 0.5;
        }
        if (!moved) {
            std::ostringstream msg;
            msg << "perturbation step underflow at root " << z0.real() << (z0.imag() < 0 ? "-" : "+")
                << std::abs(z0.imag()) << "i; " << circle.size() << " circle roots remain";
            throw PerturbationFailed(msg.str());
        }
    }
    throw PerturbationFailed("circle roots persisted after the iteration limit");
}

}  // namespace snrctl
