#ifndef SNRCTL_PROGRAM_HPP
#define SNRCTL_PROGRAM_HPP

#include <vector>

#include "snrctl/coprime.hpp"
#include "snrctl/grid.hpp"
#include "snrctl/plant.hpp"
#include "snrctl/rational.hpp"

namespace snrctl {

/// FIR Youla parameter Q(z) = sum_j q_j z^{-j}.
struct FirParameter {
    ColVec coeffs;

    FirParameter() : coeffs(ColVec::Zero(1)) {}
    explicit FirParameter(ColVec c) : coeffs(std::move(c)) {}
    static FirParameter zero(int m) { return FirParameter(ColVec::Zero(m)); }

    int order() const { return static_cast<int>(coeffs.size()); }
    Complex eval(double omega) const;
    Complex eval_at(Complex z) const;
    RationalTransfer to_rational() const;
};

/// Per-grid-point scalar reductions of the cost data A, B, E, F, L.
/// With h = m2*Q + b, the matrix products collapse as
///   ||(AQ+B)(w)||_F = g |h|,   (AQ+B)(EQ+F) has nuclear norm g |h| |EQ+F|.
struct ProgramData {
    FrequencyGrid grid;
    ComplexVec m2;      // M^2
    ComplexVec b;       // M^2 V / N
    ComplexVec e;       // E = M N H
    ComplexVec f;       // F = (M V - 1) H
    ColVec g;           // sqrt(Gzu* Gzu * Gyv Gyv*)
    ComplexVec ell;     // tr(L^* Gzu Gyv)
    double l_norm_sq = 0.0;
    double snr = 0.0;   // sigma^2
    int snr_offset = 0; // 0 (default) or 1; effective bound is snr + offset

    double snr_effective() const { return snr + snr_offset; }
    int n() const { return grid.n; }
};

ProgramData build_program_data(const GeneralizedPlant& plant, const CoprimeFactors& factors,
                               const RationalTransfer& h, const FrequencyGrid& grid,
                               double snr, int snr_offset = 0);

// Channel-power term (1/n) sum |E Q + F|^2.
double power_of(const ProgramData& data, const FirParameter& q);

struct ThetaMembership {
    bool member = false;
    double power = 0.0;
    double slack = 0.0;  // snr_effective - power
};
ThetaMembership in_theta_q(const ProgramData& data, const FirParameter& q);

// Youla cost phi(Q), its affine part Delta(Q), and phi0 = phi - Delta.
double phi(const ProgramData& data, const FirParameter& q);
double delta(const ProgramData& data, const FirParameter& q);
double phi0(const ProgramData& data, const FirParameter& q);

struct YoulaController {
    RationalTransfer k;
    std::vector<Complex> loop_roots;  // zeros of N Q + V
    bool roots_near_circle = false;
};

// K = (M Q - U) / (N Q + V), reduced, with a flag when N Q + V has roots
// within the circle exclusion band (then K is not in RL1).
YoulaController k_from_q(const CoprimeFactors& factors, const FirParameter& q);

// Displaces circle roots of N Q + V radially outward via the affine
// lambda_0 (+ lambda_1 z^{-1}) update, keeping the cost increase below eps.
FirParameter perturb_q(const CoprimeFactors& factors, const ProgramData& data,
                       const FirParameter& q, double eps);

}  // namespace snrctl

#endif
