#include "snrctl/synthesis.hpp"

#include <cmath>
#include <sstream>

#include "snrctl/errors.hpp"
#include "snrctl/norms.hpp"
#include "snrctl/trig.hpp"

namespace snrctl {

ChannelSpec make_channel(const RationalTransfer& h_raw, double snr) {
    if (snr <= 0.0) throw OutsideDomain("channel snr must be positive");
    ChannelSpec spec;
    spec.h = normalize_channel_factor(h_raw);
    spec.snr = snr;
    if (std::abs(h2_norm_sq(spec.h) - 1.0) > 1e-10) {
        throw NonNormalizedChannel("channel normalization failed");
    }
    return spec;
}

double unstable_pole_product_bound(const RationalTransfer& gyu) {
    double prod = 1.0;
    for (const Complex& p : poles(reduce(gyu))) {
        const double mag = std::abs(p);
        if (mag > 1.0) prod *= mag * mag;
    }
    return prod - 1.0;
}

double min_snr_for_stabilization(const GeneralizedPlant& plant, const RationalTransfer& h,
                                 int fir_order, int n_grid) {
    const CoprimeFactors factors = coprime_factorize(plant);
    const FrequencyGrid grid = FrequencyGrid::uniform(n_grid);
    const RationalTransfer hn = normalize_channel_factor(h);
    const ProgramData data = build_program_data(plant, factors, hn, grid, 1.0, 0);
    return minimum_power_fir(data, fir_order).min_power;
}

namespace {

// ||K S^2 H Gzu Gyv||_1 on the grid through the nuclear-norm reduction
// tr sqrt(X* X) = g |K S^2 H| for the rank-one matrix X.
double l1_weighted(const GeneralizedPlant& plant, const RationalTransfer& ks2h,
                   const FrequencyGrid& grid) {
    double acc = 0.0;
    for (int k = 0; k < grid.n; ++k) {
        const double w = grid.omegas[k];
        acc += gzu_magnitude(plant, w) * gyv_magnitude(plant, w) *
               std::abs(eval_freq(ks2h, w));
    }
    return acc / grid.n;
}

struct EncoderFit {
    RationalTransfer c;
    double residual = 0.0;
    bool degraded = false;
};

// Fits |C|^2 to target samples, spectral-factors, and scales the static
// gain so the SNR constraint is active: ||C S G_yv||_2^2 = alpha on the grid.
// The target is floored at 1e-6 of its peak before fitting: |K| may vanish
// on the circle, and an encoder magnitude hugging zero there puts C's
// zeros so close to the unit circle that the downstream rational
// arithmetic cannot resolve them.
EncoderFit fit_encoder(const ColVec& target, const GeneralizedPlant& plant,
                       const RationalTransfer& s, double alpha, const FrequencyGrid& grid,
                       int spectral_order) {
    EncoderFit out;
    const ColVec floored = target.cwiseMax(1e-6 * target.maxCoeff());
    const MagnitudeFit fit = fit_magnitude_sq(floored, grid, spectral_order);
    out.residual = fit.relative_rms_residual;
    out.degraded = fit.relative_rms_residual > 0.05;
    // Coefficients below 1e-8 of the peak add factor degree without moving
    // the cost; dropping them keeps the downstream rational arithmetic
    // within its conditioning budget.
    TrigPolynomial spectrum = fit.fit;
    const double coeff_scale = spectrum.coeffs.cwiseAbs().maxCoeff();
    for (int k = 1; k < spectrum.coeffs.size(); ++k) {
        if (std::abs(spectrum.coeffs[k]) <= 1e-8 * coeff_scale) spectrum.coeffs[k] = 0.0;
    }
    const double mn = spectrum.min_on_grid();
    const double mx = spectrum.max_on_grid();
    if (mn < 1e-9 * mx) spectrum.coeffs[0] += 1e-9 * mx - mn;
    const ColVec taps = spectral_factor_trig(spectrum);
    double activity = 0.0;
    for (int k = 0; k < grid.n; ++k) {
        const double w = grid.omegas[k];
        const double gyv = gyv_magnitude(plant, w);
        activity += fir_magnitude_sq(taps, w) * std::norm(eval_freq(s, w)) * gyv * gyv;
    }
    activity /= grid.n;
    const double gain = std::sqrt(alpha / activity);
    out.c = fir_to_rational(ColVec(gain * taps));
    return out;
}

bool numerically_zero(const RationalTransfer& tf) {
    if (tf.num.is_zero()) return true;
    const double den_scale = std::max(1.0, tf.den.coeffs.cwiseAbs().maxCoeff());
    return tf.num.coeffs.cwiseAbs().maxCoeff() <= 1e-10 * den_scale;
}

}  // namespace

NominalFactorization factorize_nominal_k(const RationalTransfer& k,
                                         const GeneralizedPlant& plant,
                                         const ChannelSpec& channel,
                                         const FrequencyGrid& grid, int spectral_order) {
    const RationalTransfer kr = reduce(k);
    NominalFactorization out;

    const RationalTransfer loop_den = constant_tf(1.0) - kr * plant.g_yu;
    if (loop_den.num.is_zero()) throw DegenerateLoop("1 - K G_yu is identically zero");
    const RationalTransfer s = inverse(loop_den);
    const RationalTransfer ks = kr * s;
    const RationalTransfer gyus = plant.g_yu * s;
    const RationalTransfer kgyus = kr * gyus;
    for (const RationalTransfer* tf : {&s, &ks, &gyus, &kgyus}) {
        if (!tf->is_zero() && !(is_proper(*tf) && is_schur_stable(*tf))) {
            throw Unstable("K does not stabilize the classical loop");
        }
    }

    out.alpha = channel.snr - (kgyus.is_zero() ? 0.0 : h2_norm_sq(kgyus * channel.h));
    if (out.alpha <= 0.0) {
        throw AlphaNonpositive("the SNR cannot support this K: alpha = " +
                               std::to_string(out.alpha));
    }

    if (kr.is_zero()) {
        out.d = constant_tf(0.0);
        double s_gyv_sq = 0.0;
        for (const RationalTransfer& gyv : plant.g_yv) s_gyv_sq += h2_norm_sq(s * gyv);
        out.c = constant_tf(0.5 * std::sqrt(out.alpha / s_gyv_sq));
        out.bound = 0.0;
        out.achieved = 0.0;
        return out;
    }

    const RationalTransfer ks2h = ks * s * channel.h;
    const double l1 = l1_weighted(plant, ks2h, grid);
    out.bound = l1 * l1 / out.alpha;

    ColVec target(grid.n);
    for (int idx = 0; idx < grid.n; ++idx) {
        const double w = grid.omegas[idx];
        const double ratio = gzu_magnitude(plant, w) / gyv_magnitude(plant, w);
        target[idx] = out.alpha / l1 * ratio *
                      std::abs(eval_freq(kr, w) * eval_freq(channel.h, w));
    }
    const EncoderFit enc = fit_encoder(target, plant, s, out.alpha, grid, spectral_order);
    out.c = enc.c;
    out.fit_residual = enc.residual;
    out.d = kr / out.c;

    const RationalTransfer dsh = (kr / out.c) * s * channel.h;
    double achieved = 0.0;
    for (int idx = 0; idx < grid.n; ++idx) {
        const double w = grid.omegas[idx];
        const double gzu = gzu_magnitude(plant, w);
        achieved += std::norm(eval_freq(dsh, w)) * gzu * gzu;
    }
    out.achieved = achieved / grid.n;
    return out;
}

SynthesisResult synthesize(const GeneralizedPlant& plant, const ChannelSpec& channel,
                           const SynthesisOptions& opts) {
    check_plant_assumptions(plant);
    const CoprimeFactors factors = coprime_factorize(plant);
    const FrequencyGrid grid = FrequencyGrid::uniform(opts.n_grid);
    const ProgramData data = build_program_data(plant, factors, channel.h, grid,
                                                channel.snr, opts.snr_offset);

    SynthesisResult result;
    result.stabilizability.pole_product_lower_bound = unstable_pole_product_bound(plant.g_yu);
    result.stabilizability.threshold_estimate =
        minimum_power_fir(data, opts.fir_order).min_power;

    const DiscreteProgram prog = assemble(data, opts.fir_order);
    const MinimizeResult sol = minimize(prog, opts.tol, opts.max_iter);
    result.solver_report = sol.report;
    if (sol.report.status == SolveStatus::Infeasible) {
        std::ostringstream msg;
        msg << "no FIR Q of order " << opts.fir_order << " certifies snr " << channel.snr
            << "; least-squares threshold estimate " << result.stabilizability.threshold_estimate;
        throw Infeasible(msg.str());
    }
    result.q = sol.q;
    result.gamma = sol.gamma;

    YoulaController yc = k_from_q(factors, sol.q);
    result.q_hat = sol.q;
    if (yc.roots_near_circle) {
        const double eps = 1e-6 * (1.0 + std::abs(sol.gamma));
        result.q_hat = perturb_q(factors, data, sol.q, eps);
        yc = k_from_q(factors, result.q_hat);
    }
    result.k = yc.k;

    const RationalTransfer qhr = result.q_hat.to_rational();
    const RationalTransfer mq_u = factors.m * qhr - factors.u;
    const RationalTransfer nq_v = factors.n * qhr + factors.v;

    YoulaLoopData youla{factors, result.q_hat};
    if (numerically_zero(mq_u)) {
        result.c = constant_tf(0.0);
        result.d = constant_tf(0.0);
        result.k = constant_tf(0.0);
    } else {
        const RationalTransfer khgyus = factors.n * mq_u * channel.h;
        const double alpha = channel.snr - h2_norm_sq(khgyus);
        if (alpha <= 0.0) {
            throw Infeasible("optimal Q leaves no SNR slack for the encoder (alpha <= 0)");
        }
        const RationalTransfer ks2h =
            factors.m * factors.m * mq_u * nq_v * channel.h;
        const double l1 = l1_weighted(plant, ks2h, grid);

        ColVec target(grid.n);
        for (int idx = 0; idx < grid.n; ++idx) {
            const double w = grid.omegas[idx];
            const double ratio = gzu_magnitude(plant, w) / gyv_magnitude(plant, w);
            const double k_abs =
                std::abs(eval_freq(mq_u, w)) / std::abs(eval_freq(nq_v, w));
            target[idx] = alpha / l1 * ratio * k_abs * std::abs(eval_freq(channel.h, w));
        }
        const RationalTransfer s = factors.m * nq_v;
        const EncoderFit enc = fit_encoder(target, plant, s, alpha, grid, opts.spectral_order);
        result.c = enc.c;
        result.spectral_fit_residual = enc.residual;
        result.degraded_fit = enc.degraded;
        result.d = reduce((mq_u / nq_v) / result.c);
    }

    const ClosedLoop loop = closed_loop(plant, result.c, result.d, channel.h, &youla);
    const StabilityReport stab = check_internal_stability(loop);
    if (!stab.stable) {
        std::ostringstream msg;
        msg << "closed loop failed the internal stability check; entries:";
        for (int i = 0; i < 9; ++i) msg << ' ' << (stab.entry_stable[i] ? '1' : '0');
        throw InternalStabilityFailed(msg.str());
    }
    result.cost_detail = analytic_cost(loop);
    result.j_analytic = result.cost_detail.j;
    result.channel_power = result.cost_detail.channel_power;
    return result;
}

}  // namespace snrctl
