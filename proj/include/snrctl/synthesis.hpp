#ifndef SNRCTL_SYNTHESIS_HPP
#define SNRCTL_SYNTHESIS_HPP

#include "snrctl/loop.hpp"
#include "snrctl/plant.hpp"
#include "snrctl/program.hpp"
#include "snrctl/solver.hpp"

namespace snrctl {

/// Normalized channel description: stable spectral factor with unit H2
/// norm and SNR bound sigma^2.
struct ChannelSpec {
    RationalTransfer h;
    double snr = 0.0;
};

// Normalizes the factor and validates stability / circle zeros / snr > 0.
ChannelSpec make_channel(const RationalTransfer& h_raw, double snr);

struct StabilizabilityInfo {
    double threshold_estimate = 0.0;        // min_q ||(MNQ+MV-1)H||_2^2 over FIR q
    double pole_product_lower_bound = 0.0;  // prod max(1,|p|)^2 - 1
};

struct SynthesisOptions {
    int n_grid = 629;
    int fir_order = 20;
    int spectral_order = 32;  // cosine-basis order Nc for |C|^2
    double tol = 1e-8;
    int max_iter = 500;
    int snr_offset = 0;
};

struct SynthesisResult {
    FirParameter q;
    FirParameter q_hat;
    RationalTransfer k, c, d;
    double gamma = 0.0;
    double j_analytic = 0.0;
    double channel_power = 0.0;
    double spectral_fit_residual = 0.0;
    bool degraded_fit = false;
    SolverReport solver_report;
    StabilizabilityInfo stabilizability;
    AnalyticCost cost_detail;
};

// End-to-end pipeline: coprime factorization, convex minimization in the
// FIR Youla parameter, perturbation off the circle, spectral factorization
// of the optimal |C|^2, D = K C^{-1}, and closed-loop validation.
SynthesisResult synthesize(const GeneralizedPlant& plant, const ChannelSpec& channel,
                           const SynthesisOptions& opts);

struct NominalFactorization {
    RationalTransfer c, d;
    double alpha = 0.0;
    double bound = 0.0;     // (1/alpha) ||K S^2 H Gzu Gyv||_1^2
    double achieved = 0.0;  // ||D S H Gzu||_2^2 on the grid
    double fit_residual = 0.0;
};

// Optimal encoder/decoder split of a given stabilizing K.
NominalFactorization factorize_nominal_k(const RationalTransfer& k,
                                         const GeneralizedPlant& plant,
                                         const ChannelSpec& channel,
                                         const FrequencyGrid& grid, int spectral_order);

// Least-squares estimate of the minimum SNR for stabilization by an LTI
// controller (upper bound on the infimum, decreasing in fir_order).
double min_snr_for_stabilization(const GeneralizedPlant& plant, const RationalTransfer& h,
                                 int fir_order, int n_grid);

// prod_i max(1, |pole_i|)^2 - 1 for G_yu.
double unstable_pole_product_bound(const RationalTransfer& gyu);

}  // namespace snrctl

#endif
