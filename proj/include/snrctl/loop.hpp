#ifndef SNRCTL_LOOP_HPP
#define SNRCTL_LOOP_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "snrctl/coprime.hpp"
#include "snrctl/plant.hpp"
#include "snrctl/program.hpp"
#include "snrctl/rational.hpp"

namespace snrctl {

/// Closed-loop transfer data for the encoder/decoder architecture:
/// t_map is the 3x3 stability map from (w1, w2, n) to (y, t, u);
/// z and t maps are the performance channels from (v, n-source).
struct ClosedLoop {
    RationalTransfer k;  // D C
    RationalTransfer s;  // 1 / (1 - K G_yu)
    RationalMatrix t_map;
    RationalMatrix z_from_v;                 // G_zv + K G_zu G_yv S
    std::vector<RationalTransfer> z_from_n;  // D H G_zu S
    std::vector<RationalTransfer> t_from_v;  // C G_yv S
    RationalTransfer t_from_n;               // K H G_yu S
    RationalTransfer h;
    int n_z = 0;
    int n_v = 0;
};

/// Youla data for cancellation-free loop assembly: S = M (N Q + V).
struct YoulaLoopData {
    CoprimeFactors factors;
    FirParameter q_hat;
};

ClosedLoop closed_loop(const GeneralizedPlant& plant, const RationalTransfer& c,
                       const RationalTransfer& d, const RationalTransfer& h,
                       const YoulaLoopData* youla = nullptr);

struct StabilityReport {
    bool stable = false;
    std::array<bool, 9> entry_stable{};
};
StabilityReport check_internal_stability(const ClosedLoop& loop);

struct AnalyticCost {
    double j = 0.0;
    double channel_power = 0.0;
    double grid_cross_check = 0.0;  // relative gramian-vs-quadrature gap
};
AnalyticCost analytic_cost(const ClosedLoop& loop);

struct SimulationEstimate {
    double z_variance = 0.0;
    double t_power = 0.0;
    long steps = 0;
    std::uint64_t seed = 0;
    double z_halfwidth = 0.0;  // 3-sigma batch-means
    double t_halfwidth = 0.0;
};

enum class NoiseKind { Gaussian, Uniform };

SimulationEstimate simulate(const ClosedLoop& loop, long steps, std::uint64_t seed,
                            NoiseKind noise = NoiseKind::Gaussian);

}  // namespace snrctl

#endif
