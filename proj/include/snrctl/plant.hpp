#ifndef SNRCTL_PLANT_HPP
#define SNRCTL_PLANT_HPP

#include <vector>

#include "snrctl/rational.hpp"
#include "snrctl/state_space.hpp"
#include "snrctl/types.hpp"

namespace snrctl {

/// Dense matrix of scalar rational transfer functions.
struct RationalMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<RationalTransfer> entries;

    RationalMatrix() = default;
    RationalMatrix(int r, int c) : rows(r), cols(c), entries(r * c) {}

    RationalTransfer& operator()(int i, int j) { return entries[i * cols + j]; }
    const RationalTransfer& operator()(int i, int j) const { return entries[i * cols + j]; }

    ComplexMatrix eval(double omega) const;
};

// Sum of squared entry-wise H2 norms (= squared H2 norm of the matrix).
double h2_norm_sq(const RationalMatrix& m);

/// Four-block plant G = [[G_zv, G_zu], [G_yv, G_yu]] with scalar u, y
/// channels and vector-valued v (n_v) and z (n_z).
struct GeneralizedPlant {
    StateSpaceModel realization;
    int n_v = 0;
    int n_z = 0;
    RationalMatrix g_zv;                  // n_z x n_v
    std::vector<RationalTransfer> g_zu;   // n_z x 1
    std::vector<RationalTransfer> g_yv;   // 1 x n_v
    RationalTransfer g_yu;                // scalar, strictly proper
    bool stabilizable = false;
    bool detectable = false;
};

// Partitions a realization with input split (n_v, 1) and output split
// (n_z, 1) into the four transfer blocks. D22 must be zero.
GeneralizedPlant blocks_from_state_space(const StateSpaceModel& ss, int n_v, int n_z);

// SISO convenience plant: all four blocks equal P.
GeneralizedPlant siso_plant(const RationalTransfer& p);

// sqrt(G_zu^* G_zu) and sqrt(G_yv G_yv^*) at omega; both must be positive
// on the evaluation grid per the standing plant assumptions.
double gzu_magnitude(const GeneralizedPlant& plant, double omega);
double gyv_magnitude(const GeneralizedPlant& plant, double omega);

// Checks strict properness of G_yu, stabilizability/detectability, and
// positivity of the weighting magnitudes on a dense grid. Throws on failure.
void check_plant_assumptions(const GeneralizedPlant& plant, int grid_n = 512);

}  // namespace snrctl

#endif
