#ifndef SNRCTL_GRID_HPP
#define SNRCTL_GRID_HPP

#include <vector>

#include "snrctl/rational.hpp"
#include "snrctl/types.hpp"

namespace snrctl {

/// Uniform frequency grid w_k = 2*pi*k/n, k = 0..n-1.
struct FrequencyGrid {
    int n = 0;
    ColVec omegas;

    static FrequencyGrid uniform(int n);
};

struct GridSamples {
    FrequencyGrid grid;
    ComplexVec values;
};

GridSamples sample_on_grid(const RationalTransfer& tf, const FrequencyGrid& grid);

// Rectangle-rule quadrature (1/n) sum |s_k|^2 and (1/n) sum |s_k|.
double l2_norm_sq_grid(const GridSamples& s);
double l1_norm_grid(const GridSamples& s);

// Matrix-valued L1: (1/n) sum of nuclear norms tr sqrt(X* X).
double l1_norm_grid(const std::vector<ComplexMatrix>& samples);

}  // namespace snrctl

#endif
