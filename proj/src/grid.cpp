#include "snrctl/grid.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace snrctl {

FrequencyGrid FrequencyGrid::uniform(int n) {
    if (n < 2) throw std::invalid_argument("frequency grid needs n >= 2");
    FrequencyGrid g;
    g.n = n;
    g.omegas = ColVec::LinSpaced(n, 0.0, 2.0 * M_PI * (n - 1) / n);
    return g;
}

GridSamples sample_on_grid(const RationalTransfer& tf, const FrequencyGrid& grid) {
    GridSamples s;
    s.grid = grid;
    s.values.resize(grid.n);
    for (int k = 0; k < grid.n; ++k) s.values[k] = eval_freq(tf, grid.omegas[k]);
    return s;
}

double l2_norm_sq_grid(const GridSamples& s) {
    return s.values.squaredNorm() / static_cast<double>(s.grid.n);
}

double l1_norm_grid(const GridSamples& s) {
    return s.values.cwiseAbs().sum() / static_cast<double>(s.grid.n);
}

double l1_norm_grid(const std::vector<ComplexMatrix>& samples) {
    double acc = 0.0;
    for (const ComplexMatrix& x : samples) {
        Eigen::JacobiSVD<ComplexMatrix> svd(x);
        acc += svd.singularValues().sum();
    }
    return acc / static_cast<double>(samples.size());
}

}  // namespace snrctl
