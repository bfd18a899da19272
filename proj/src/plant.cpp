#include "snrctl/plant.hpp"

#include <cmath>

#include "snrctl/errors.hpp"
#include "snrctl/grid.hpp"
#include "snrctl/norms.hpp"

namespace snrctl {

ComplexMatrix RationalMatrix::eval(double omega) const {
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = eval_freq((*this)(i, j), omega);
    }
    return m;
}

double h2_norm_sq(const RationalMatrix& m) {
    double acc = 0.0;
    for (const RationalTransfer& tf : m.entries) acc += h2_norm_sq(tf);
    return acc;
}

GeneralizedPlant blocks_from_state_space(const StateSpaceModel& ss, int n_v, int n_z) {
    if (n_v < 1 || n_z < 1) throw DimensionMismatch("n_v and n_z must be >= 1");
    if (ss.inputs() != n_v + 1 || ss.outputs() != n_z + 1) {
        throw DimensionMismatch("realization must have n_v+1 inputs and n_z+1 outputs");
    }
    if (ss.D(n_z, n_v) != 0.0) throw NonzeroD22("D22 must be zero (G_yu strictly proper)");

    GeneralizedPlant plant;
    plant.realization = ss;
    plant.n_v = n_v;
    plant.n_z = n_z;
    plant.g_zv = RationalMatrix(n_z, n_v);
    plant.g_zu.resize(n_z);
    plant.g_yv.resize(n_v);
    for (int i = 0; i < n_z; ++i) {
        for (int j = 0; j < n_v; ++j) plant.g_zv(i, j) = transfer_entry(ss, i, j);
        plant.g_zu[i] = transfer_entry(ss, i, n_v);
    }
    for (int j = 0; j < n_v; ++j) plant.g_yv[j] = transfer_entry(ss, n_z, j);
    plant.g_yu = transfer_entry(ss, n_z, n_v);

    plant.stabilizable = is_stabilizable(ss.A, ss.B.col(n_v));
    plant.detectable = is_detectable(ss.A, ss.C.row(n_z));
    return plant;
}

GeneralizedPlant siso_plant(const RationalTransfer& p) {
    const RationalTransfer pr = reduce(p);
    if (!is_strictly_proper(pr)) {
        throw NonzeroD22("siso_plant: P must be strictly proper (P = G_yu)");
    }
    GeneralizedPlant plant;
    plant.n_v = 1;
    plant.n_z = 1;
    plant.g_zv = RationalMatrix(1, 1);
    plant.g_zv(0, 0) = pr;
    plant.g_zu = {pr};
    plant.g_yv = {pr};
    plant.g_yu = pr;
    // Shared-state realization: x+ = Ax + B(v + u), z = y = Cx.
    StateSpaceModel sp = realize_siso(pr);
    const int n = sp.states();
    Matrix b(n, 2), c(2, n);
    b << sp.B, sp.B;
    c << sp.C, sp.C;
    plant.realization = StateSpaceModel(sp.A, b, c, Matrix::Zero(2, 2));
    plant.stabilizable = is_stabilizable(sp.A, sp.B);
    plant.detectable = is_detectable(sp.A, sp.C);
    return plant;
}

double gzu_magnitude(const GeneralizedPlant& plant, double omega) {
    double acc = 0.0;
    for (const RationalTransfer& tf : plant.g_zu) acc += std::norm(eval_freq(tf, omega));
    return std::sqrt(acc);
}

double gyv_magnitude(const GeneralizedPlant& plant, double omega) {
    double acc = 0.0;
    for (const RationalTransfer& tf : plant.g_yv) acc += std::norm(eval_freq(tf, omega));
    return std::sqrt(acc);
}

void check_plant_assumptions(const GeneralizedPlant& plant, int grid_n) {
    if (!is_strictly_proper(plant.g_yu)) {
        throw NonzeroD22("G_yu must be strictly proper");
    }
    if (!plant.stabilizable) throw NotStabilizable("(A, B2) is not stabilizable");
    if (!plant.detectable) throw NotDetectable("(C2, A) is not detectable");
    const FrequencyGrid grid = FrequencyGrid::uniform(grid_n);
    double min_zu = 1e300, max_zu = 0.0, min_yv = 1e300, max_yv = 0.0;
    for (int k = 0; k < grid.n; ++k) {
        const double zu = gzu_magnitude(plant, grid.omegas[k]);
        const double yv = gyv_magnitude(plant, grid.omegas[k]);
        min_zu = std::min(min_zu, zu);
        max_zu = std::max(max_zu, zu);
        min_yv = std::min(min_yv, yv);
        max_yv = std::max(max_yv, yv);
    }
    if (min_zu <= 1e-7 * std::max(1.0, max_zu)) {
        throw ZeroOnCircle("G_zu* G_zu vanishes on the evaluation grid");
    }
    if (min_yv <= 1e-7 * std::max(1.0, max_yv)) {
        throw ZeroOnCircle("G_yv G_yv* vanishes on the evaluation grid");
    }
}

}  // namespace snrctl
