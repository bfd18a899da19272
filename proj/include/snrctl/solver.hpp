#ifndef SNRCTL_SOLVER_HPP
#define SNRCTL_SOLVER_HPP

#include "snrctl/program.hpp"

namespace snrctl {

/// Discretized program: per-point affine maps q -> h_k(q) = m2_k Q(w_k) + b_k
/// and q -> w_k(q) = E_k Q(w_k) + F_k stored as complex coefficient rows.
struct DiscreteProgram {
    ProgramData data;
    int fir_order = 0;
    ComplexMatrix h_rows;  // n x m, row k scaled by m2_k
    ComplexMatrix w_rows;  // n x m, row k scaled by E_k
};

DiscreteProgram assemble(const ProgramData& data, int fir_order);

enum class SolveStatus { Optimal, Infeasible, MaxIter };

struct SolverReport {
    int iterations = 0;
    double final_gradient_norm = 0.0;
    double barrier_parameter = 0.0;
    double lmi_min_eigenvalue = 0.0;
    double power_slack = 0.0;
    SolveStatus status = SolveStatus::MaxIter;
};

struct MinimizeResult {
    FirParameter q;
    double gamma = 0.0;
    SolverReport report;
};

// Reduced smooth objective: a_k and e_k eliminated at their tight values,
// moduli smoothed as sqrt(|x|^2 + tau^2), log-barrier weight mu on the
// strict power slack. Returns +inf outside the feasible region.
double reduced_objective(const DiscreteProgram& prog, const ColVec& q, double tau,
                         double mu, ColVec* grad = nullptr, Matrix* hess = nullptr);

// Damped BFGS with smoothing/barrier continuation. max_iter bounds the
// inner iterations of each continuation stage.
MinimizeResult minimize(const DiscreteProgram& prog, double tol, int max_iter = 500);

// Minimum eigenvalue of the (n+2) x (n+2) arrow LMI at the tight a, e
// values, computed through the rank-2 reduction.
double verify_lmi(const DiscreteProgram& prog, const FirParameter& q, double gamma);

// Dense-eigensolver reference for small n (test cross-check).
double verify_lmi_dense(const DiscreteProgram& prog, const FirParameter& q, double gamma);

// Exact least-squares minimizer of the channel power over FIR q.
struct PowerLeastSquares {
    FirParameter q;
    double min_power = 0.0;
};
PowerLeastSquares minimum_power_fir(const ProgramData& data, int fir_order);

}  // namespace snrctl

#endif
