#ifndef LAPFIT_SOLVER_HPP
#define LAPFIT_SOLVER_HPP

#include "lapfit/graph.hpp"
#include "lapfit/objective.hpp"

#include <Eigen/Dense>
#include <optional>

namespace lapfit {

struct SolverConfig {
    int max_iters = 50000;
    double grad_tol = 1e-9;        // infinity norm of the projected gradient
    double step_init = 1.0;
    double backtrack_factor = 0.5; // in (0,1)
    double armijo_c = 1e-4;        // in (0,1)
    double u_floor = 1e-12;        // feasibility floor; keeps logdet defined

    void validate() const;
};

struct SolveResult {
    Eigen::VectorXd u;      // floored entries reported as exact zeros
    double J;               // objective at the returned u
    int iterations;
    bool converged;
    double grad_inf_norm;   // projected-gradient infinity norm at exit
};

/// Projected descent on u in [u_floor, inf)^m minimizing
/// J(u) = -logdet(L(u) + 11^T/n) + trace(L(u) K). Each step takes the
/// projected-Newton direction on the free set (the Hessian comes for free
/// from the same factorization as the gradient, and is exactly diagonal on
/// trees) with Armijo backtracking. J is non-increasing across accepted
/// steps. Deterministic given (K, topology, config, u0).
///
/// u0 defaults to the closed-form values 1/(xi_j^T K xi_j): already optimal
/// on trees and a strong warm start on cyclic graphs.
SolveResult solve_cgl(const RegularizedCovariance& K, const GraphTopology& topology,
                      const SolverConfig& config = {},
                      const std::optional<Eigen::VectorXd>& u0 = std::nullopt);

} // namespace lapfit

#endif
