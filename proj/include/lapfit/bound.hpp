#ifndef LAPFIT_BOUND_HPP
#define LAPFIT_BOUND_HPP

#include "lapfit/graph.hpp"
#include "lapfit/objective.hpp"

#include <Eigen/Dense>
#include <vector>

namespace lapfit {

/// Suboptimality certificate for the closed-form weights applied to a cyclic
/// topology. Invariant: 0 <= gap <= bound_tight <= bound_loose (up to solver
/// tolerance), with all three exactly zero on acyclic topologies.
struct BoundReport {
    double J_cf;                 // objective at the closed-form Laplacian
    double J_star;               // objective at the oracle optimum
    double gap;                  // J_cf - J_star
    std::vector<int> tree_edges; // indices of the positive spanning tree, n-1 of them
    Eigen::VectorXd ratios;      // r_j = u*_j / u_j where u*_j > 0, else 1
    double beta;                 // min over all m ratios
    double bound_tight;          // trace_term + sum_Q log r_j - (m-n+1) log beta
    double bound_loose;          // trace_term + (m-n+1) log(max r / min r)
    double trace_term;           // sum over non-tree edges of (1 - u*_j/u_j)
};

/// Weights at or below this threshold are classified as zero (inactive); the
/// oracle returns floored, not exactly zero, weights.
inline constexpr double kTauPos = 1e-9;

/// Maximum-weight spanning tree (Kruskal, ties broken by edge index)
/// restricted to edges with u_star_j > tau_pos. Throws NoPositiveSpanningTree
/// when those edges do not span all vertices, which signals oracle
/// non-convergence.
std::vector<int> select_positive_spanning_tree(const GraphTopology& topology,
                                               const Eigen::VectorXd& u_star,
                                               double tau_pos = kTauPos);

/// All Theorem-level quantities for closed-form weights u_cf (strictly
/// positive, from the per-edge closed form on the full topology) against the
/// oracle solution u_star.
BoundReport compute_bound(const Eigen::VectorXd& u_cf, const Eigen::VectorXd& u_star,
                          const GraphTopology& topology, const RegularizedCovariance& K);

} // namespace lapfit

#endif
