#ifndef LAPFIT_OBJECTIVE_HPP
#define LAPFIT_OBJECTIVE_HPP

#include "lapfit/graph.hpp"

#include <Eigen/Dense>
#include <optional>

namespace lapfit {

/// N signals of length n, stored as the columns of an n x N matrix.
class SampleSet {
public:
    explicit SampleSet(Eigen::MatrixXd samples);

    int signal_length() const { return static_cast<int>(samples_.rows()); }
    int count() const { return static_cast<int>(samples_.cols()); }
    const Eigen::MatrixXd& matrix() const { return samples_; }

    /// Empirical second moment S = X X^T / N (no mean subtraction: the model
    /// is a zero-mean GMRF).
    Eigen::MatrixXd second_moment() const;

private:
    Eigen::MatrixXd samples_;
};

/// K = S + alpha (I - 11^T) + 11^T / n. Absorbs the off-diagonal l1 penalty
/// and the rank-1 shim that makes the log-determinant well defined.
class RegularizedCovariance {
public:
    RegularizedCovariance(Eigen::MatrixXd k, double alpha);

    const Eigen::MatrixXd& matrix() const { return k_; }
    double alpha() const { return alpha_; }
    int dim() const { return static_cast<int>(k_.rows()); }

    /// xi_j^T K xi_j = K_ss + K_tt - 2 K_st for edge j = (s, t).
    double edge_quadratic(const Edge& e) const {
        return k_(e.first, e.first) + k_(e.second, e.second) - 2.0 * k_(e.first, e.second);
    }

    /// All m edge quadratic forms of a topology, in edge order.
    Eigen::VectorXd edge_quadratics(const GraphTopology& topology) const;

private:
    Eigen::MatrixXd k_;
    double alpha_;
};

RegularizedCovariance build_K(const SampleSet& samples, double alpha);

/// -logdet(L + 11^T/n) + trace(L K) for a combinatorial Laplacian.
/// Throws NotPositiveDefinite when a pivot of the shifted Laplacian falls
/// below 1e-12 * trace (disconnected graph or nonpositive weights).
double objective_J(const WeightedLaplacian& lap, const RegularizedCovariance& K);

/// Derivative of objective_J with respect to each edge weight:
/// grad_j = -xi_j^T (L + 11^T/n)^{-1} xi_j + xi_j^T K xi_j.
Eigen::VectorXd gradient_J(const WeightedLaplacian& lap, const RegularizedCovariance& K);

/// Objective for generalized Laplacians with self-loops: -logdet(L) + trace(L K).
/// The self-loop makes L itself positive definite, so no rank-1 shim is used.
double ggl_objective_J(const WeightedLaplacian& lap, const RegularizedCovariance& K);

namespace detail {

/// logdet of a symmetric positive definite matrix via LDLT, or nullopt when
/// any pivot is below 1e-12 * trace.
std::optional<double> logdet_spd(const Eigen::MatrixXd& mat);

/// The n x n matrix L + 11^T/n.
Eigen::MatrixXd shifted_laplacian(const WeightedLaplacian& lap);

/// trace(L K) expanded as sum_j u_j xi_j^T K xi_j + sum_k v_k K_kk.
double trace_LK(const WeightedLaplacian& lap, const RegularizedCovariance& K);

} // namespace detail

} // namespace lapfit

#endif
