#include "lapfit/objective.hpp"

#include "lapfit/errors.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

namespace lapfit {

SampleSet::SampleSet(Eigen::MatrixXd samples) : samples_(std::move(samples)) {
    if (samples_.cols() < 1) throw Error("sample set must contain at least one sample");
    if (samples_.rows() < 1) throw Error("signal length must be >= 1");
    if (!samples_.allFinite()) throw Error("sample set contains non-finite values");
}

Eigen::MatrixXd SampleSet::second_moment() const {
    return (samples_ * samples_.transpose()) / static_cast<double>(count());
}

RegularizedCovariance::RegularizedCovariance(Eigen::MatrixXd k, double alpha)
    : k_(std::move(k)), alpha_(alpha) {
    if (k_.rows() != k_.cols()) throw DimensionMismatch("K must be square");
    if (alpha_ < 0.0) throw Error("alpha must be nonnegative");
}

Eigen::VectorXd RegularizedCovariance::edge_quadratics(const GraphTopology& topology) const {
    Eigen::VectorXd q(topology.num_edges());
    for (int j = 0; j < topology.num_edges(); ++j) q[j] = edge_quadratic(topology.edge(j));
    return q;
}

RegularizedCovariance build_K(const SampleSet& samples, double alpha) {
    const int n = samples.signal_length();
    Eigen::MatrixXd k = samples.second_moment();
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) k(i, j) += (i == j ? 0.0 : -alpha) + inv_n;
    return RegularizedCovariance(std::move(k), alpha);
}

namespace detail {

std::optional<double> logdet_spd(const Eigen::MatrixXd& mat) {
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(mat);
    if (ldlt.info() != Eigen::Success) return std::nullopt;
    const Eigen::VectorXd d = ldlt.vectorD();
    const double threshold = 1e-12 * mat.trace();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(d[i] > threshold)) return std::nullopt;
        logdet += std::log(d[i]);
    }
    return logdet;
}

Eigen::MatrixXd shifted_laplacian(const WeightedLaplacian& lap) {
    const double inv_n = 1.0 / static_cast<double>(lap.topology.num_vertices());
    Eigen::MatrixXd mat = lap.matrix();
    mat.array() += inv_n;
    return mat;
}

double trace_LK(const WeightedLaplacian& lap, const RegularizedCovariance& K) {
    if (K.dim() != lap.topology.num_vertices())
        throw DimensionMismatch("K dimension does not match topology");
    double tr = 0.0;
    for (int j = 0; j < lap.topology.num_edges(); ++j)
        tr += lap.u[j] * K.edge_quadratic(lap.topology.edge(j));
    for (Eigen::Index k = 0; k < lap.v.size(); ++k) {
        const int node = lap.topology.self_loops()[static_cast<std::size_t>(k)];
        tr += lap.v[k] * K.matrix()(node, node);
    }
    return tr;
}

} // namespace detail

double objective_J(const WeightedLaplacian& lap, const RegularizedCovariance& K) {
    const auto logdet = detail::logdet_spd(detail::shifted_laplacian(lap));
    if (!logdet)
        throw NotPositiveDefinite("L + 11^T/n is not positive definite "
                                  "(disconnected graph or nonpositive weights)");
    return -*logdet + detail::trace_LK(lap, K);
}

Eigen::VectorXd gradient_J(const WeightedLaplacian& lap, const RegularizedCovariance& K) {
    const int n = lap.topology.num_vertices();
    const int m = lap.topology.num_edges();
    const Eigen::MatrixXd mat = detail::shifted_laplacian(lap);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(mat);
    const Eigen::VectorXd d = ldlt.vectorD();
    const double threshold = 1e-12 * mat.trace();
    if (ldlt.info() != Eigen::Success || (d.array() <= threshold).any())
        throw NotPositiveDefinite("L + 11^T/n is not positive definite");

    const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd grad(m);
    for (int j = 0; j < m; ++j) {
        const auto& [s, t] = lap.topology.edge(j);
        const double quad = inv(s, s) + inv(t, t) - 2.0 * inv(s, t);
        grad[j] = -quad + K.edge_quadratic(lap.topology.edge(j));
    }
    return grad;
}

double ggl_objective_J(const WeightedLaplacian& lap, const RegularizedCovariance& K) {
    const auto logdet = detail::logdet_spd(lap.matrix());
    if (!logdet) throw NotPositiveDefinite("generalized Laplacian is not positive definite");
    return -*logdet + detail::trace_LK(lap, K);
}

} // namespace lapfit
