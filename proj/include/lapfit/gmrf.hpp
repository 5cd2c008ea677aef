#ifndef LAPFIT_GMRF_HPP
#define LAPFIT_GMRF_HPP

#include "lapfit/graph.hpp"
#include "lapfit/objective.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace lapfit {

/// Eigendecomposition of a Laplacian, eigenvalues ascending.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors; // orthonormal columns

    static SpectralDecomposition of(const Eigen::MatrixXd& laplacian);
};

/// Draws N zero-mean Gaussian signals with covariance L^+ (pseudo-inverse):
/// x = sum_{k>=2} lambda_k^{-1/2} z_k u_k. The null-space mode is excluded,
/// so every sample is orthogonal to the all-ones vector.
/// Throws NotConnected.
SampleSet sample_gmrf(const WeightedLaplacian& lap, int count, std::uint64_t seed);

struct RandomGraph {
    GraphTopology topology;
    Eigen::VectorXd weights; // ground truth, U(0,1) redrawn above 1e-6
};

/// Uniform random spanning tree (random Pruefer sequence) plus m-n+1 distinct
/// extra edges drawn uniformly among the remaining pairs. Connected by
/// construction.
RandomGraph random_connected_graph(int n, int m, std::uint64_t seed);

struct BenchConfig {
    int n = 16;
    std::vector<int> edge_counts = {15, 20, 24, 32, 40};
    int graphs_per_point = 50;
    int samples_per_graph = 800;
    double alpha = 0.0;
    std::uint64_t seed = 7;
};

struct BenchRow {
    int m;
    double m_over_n;
    double mean_re_cf;
    double std_re_cf;
    double mean_re_const;
    double mean_jgap_cf;
    double mean_jgap_const;
};

/// Per edge-count benchmark: random weighted graphs, GMRF samples, closed-form
/// construction vs the constant-weight (0.5) baseline. Relative error is
/// measured against the ground-truth Laplacian after scaling each estimate by
/// its error-minimizing scalar; the objective gap is measured against the
/// iterative optimum, unscaled. Bit-reproducible for a fixed seed.
std::vector<BenchRow> run_benchmark(const BenchConfig& config);

/// Frobenius relative error || truth - s * estimate ||_F / || truth ||_F with
/// the scalar s minimizing it.
double scaled_relative_error(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate);

} // namespace lapfit

#endif
