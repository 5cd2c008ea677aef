#include "lapfit/gmrf.hpp"

#include "lapfit/closed_form.hpp"
#include "lapfit/errors.hpp"
#include "lapfit/rng.hpp"
#include "lapfit/solver.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <utility>

namespace lapfit {

namespace {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

} // namespace

SpectralDecomposition SpectralDecomposition::of(const Eigen::MatrixXd& laplacian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

SampleSet sample_gmrf(const WeightedLaplacian& lap, int count, std::uint64_t seed) {
    if (count < 1) throw Error("sample count must be >= 1");
    if (!classify_structure(lap.topology).connected) throw NotConnected();

    const int n = lap.topology.num_vertices();
    const SpectralDecomposition spectral = SpectralDecomposition::of(lap.matrix());

    // Columns 1..n-1 carry the signal; column 0 is the all-ones null space.
    Eigen::VectorXd scale(n - 1);
    for (int k = 1; k < n; ++k) {
        const double lambda = spectral.eigenvalues[k];
        if (!(lambda > 0.0)) throw Error("Laplacian has a repeated zero eigenvalue");
        scale[k - 1] = 1.0 / std::sqrt(lambda);
    }
    const Eigen::MatrixXd basis = spectral.eigenvectors.rightCols(n - 1);

    Rng rng(seed);
    Eigen::MatrixXd coeffs(n - 1, count);
    for (int i = 0; i < count; ++i)
        for (int k = 0; k < n - 1; ++k) coeffs(k, i) = rng.next_normal() * scale[k];
    return SampleSet(basis * coeffs);
}

RandomGraph random_connected_graph(int n, int m, std::uint64_t seed) {
    if (n < 1) throw Error("need at least one vertex");
    const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    if (m < n - 1 || m > max_edges)
        throw Error("edge count " + std::to_string(m) + " outside [n-1, n(n-1)/2]");

    Rng rng(seed);
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));

    // Uniform spanning tree of the complete graph via a random Pruefer
    // sequence (uniform over all n^(n-2) labelled trees).
    if (n == 2) {
        edges.emplace_back(0, 1);
    } else if (n >= 3) {
        std::vector<int> pruefer(static_cast<std::size_t>(n - 2));
        for (auto& p : pruefer) p = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        std::vector<int> degree(static_cast<std::size_t>(n), 1);
        for (int p : pruefer) ++degree[static_cast<std::size_t>(p)];
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (int p : pruefer) {
            int leaf = -1;
            for (int v = 0; v < n; ++v) {
                if (degree[static_cast<std::size_t>(v)] == 1 && !used[static_cast<std::size_t>(v)]) {
                    leaf = v;
                    break;
                }
            }
            edges.emplace_back(std::min(leaf, p), std::max(leaf, p));
            used[static_cast<std::size_t>(leaf)] = true;
            --degree[static_cast<std::size_t>(p)];
        }
        int first = -1;
        int second = -1;
        for (int v = 0; v < n; ++v) {
            if (degree[static_cast<std::size_t>(v)] == 1 && !used[static_cast<std::size_t>(v)]) {
                if (first < 0)
                    first = v;
                else
                    second = v;
            }
        }
        edges.emplace_back(first, second);
    }

    // Extra edges: a partial Fisher-Yates draw of m-n+1 distinct non-tree pairs.
    const int extra = m - (n - 1);
    if (extra > 0) {
        std::vector<bool> present(static_cast<std::size_t>(n) * n, false);
        for (const auto& [s, t] : edges) present[static_cast<std::size_t>(s) * n + t] = true;
        std::vector<Edge> pool;
        pool.reserve(static_cast<std::size_t>(max_edges) - edges.size());
        for (int s = 0; s < n; ++s)
            for (int t = s + 1; t < n; ++t)
                if (!present[static_cast<std::size_t>(s) * n + t]) pool.emplace_back(s, t);
        for (int i = 0; i < extra; ++i) {
            const auto pick =
                i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(pool.size() - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick)]);
            edges.push_back(pool[static_cast<std::size_t>(i)]);
        }
    }

    GraphTopology topology(n, std::move(edges));
    Eigen::VectorXd weights(m);
    for (int j = 0; j < m; ++j) {
        double w = rng.next_double();
        while (w < 1e-6) w = rng.next_double(); // avoid near-disconnection
        weights[j] = w;
    }
    return RandomGraph{std::move(topology), std::move(weights)};
}

double scaled_relative_error(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate) {
    const double denom = estimate.squaredNorm();
    const double s = (denom > 0.0) ? truth.cwiseProduct(estimate).sum() / denom : 0.0;
    return (truth - s * estimate).norm() / truth.norm();
}

std::vector<BenchRow> run_benchmark(const BenchConfig& config) {
    if (config.n < 2 || config.graphs_per_point < 1 || config.samples_per_graph < 1)
        throw Error("invalid benchmark configuration");

    std::vector<BenchRow> rows;
    rows.reserve(config.edge_counts.size());
    for (std::size_t point = 0; point < config.edge_counts.size(); ++point) {
        const int m = config.edge_counts[point];
        double sum_re_cf = 0.0;
        double sum_sq_re_cf = 0.0;
        double sum_re_const = 0.0;
        double sum_jgap_cf = 0.0;
        double sum_jgap_const = 0.0;

        for (int g = 0; g < config.graphs_per_point; ++g) {
            const std::uint64_t stream = (static_cast<std::uint64_t>(point) << 32) |
                                         static_cast<std::uint64_t>(g);
            RandomGraph instance =
                random_connected_graph(config.n, m, substream_seed(config.seed, 2 * stream));
            const WeightedLaplacian truth(instance.topology, instance.weights);
            const SampleSet samples = sample_gmrf(truth, config.samples_per_graph,
                                                  substream_seed(config.seed, 2 * stream + 1));

            const Eigen::VectorXd u_cf =
                closed_form_weights(samples, instance.topology, config.alpha);
            const WeightedLaplacian lap_cf(instance.topology, u_cf);
            const WeightedLaplacian lap_const(instance.topology,
                                              Eigen::VectorXd::Constant(m, 0.5));

            const Eigen::MatrixXd truth_mat = truth.matrix();
            const double re_cf = scaled_relative_error(truth_mat, lap_cf.matrix());
            const double re_const = scaled_relative_error(truth_mat, lap_const.matrix());

            const RegularizedCovariance K = build_K(samples, config.alpha);
            const SolveResult oracle = solve_cgl(K, instance.topology);
            const double jgap_cf = objective_J(lap_cf, K) - oracle.J;
            const double jgap_const = objective_J(lap_const, K) - oracle.J;

            sum_re_cf += re_cf;
            sum_sq_re_cf += re_cf * re_cf;
            sum_re_const += re_const;
            sum_jgap_cf += jgap_cf;
            sum_jgap_const += jgap_const;
        }

        const double count = static_cast<double>(config.graphs_per_point);
        BenchRow row;
        row.m = m;
        row.m_over_n = static_cast<double>(m) / static_cast<double>(config.n);
        row.mean_re_cf = sum_re_cf / count;
        const double variance =
            (config.graphs_per_point > 1)
                ? std::max(0.0, (sum_sq_re_cf - count * row.mean_re_cf * row.mean_re_cf) /
                                    (count - 1.0))
                : 0.0;
        row.std_re_cf = std::sqrt(variance);
        row.mean_re_const = sum_re_const / count;
        row.mean_jgap_cf = sum_jgap_cf / count;
        row.mean_jgap_const = sum_jgap_const / count;
        rows.push_back(row);
    }
    return rows;
}

} // namespace lapfit
