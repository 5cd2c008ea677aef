#include "lapfit/bound.hpp"

#include "lapfit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace lapfit {

namespace {

class DisjointSet {
public:
    explicit DisjointSet(int n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int x, int y) {
        const int rx = find(x);
        const int ry = find(y);
        if (rx == ry) return false;
        parent_[static_cast<std::size_t>(rx)] = ry;
        return true;
    }

private:
    std::vector<int> parent_;
};

} // namespace

std::vector<int> select_positive_spanning_tree(const GraphTopology& topology,
                                               const Eigen::VectorXd& u_star, double tau_pos) {
    const int n = topology.num_vertices();
    const int m = topology.num_edges();
    if (u_star.size() != m) throw DimensionMismatch("u_star length does not match edge count");

    std::vector<int> candidates;
    for (int j = 0; j < m; ++j)
        if (u_star[j] > tau_pos) candidates.push_back(j);
    // Kruskal on descending weight; the stable sort keeps ties in edge order.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](int a, int b) { return u_star[a] > u_star[b]; });

    DisjointSet ds(n);
    std::vector<int> tree;
    tree.reserve(static_cast<std::size_t>(n - 1));
    for (int j : candidates) {
        const auto& [s, t] = topology.edge(j);
        if (ds.unite(s, t)) tree.push_back(j);
    }
    if (static_cast<int>(tree.size()) != n - 1)
        throw NoPositiveSpanningTree("positive-weight edges do not span all " +
                                     std::to_string(n) + " vertices");
    std::sort(tree.begin(), tree.end());
    return tree;
}

BoundReport compute_bound(const Eigen::VectorXd& u_cf, const Eigen::VectorXd& u_star,
                          const GraphTopology& topology, const RegularizedCovariance& K) {
    const int n = topology.num_vertices();
    const int m = topology.num_edges();
    if (u_cf.size() != m || u_star.size() != m)
        throw DimensionMismatch("weight vector length does not match edge count");
    if ((u_cf.array() <= 0.0).any())
        throw Error("closed-form weights must be strictly positive");

    BoundReport report;
    report.tree_edges = select_positive_spanning_tree(topology, u_star);

    std::vector<bool> in_tree(static_cast<std::size_t>(m), false);
    for (int j : report.tree_edges) in_tree[static_cast<std::size_t>(j)] = true;

    report.ratios.resize(m);
    for (int j = 0; j < m; ++j)
        report.ratios[j] = (u_star[j] > kTauPos) ? u_star[j] / u_cf[j] : 1.0;
    report.beta = report.ratios.minCoeff();

    report.trace_term = 0.0;
    double sum_log_r_q = 0.0;
    for (int j = 0; j < m; ++j) {
        if (in_tree[static_cast<std::size_t>(j)]) continue;
        report.trace_term += 1.0 - u_star[j] / u_cf[j];
        sum_log_r_q += std::log(report.ratios[j]);
    }

    const int extra_edges = m - n + 1; // |Q|
    report.bound_tight =
        report.trace_term + sum_log_r_q - static_cast<double>(extra_edges) * std::log(report.beta);
    report.bound_loose =
        report.trace_term + static_cast<double>(extra_edges) *
                                std::log(report.ratios.maxCoeff() / report.ratios.minCoeff());

    report.J_cf = objective_J(WeightedLaplacian(topology, u_cf), K);
    report.J_star = objective_J(WeightedLaplacian(topology, u_star), K);
    report.gap = report.J_cf - report.J_star;
    return report;
}

} // namespace lapfit
