#include "lapfit/graph.hpp"

#include "lapfit/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace lapfit {

namespace {

// Union-find with path compression.
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

    // Returns false if x and y were already in the same set.
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

GraphTopology::GraphTopology(int n, std::vector<Edge> edges, std::vector<int> self_loops)
    : n_(n), edges_(std::move(edges)), self_loops_(std::move(self_loops)) {
    if (n_ < 1) throw Error("vertex count must be >= 1");
    for (auto& [s, t] : edges_) {
        if (s == t) throw Error("edge (" + std::to_string(s) + "," + std::to_string(t) +
                                ") is a self-loop; use the self_loops list");
        if (s > t) std::swap(s, t);
        if (s < 0 || t >= n_)
            throw Error("edge (" + std::to_string(s) + "," + std::to_string(t) +
                        ") out of range for n=" + std::to_string(n_));
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw Error("duplicate edge in topology");
    std::sort(self_loops_.begin(), self_loops_.end());
    if (std::adjacent_find(self_loops_.begin(), self_loops_.end()) != self_loops_.end())
        throw Error("duplicate self-loop in topology");
    for (int k : self_loops_)
        if (k < 0 || k >= n_) throw Error("self-loop vertex " + std::to_string(k) + " out of range");
}

Eigen::MatrixXd IncidenceMatrix::extended() const {
    Eigen::MatrixXd g(xi.rows(), xi.cols() + 1);
    g.leftCols(xi.cols()) = xi;
    g.col(xi.cols()).setOnes();
    return g;
}

IncidenceMatrix build_incidence(const GraphTopology& topology) {
    const int n = topology.num_vertices();
    const int m = topology.num_edges();
    Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(n, m);
    for (int j = 0; j < m; ++j) {
        const auto& [s, t] = topology.edge(j);
        xi(s, j) = 1.0;
        xi(t, j) = -1.0;
    }
    return IncidenceMatrix{std::move(xi)};
}

Eigen::MatrixXd assemble_laplacian(const GraphTopology& topology, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& v) {
    const int n = topology.num_vertices();
    const int m = topology.num_edges();
    if (u.size() != m)
        throw DimensionMismatch("weight vector has length " + std::to_string(u.size()) +
                                ", topology has " + std::to_string(m) + " edges");
    const auto num_loops = static_cast<Eigen::Index>(topology.self_loops().size());
    if (v.size() != 0 && v.size() != num_loops)
        throw DimensionMismatch("self-loop weight vector length does not match topology");
    if (!u.allFinite() || !v.allFinite()) throw Error("non-finite weight");

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < m; ++j) {
        const auto& [s, t] = topology.edge(j);
        const double w = u[j];
        lap(s, s) += w;
        lap(t, t) += w;
        lap(s, t) -= w;
        lap(t, s) -= w;
    }
    for (Eigen::Index k = 0; k < v.size(); ++k)
        lap(topology.self_loops()[static_cast<std::size_t>(k)],
            topology.self_loops()[static_cast<std::size_t>(k)]) += v[k];
    return lap;
}

StructureInfo classify_structure(const GraphTopology& topology) {
    DisjointSet ds(topology.num_vertices());
    bool acyclic = true;
    for (const auto& [s, t] : topology.edges())
        if (!ds.unite(s, t)) acyclic = false;
    int components = 0;
    for (int i = 0; i < topology.num_vertices(); ++i)
        if (ds.find(i) == i) ++components;
    return StructureInfo{components == 1, acyclic, components};
}

WeightedLaplacian::WeightedLaplacian(GraphTopology topo, Eigen::VectorXd weights,
                                     Eigen::VectorXd loop_weights)
    : topology(std::move(topo)), u(std::move(weights)), v(std::move(loop_weights)) {
    if (u.size() != topology.num_edges())
        throw DimensionMismatch("weight vector length does not match edge count");
    const auto num_loops = static_cast<Eigen::Index>(topology.self_loops().size());
    if (v.size() == 0 && num_loops > 0) v = Eigen::VectorXd::Zero(num_loops);
    if (v.size() != num_loops)
        throw DimensionMismatch("self-loop weight vector length does not match topology");
}

Eigen::MatrixXd WeightedLaplacian::matrix() const { return assemble_laplacian(topology, u, v); }

GraphTopology path_topology(int n) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return GraphTopology(n, std::move(edges));
}

} // namespace lapfit
