#ifndef LAPFIT_GRAPH_HPP
#define LAPFIT_GRAPH_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace lapfit {

using Edge = std::pair<int, int>;

/// An undirected topology on n vertices. Edges are canonicalized to s < t and
/// stored sorted lexicographically, so edge j maps to incidence column j
/// deterministically across runs. Self-loop vertices (for generalized
/// Laplacians) are kept separately. Immutable after construction.
class GraphTopology {
public:
    GraphTopology(int n, std::vector<Edge> edges, std::vector<int> self_loops = {});

    int num_vertices() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int j) const { return edges_[static_cast<std::size_t>(j)]; }
    const std::vector<int>& self_loops() const { return self_loops_; }

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<int> self_loops_;
};

/// Oriented incidence matrix: column j is e_s - e_t for edge j = (s, t).
struct IncidenceMatrix {
    Eigen::MatrixXd xi; // n x m

    // The n x (m+1) matrix (xi, 1) used by the weight-vector parameterization.
    Eigen::MatrixXd extended() const;
};

/// A topology with edge weights u (and optional self-loop weights v, aligned
/// with topology.self_loops()).
struct WeightedLaplacian {
    GraphTopology topology;
    Eigen::VectorXd u;
    Eigen::VectorXd v; // empty when the graph has no self-loops

    WeightedLaplacian(GraphTopology topo, Eigen::VectorXd weights,
                      Eigen::VectorXd loop_weights = Eigen::VectorXd());

    Eigen::MatrixXd matrix() const;
};

struct StructureInfo {
    bool connected;
    bool acyclic;
    int components;
};

IncidenceMatrix build_incidence(const GraphTopology& topology);

/// Sum_j u_j xi_j xi_j^T plus self-loop diagonal contributions.
Eigen::MatrixXd assemble_laplacian(const GraphTopology& topology, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& v = Eigen::VectorXd());

/// Union-find pass over the edge list; self-loops are ignored (they do not
/// affect connectivity and "acyclic" refers to edge cycles only).
StructureInfo classify_structure(const GraphTopology& topology);

/// Path topology 0-1-2-...-(n-1).
GraphTopology path_topology(int n);

} // namespace lapfit

#endif
