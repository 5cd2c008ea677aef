#include "lapfit/closed_form.hpp"

#include "lapfit/denoise.hpp"
#include "lapfit/errors.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lapfit {

Eigen::VectorXd mean_square_differences(const SampleSet& samples, const GraphTopology& topology) {
    if (samples.signal_length() != topology.num_vertices())
        throw DimensionMismatch("signal length does not match vertex count");
    const Eigen::MatrixXd& x = samples.matrix();
    const double inv_count = 1.0 / static_cast<double>(samples.count());
    Eigen::VectorXd msd(topology.num_edges());
    for (int j = 0; j < topology.num_edges(); ++j) {
        const auto& [s, t] = topology.edge(j);
        msd[j] = (x.row(s) - x.row(t)).squaredNorm() * inv_count;
    }
    return msd;
}

Eigen::VectorXd closed_form_weights(const SampleSet& samples, const GraphTopology& topology,
                                    double alpha) {
    if (alpha < 0.0) throw Error("alpha must be nonnegative");
    Eigen::VectorXd u = mean_square_differences(samples, topology);
    for (int j = 0; j < topology.num_edges(); ++j) {
        const double denom = u[j] + 2.0 * alpha;
        if (denom <= 0.0) {
            const auto& [s, t] = topology.edge(j);
            throw DegenerateEdge("edge (" + std::to_string(s) + "," + std::to_string(t) +
                                 ") has identical endpoint values in every sample and alpha = 0");
        }
        u[j] = 1.0 / denom;
    }
    return u;
}

WeightedLaplacian solve_acyclic_cgl(const SampleSet& samples, const GraphTopology& topology,
                                    double alpha) {
    if (!topology.self_loops().empty())
        throw Error("topology has self-loops; use solve_acyclic_ggl");
    const StructureInfo info = classify_structure(topology);
    if (!info.connected) throw NotConnected();
    if (!info.acyclic) throw NotAcyclic();
    return WeightedLaplacian(topology, closed_form_weights(samples, topology, alpha));
}

WeightedLaplacian solve_acyclic_ggl(const SampleSet& samples, const GraphTopology& topology,
                                    double alpha, SelfLoopForm form) {
    if (topology.self_loops().size() != 1)
        throw Error("generalized solve requires exactly one self-loop, got " +
                    std::to_string(topology.self_loops().size()));
    const StructureInfo info = classify_structure(topology);
    if (!info.connected) throw NotConnected();
    if (!info.acyclic) throw NotAcyclic();

    Eigen::VectorXd u = closed_form_weights(samples, topology, alpha);

    const int k = topology.self_loops().front();
    const double n = static_cast<double>(topology.num_vertices());
    const double energy =
        samples.matrix().row(k).squaredNorm() / static_cast<double>(samples.count());
    const double denom = (form == SelfLoopForm::KMatrix) ? energy + 1.0 / n : energy;
    if (denom <= 0.0)
        throw DegenerateLoop("self-loop vertex " + std::to_string(k) +
                             " is zero in every sample");
    Eigen::VectorXd v(1);
    v[0] = 1.0 / denom;
    return WeightedLaplacian(topology, std::move(u), std::move(v));
}

WeightedLaplacian learn_line_graph(const SampleSet& rows, double alpha, bool symmetric) {
    const int n = rows.signal_length();
    if (n < 2) throw Error("segments must have length >= 2");
    const GraphTopology path = path_topology(n);
    Eigen::VectorXd d = mean_square_differences(rows, path);
    if (symmetric) {
        const Eigen::VectorXd mirrored = d.reverse();
        d = 0.5 * (d + mirrored);
    }
    const int m = n - 1;
    Eigen::VectorXd u(m);
    for (int k = 0; k < m; ++k) {
        const double denom = d[k] + 2.0 * alpha;
        if (denom <= 0.0)
            throw DegenerateEdge("segment positions " + std::to_string(k) + "," +
                                 std::to_string(k + 1) +
                                 " are identical in every sample and alpha = 0");
        u[k] = 1.0 / denom;
    }
    return WeightedLaplacian(path, std::move(u));
}

SampleSet extract_image_lines(const ImageGrid& image, int block, LineAxis axis) {
    if (block < 2) throw Error("block size must be >= 2");
    if (block > image.width() || block > image.height())
        throw Error("block size exceeds image dimensions");
    const int tiles_x = image.width() / block;
    const int tiles_y = image.height() / block;
    const int per_tile = block; // one segment per tile row (or column)
    Eigen::MatrixXd samples(block, static_cast<Eigen::Index>(tiles_x) * tiles_y * per_tile);
    Eigen::Index col = 0;
    for (int ty = 0; ty < tiles_y; ++ty) {
        for (int tx = 0; tx < tiles_x; ++tx) {
            const int x0 = tx * block;
            const int y0 = ty * block;
            for (int line = 0; line < per_tile; ++line, ++col) {
                for (int p = 0; p < block; ++p) {
                    samples(p, col) = (axis == LineAxis::Rows) ? image.at(x0 + p, y0 + line)
                                                               : image.at(x0 + line, y0 + p);
                }
            }
        }
    }
    return SampleSet(std::move(samples));
}

} // namespace lapfit
