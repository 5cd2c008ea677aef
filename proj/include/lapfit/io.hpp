#ifndef LAPFIT_IO_HPP
#define LAPFIT_IO_HPP

#include "lapfit/denoise.hpp"
#include "lapfit/graph.hpp"
#include "lapfit/objective.hpp"

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>

namespace lapfit {

/// Parsed edge-list file. Weights are present only when every edge line
/// carried one (mixing weighted and unweighted lines is an error).
struct EdgeListFile {
    GraphTopology topology;
    std::optional<Eigen::VectorXd> weights;
    std::optional<Eigen::VectorXd> loop_weights;
};

/// Text format, one record per line:
///   n <count>        optional header; otherwise n = max index + 1
///   s t [weight]     undirected edge
///   loop k [weight]  self-loop
///   # ...            comment
EdgeListFile read_edge_list(const std::filesystem::path& path);

void write_edge_list(const std::filesystem::path& path, const GraphTopology& topology,
                     const std::optional<Eigen::VectorXd>& weights = std::nullopt,
                     const std::optional<Eigen::VectorXd>& loop_weights = std::nullopt);

inline void write_edge_list(const std::filesystem::path& path, const WeightedLaplacian& lap) {
    write_edge_list(path, lap.topology, lap.u,
                    lap.v.size() > 0 ? std::optional<Eigen::VectorXd>(lap.v) : std::nullopt);
}

/// Sample CSV: one sample per row, n comma-separated columns.
SampleSet read_samples_csv(const std::filesystem::path& path);
void write_samples_csv(const std::filesystem::path& path, const SampleSet& samples);

/// Dense matrix CSV (used for K dumps and images-as-matrices).
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& mat);

/// Binary PGM (P5), maxval <= 255, single '#' comment lines tolerated in the
/// header. Reading is lossless for integer-valued images; writing clips to
/// [0, 255] and rounds.
ImageGrid read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const ImageGrid& image);

/// Writes via a temporary file in the same directory plus an atomic rename,
/// so no partial output is ever observable at `path`.
void atomic_write_text(const std::filesystem::path& path, const std::string& contents);
void atomic_write_binary(const std::filesystem::path& path, const std::string& contents);

/// Shortest round-trip decimal form of a double (17 significant digits).
std::string format_double(double value);

} // namespace lapfit

#endif
