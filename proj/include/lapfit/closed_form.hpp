#ifndef LAPFIT_CLOSED_FORM_HPP
#define LAPFIT_CLOSED_FORM_HPP

#include "lapfit/graph.hpp"
#include "lapfit/objective.hpp"

#include <Eigen/Dense>

namespace lapfit {

/// Which denominator to use for the self-loop weight in the generalized
/// Laplacian solve. The two published forms disagree by the 11^T/n diagonal
/// term, so both are kept behind a switch:
///   KMatrix      v_k = 1 / (e_k^T K e_k)           (stationary point)
///   SampleEnergy v_k = 1 / ((1/N) sum_i x_i(k)^2)  (raw-sample form)
enum class SelfLoopForm { KMatrix, SampleEnergy };

/// Mean squared differences (1/N) sum_i (x_i(s_j) - x_i(t_j))^2, in edge order.
Eigen::VectorXd mean_square_differences(const SampleSet& samples, const GraphTopology& topology);

/// Per-edge weights u_j = 1 / (msd_j + 2 alpha). Applied edge-wise to any
/// topology; acyclicity is NOT checked here (cyclic use gives the
/// approximation whose quality the error bound certifies). Throws
/// DegenerateEdge when a denominator is zero (alpha = 0 and the two endpoint
/// coordinates agree in every sample).
Eigen::VectorXd closed_form_weights(const SampleSet& samples, const GraphTopology& topology,
                                    double alpha);

/// Optimal combinatorial Laplacian for a connected acyclic topology without
/// self-loops. The returned weights are the unique stationary point of the
/// objective, computed in a single pass over the samples.
/// Throws NotConnected / NotAcyclic / DegenerateEdge.
WeightedLaplacian solve_acyclic_cgl(const SampleSet& samples, const GraphTopology& topology,
                                    double alpha);

/// Optimal generalized Laplacian for a connected acyclic topology carrying
/// exactly one self-loop. Edge weights as in solve_acyclic_cgl; the self-loop
/// weight per `form`. Throws DegenerateLoop when the requested denominator
/// is zero.
WeightedLaplacian solve_acyclic_ggl(const SampleSet& samples, const GraphTopology& topology,
                                    double alpha, SelfLoopForm form = SelfLoopForm::KMatrix);

/// Line-graph learning from 1-D segments: mean square difference d_k between
/// consecutive coordinates, optional mirror-averaging of d (making the weight
/// vector palindromic), then w_k = 1 / (d_k + 2 alpha) on the path topology.
WeightedLaplacian learn_line_graph(const SampleSet& rows, double alpha, bool symmetric);

class ImageGrid; // defined in denoise.hpp

enum class LineAxis { Rows, Columns };

/// Cuts the image into non-overlapping block x block tiles (partial border
/// tiles dropped) and emits every length-`block` row or column segment of
/// every tile as one sample.
SampleSet extract_image_lines(const ImageGrid& image, int block, LineAxis axis);

} // namespace lapfit

#endif
