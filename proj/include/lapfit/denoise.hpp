#ifndef LAPFIT_DENOISE_HPP
#define LAPFIT_DENOISE_HPP

#include <cstdint>
#include <vector>

namespace lapfit {

/// Grayscale image, row-major, float during processing with 0-255 range
/// semantics. Values are clipped and rounded only at PGM write time.
class ImageGrid {
public:
    ImageGrid(int width, int height, double fill = 0.0);
    ImageGrid(int width, int height, std::vector<double> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    double at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    double& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    const std::vector<double>& pixels() const { return pixels_; }
    std::vector<double>& pixels() { return pixels_; }

private:
    int width_;
    int height_;
    std::vector<double> pixels_;
};

enum class TopologyKind { FiveNeighbor, Window };
enum class WeightKind { Bilateral, Cgl };

struct DenoiseParams {
    double sigma_d = 3.0;       // spatial scale (pixels)
    double sigma_r = 1.0;       // range scale (intensity); bilateral kernel
    double alpha = 1.0;         // regularizer; cgl range kernel
    TopologyKind topology_kind = TopologyKind::Window;
    int window = 3;             // odd, >= 3; used when topology_kind == Window
    WeightKind weight_kind = WeightKind::Bilateral;

    void validate() const;
};

/// Noise-adaptive parameter scheme: sigma_d = 3, sigma_r = 2 sigma_n,
/// alpha = 4 sigma_n^2 (so that 2 sigma_r^2 = 2 alpha and the two range
/// kernels are directly comparable).
DenoiseParams adaptive_params(double sigma_n, TopologyKind topology_kind, int window,
                              WeightKind weight_kind);

/// Noise standard deviation estimate from the absolute response of the 3x3
/// difference-of-Laplacians kernel; exact zero on constant and planar images.
/// Throws ImageTooSmall below 3x3.
double estimate_noise_sigma(const ImageGrid& image);

/// exp(-(xi-xj)^2 / (2 sigma_r^2)) * exp(-dist2 / (2 sigma_d^2)),
/// dist2 the squared pixel-coordinate distance.
double bilateral_weight(double xi, double xj, double dist2, double sigma_r, double sigma_d);

/// [1 + (xi-xj)^2 / (2 alpha)]^{-1} times the same spatial factor as the
/// bilateral weight, so the two kinds differ only in the range kernel.
double cgl_weight(double xi, double xj, double dist2, double alpha, double sigma_d);

struct PixelNeighbor {
    int index;     // row-major pixel index
    double weight; // combined range * spatial weight
};

/// Per-pixel neighbor lists with weights. For Window topology the neighbors
/// of the duplicate node i' are all pixels in the k x k window centered at i
/// (including i itself); for FiveNeighbor they are i and its 4-adjacent
/// pixels. Windows are truncated at image borders.
std::vector<std::vector<PixelNeighbor>> build_denoise_graph(const ImageGrid& image,
                                                            const DenoiseParams& params);

/// Normalized weighted average y_i = sum_j w_ij x_j / sum_j w_ij over the
/// neighbor list of i. Equals the h(lambda) = 1 - lambda graph-filter output
/// read at the duplicated node i'.
ImageGrid filter_image(const ImageGrid& image, const DenoiseParams& params);

/// Debug path for the same filter: materializes the 2n-node graph (every
/// pixel i plus its duplicate i'), forms D^{-1} W x on it, and reads the
/// outputs at the duplicate nodes. Agrees with filter_image to rounding.
ImageGrid filter_image_via_graph(const ImageGrid& image, const DenoiseParams& params);

/// 10 log10(255^2 / MSE); +infinity when the images are identical.
/// Throws DimensionMismatch.
double psnr(const ImageGrid& reference, const ImageGrid& test);

/// Adds i.i.d. N(0, sigma^2) per pixel, unclipped.
ImageGrid add_gaussian_noise(const ImageGrid& image, double sigma, std::uint64_t seed);

} // namespace lapfit

#endif
