#include "lapfit/denoise.hpp"

#include "lapfit/errors.hpp"
#include "lapfit/rng.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace lapfit {

namespace {

// LF_THREADS caps worker threads; 0 or unset means hardware concurrency.
int worker_threads(int rows) {
    unsigned cap = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("LF_THREADS")) {
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        if (end != env && parsed > 0) cap = static_cast<unsigned>(parsed);
    }
    if (cap == 0) cap = 1;
    return std::max(1, std::min<int>(static_cast<int>(cap), rows));
}

} // namespace

ImageGrid::ImageGrid(int width, int height, double fill)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    if (width_ < 1 || height_ < 1) throw Error("image dimensions must be positive");
}

ImageGrid::ImageGrid(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width_ < 1 || height_ < 1) throw Error("image dimensions must be positive");
    if (pixels_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
        throw DimensionMismatch("pixel buffer does not match width * height");
    for (double p : pixels_)
        if (!std::isfinite(p)) throw Error("image contains non-finite pixel");
}

void DenoiseParams::validate() const {
    if (sigma_d <= 0.0 || sigma_r <= 0.0) throw Error("smoothing scales must be positive");
    if (alpha <= 0.0) throw Error("alpha must be positive");
    if (topology_kind == TopologyKind::Window && (window < 3 || window % 2 == 0))
        throw Error("window size must be odd and >= 3");
}

DenoiseParams adaptive_params(double sigma_n, TopologyKind topology_kind, int window,
                              WeightKind weight_kind) {
    if (sigma_n <= 0.0) throw Error("sigma_n must be positive");
    DenoiseParams params;
    params.sigma_d = 3.0;
    params.sigma_r = 2.0 * sigma_n;
    params.alpha = 4.0 * sigma_n * sigma_n; // 2 sigma_r^2 == 2 alpha
    params.topology_kind = topology_kind;
    params.window = window;
    params.weight_kind = weight_kind;
    return params;
}

double estimate_noise_sigma(const ImageGrid& image) {
    const int w = image.width();
    const int h = image.height();
    if (w < 3 || h < 3) throw ImageTooSmall("noise estimation needs at least 3x3 pixels");
    double acc = 0.0;
    for (int y = 1; y + 1 < h; ++y) {
        for (int x = 1; x + 1 < w; ++x) {
            const double response =
                image.at(x - 1, y - 1) - 2.0 * image.at(x, y - 1) + image.at(x + 1, y - 1) -
                2.0 * image.at(x - 1, y) + 4.0 * image.at(x, y) - 2.0 * image.at(x + 1, y) +
                image.at(x - 1, y + 1) - 2.0 * image.at(x, y + 1) + image.at(x + 1, y + 1);
            acc += std::abs(response);
        }
    }
    const double norm = std::sqrt(0.5 * M_PI) /
                        (6.0 * static_cast<double>(w - 2) * static_cast<double>(h - 2));
    return norm * acc;
}

double bilateral_weight(double xi, double xj, double dist2, double sigma_r, double sigma_d) {
    const double diff = xi - xj;
    return std::exp(-diff * diff / (2.0 * sigma_r * sigma_r)) *
           std::exp(-dist2 / (2.0 * sigma_d * sigma_d));
}

double cgl_weight(double xi, double xj, double dist2, double alpha, double sigma_d) {
    const double diff = xi - xj;
    return 1.0 / (1.0 + diff * diff / (2.0 * alpha)) *
           std::exp(-dist2 / (2.0 * sigma_d * sigma_d));
}

std::vector<std::vector<PixelNeighbor>> build_denoise_graph(const ImageGrid& image,
                                                            const DenoiseParams& params) {
    params.validate();
    const int w = image.width();
    const int h = image.height();
    std::vector<std::vector<PixelNeighbor>> graph(static_cast<std::size_t>(w) * h);

    const auto weight_of = [&](double xi, double xj, double dist2) {
        return (params.weight_kind == WeightKind::Bilateral)
                   ? bilateral_weight(xi, xj, dist2, params.sigma_r, params.sigma_d)
                   : cgl_weight(xi, xj, dist2, params.alpha, params.sigma_d);
    };

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto& neighbors = graph[static_cast<std::size_t>(y) * w + x];
            const double xi = image.at(x, y);
            if (params.topology_kind == TopologyKind::Window) {
                const int r = params.window / 2;
                neighbors.reserve(static_cast<std::size_t>(params.window) * params.window);
                for (int dy = -r; dy <= r; ++dy) {
                    for (int dx = -r; dx <= r; ++dx) {
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        const double dist2 = static_cast<double>(dx * dx + dy * dy);
                        neighbors.push_back(
                            {ny * w + nx, weight_of(xi, image.at(nx, ny), dist2)});
                    }
                }
            } else {
                neighbors.reserve(5);
                constexpr int offsets[5][2] = {{0, 0}, {0, -1}, {-1, 0}, {1, 0}, {0, 1}};
                for (const auto& [dx, dy] : offsets) {
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    const double dist2 = static_cast<double>(dx * dx + dy * dy);
                    neighbors.push_back({ny * w + nx, weight_of(xi, image.at(nx, ny), dist2)});
                }
            }
        }
    }
    return graph;
}

ImageGrid filter_image(const ImageGrid& image, const DenoiseParams& params) {
    const auto graph = build_denoise_graph(image, params);
    const int w = image.width();
    const int h = image.height();
    ImageGrid out(w, h);

    const auto filter_rows = [&](int y_begin, int y_end) {
        for (int y = y_begin; y < y_end; ++y) {
            for (int x = 0; x < w; ++x) {
                const auto& neighbors = graph[static_cast<std::size_t>(y) * w + x];
                const double center = image.at(x, y);
                // Accumulating deltas keeps a constant patch an exact fixed
                // point of the filter.
                double total = 0.0;
                double weighted_delta = 0.0;
                for (const auto& [index, weight] : neighbors) {
                    total += weight;
                    weighted_delta += weight * (image.pixels()[static_cast<std::size_t>(index)] -
                                                center);
                }
                out.at(x, y) = center + weighted_delta / total;
            }
        }
    };

    const int threads = worker_threads(h);
    if (threads <= 1) {
        filter_rows(0, h);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const int chunk = (h + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(h, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(filter_rows, begin, end);
        }
        for (auto& worker : pool) worker.join();
    }
    return out;
}

ImageGrid filter_image_via_graph(const ImageGrid& image, const DenoiseParams& params) {
    const auto graph = build_denoise_graph(image, params);
    const int n = image.width() * image.height();

    // Nodes 0..n-1 are the pixels, n..2n-1 the duplicates i'. Only i'-to-pixel
    // edges exist, so W is block off-diagonal.
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (const auto& [index, weight] : graph[static_cast<std::size_t>(i)]) {
            weights(n + i, index) = weight;
            weights(index, n + i) += weight; // duplicates may share a pixel neighbor
        }
    }

    Eigen::VectorXd signal(2 * n);
    for (int i = 0; i < n; ++i) {
        signal[i] = image.pixels()[static_cast<std::size_t>(i)];
        signal[n + i] = signal[i];
    }

    const Eigen::VectorXd degrees = weights.rowwise().sum();
    const Eigen::VectorXd filtered = (weights * signal).cwiseQuotient(degrees);

    ImageGrid out(image.width(), image.height());
    for (int i = 0; i < n; ++i) out.pixels()[static_cast<std::size_t>(i)] = filtered[n + i];
    return out;
}

double psnr(const ImageGrid& reference, const ImageGrid& test) {
    if (reference.width() != test.width() || reference.height() != test.height())
        throw DimensionMismatch("PSNR requires equal image dimensions");
    double mse = 0.0;
    const auto& a = reference.pixels();
    const auto& b = test.pixels();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        mse += diff * diff;
    }
    mse /= static_cast<double>(a.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

ImageGrid add_gaussian_noise(const ImageGrid& image, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw Error("sigma must be nonnegative");
    ImageGrid out = image;
    if (sigma == 0.0) return out;
    Rng rng(seed);
    for (double& p : out.pixels()) p += sigma * rng.next_normal();
    return out;
}

} // namespace lapfit
