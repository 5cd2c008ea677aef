#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lapfit/denoise.hpp"
#include "lapfit/errors.hpp"
#include "lapfit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

using namespace lapfit;

namespace {

ImageGrid noise_field(int w, int h, double sigma, std::uint64_t seed) {
    return add_gaussian_noise(ImageGrid(w, h, 128.0), sigma, seed);
}

// Piecewise scene with smooth shading, sharp edges and mild texture.
ImageGrid synthetic_scene(int w, int h) {
    ImageGrid img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double value = 60.0 + 60.0 * (static_cast<double>(x) / w) +
                           25.0 * std::sin(2.0 * M_PI * y / 37.0);
            const double cx = x - 0.3 * w;
            const double cy = y - 0.35 * h;
            if (cx * cx + cy * cy < 0.04 * w * h) value = 210.0;
            if (x > 0.65 * w && y > 0.55 * h) value = 35.0 + 10.0 * std::sin(x * 0.8);
            img.at(x, y) = std::clamp(value, 0.0, 255.0);
        }
    }
    return img;
}

} // namespace

TEST_CASE("noise estimate is zero on constant and planar images") {
    CHECK(estimate_noise_sigma(ImageGrid(16, 16, 100.0)) == doctest::Approx(0.0));
    ImageGrid ramp(32, 24);
    for (int y = 0; y < 24; ++y)
        for (int x = 0; x < 32; ++x) ramp.at(x, y) = 3.0 * x - 2.0 * y + 10.0;
    CHECK(estimate_noise_sigma(ramp) == doctest::Approx(0.0));
}

TEST_CASE("noise estimate recovers the true sigma on a pure noise field") {
    const ImageGrid noisy = noise_field(256, 256, 20.0, 1);
    const double estimate = estimate_noise_sigma(noisy);
    CHECK(estimate > 18.0);
    CHECK(estimate < 22.0);
}

TEST_CASE("noise estimation rejects tiny images") {
    CHECK_THROWS_AS(estimate_noise_sigma(ImageGrid(2, 5, 0.0)), ImageTooSmall);
}

TEST_CASE("bilateral weight formula") {
    CHECK(bilateral_weight(10.0, 10.0, 0.0, 2.0, 3.0) == doctest::Approx(1.0));
    const double sigma_r = 2.0;
    const double diff = std::sqrt(2.0) * sigma_r; // (xi-xj)^2 = 2 sigma_r^2
    CHECK(bilateral_weight(diff, 0.0, 0.0, sigma_r, 3.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        // sigma_r at the adaptive scheme's scale; tiny sigma_r underflows the
        // range kernel for extreme intensity gaps, which is fine.
        const double w = bilateral_weight(rng.uniform(0, 255), rng.uniform(0, 255),
                                          rng.uniform(0, 18), 40.0, 3.0);
        CHECK(w > 0.0);
        CHECK(w <= 1.0);
    }
}

TEST_CASE("cgl weight formula") {
    CHECK(cgl_weight(7.0, 7.0, 0.0, 4.0, 3.0) == doctest::Approx(1.0));
    const double alpha = 4.0;
    const double diff = std::sqrt(2.0 * alpha); // (xi-xj)^2 = 2 alpha
    CHECK(cgl_weight(diff, 0.0, 0.0, alpha, 3.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cgl range kernel dominates the bilateral at matched parameters") {
    // 2 sigma_r^2 == 2 alpha: (1+g)^{-1} >= exp(-g), equality only at g = 0.
    const double sigma_n = 10.0;
    const double sigma_r = 2.0 * sigma_n;
    const double alpha = 4.0 * sigma_n * sigma_n;
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(0, 255);
        const double b = rng.uniform(0, 255);
        const double d2 = rng.uniform(0, 8);
        const double bf = bilateral_weight(a, b, d2, sigma_r, 3.0);
        const double cg = cgl_weight(a, b, d2, alpha, 3.0);
        if (a == b)
            CHECK(cg == bf);
        else
            CHECK(cg > bf);
    }
}

TEST_CASE("window neighbor counts with border truncation") {
    const ImageGrid img(6, 5, 0.0);
    DenoiseParams params;
    params.topology_kind = TopologyKind::Window;
    params.window = 3;
    const auto graph = build_denoise_graph(img, params);
    CHECK(graph[static_cast<std::size_t>(2 * 6 + 3)].size() == 9); // interior
    CHECK(graph[0].size() == 4);                                   // corner
    CHECK(graph[3].size() == 6);                                   // top edge
}

TEST_CASE("five-neighbor topology") {
    const ImageGrid img(7, 7, 0.0);
    DenoiseParams params;
    params.topology_kind = TopologyKind::FiveNeighbor;
    const auto graph = build_denoise_graph(img, params);
    CHECK(graph[static_cast<std::size_t>(3 * 7 + 3)].size() == 5); // interior
    CHECK(graph[0].size() == 3);                                   // corner
    // Edge count: 5 per interior pixel plus truncated borders.
    std::size_t edges = 0;
    for (const auto& neighbors : graph) edges += neighbors.size();
    const std::size_t interior = 5 * 5;
    const std::size_t side = 4 * 5;   // non-corner border pixels, 4 neighbors each
    const std::size_t corners = 4;    // 3 neighbors each
    CHECK(edges == interior * 5 + side * 4 + corners * 3);
}

TEST_CASE("constant image is an exact fixed point") {
    const ImageGrid img(12, 9, 77.0);
    for (const auto kind : {TopologyKind::Window, TopologyKind::FiveNeighbor}) {
        DenoiseParams params = adaptive_params(10.0, kind, 3, WeightKind::Cgl);
        const ImageGrid out = filter_image(img, params);
        for (double p : out.pixels()) CHECK(p == 77.0);
    }
}

TEST_CASE("output stays inside the local input range") {
    ImageGrid img(24, 16, 0.0);
    Rng rng(23);
    for (double& p : img.pixels()) p = rng.uniform(0.0, 255.0);
    DenoiseParams params = adaptive_params(15.0, TopologyKind::Window, 5, WeightKind::Bilateral);
    const ImageGrid out = filter_image(img, params);
    double lo = 255.0;
    double hi = 0.0;
    for (double p : img.pixels()) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    for (double p : out.pixels()) {
        CHECK(p >= lo - 1e-9);
        CHECK(p <= hi + 1e-9);
    }
}

TEST_CASE("vanishing range scale keeps a bright pixel untouched") {
    ImageGrid img(9, 9, 10.0);
    img.at(4, 4) = 250.0;
    DenoiseParams params;
    params.sigma_r = 1e-3;
    params.sigma_d = 3.0;
    params.alpha = 1.0;
    params.topology_kind = TopologyKind::Window;
    params.window = 3;
    params.weight_kind = WeightKind::Bilateral;
    const ImageGrid out = filter_image(img, params);
    CHECK(out.at(4, 4) == doctest::Approx(250.0).epsilon(1e-9));
    CHECK(out.at(0, 0) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("direct averaging equals the duplicated-node graph filter") {
    ImageGrid img = synthetic_scene(16, 16);
    img = add_gaussian_noise(img, 10.0, 31);
    for (const auto kind : {TopologyKind::Window, TopologyKind::FiveNeighbor}) {
        for (const auto weight : {WeightKind::Bilateral, WeightKind::Cgl}) {
            const DenoiseParams params = adaptive_params(10.0, kind, 3, weight);
            const ImageGrid direct = filter_image(img, params);
            const ImageGrid via_graph = filter_image_via_graph(img, params);
            double max_diff = 0.0;
            for (std::size_t i = 0; i < direct.pixels().size(); ++i)
                max_diff = std::max(max_diff,
                                    std::abs(direct.pixels()[i] - via_graph.pixels()[i]));
            CHECK(max_diff < 1e-10);
        }
    }
}

TEST_CASE("psnr reference values") {
    const ImageGrid a(8, 8, 100.0);
    CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());
    const ImageGrid b(8, 8, 101.0);
    CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(255.0 * 255.0)).epsilon(1e-12));
    const ImageGrid c(8, 8, 100.0 + 255.0);
    CHECK(psnr(a, c) == doctest::Approx(0.0));
    CHECK_THROWS_AS(psnr(a, ImageGrid(4, 4, 0.0)), DimensionMismatch);
}

TEST_CASE("gaussian noise is seeded and has the right scale") {
    const ImageGrid img(256, 256, 128.0);
    const ImageGrid a = add_gaussian_noise(img, 25.0, 7);
    const ImageGrid b = add_gaussian_noise(img, 25.0, 7);
    const ImageGrid c = add_gaussian_noise(img, 25.0, 8);
    CHECK(a.pixels() == b.pixels());
    CHECK(a.pixels() != c.pixels());
    CHECK(add_gaussian_noise(img, 0.0, 7).pixels() == img.pixels());

    double sq = 0.0;
    for (std::size_t i = 0; i < a.pixels().size(); ++i) {
        const double d = a.pixels()[i] - img.pixels()[i];
        sq += d * d;
    }
    const double std_dev = std::sqrt(sq / static_cast<double>(a.pixels().size()));
    CHECK(std::abs(std_dev - 25.0) / 25.0 < 0.02);
}

TEST_CASE("denoising a noisy scene raises PSNR; cgl beats bilateral at high noise") {
    const ImageGrid clean = synthetic_scene(128, 128);
    const double sigma = 25.0;
    const ImageGrid noisy = add_gaussian_noise(clean, sigma, 11);
    const double sigma_hat = estimate_noise_sigma(noisy);
    CHECK(std::abs(sigma_hat - sigma) / sigma < 0.25);

    const double psnr_noisy = psnr(clean, noisy);
    const ImageGrid bf =
        filter_image(noisy, adaptive_params(sigma_hat, TopologyKind::Window, 3,
                                            WeightKind::Bilateral));
    const ImageGrid cgl =
        filter_image(noisy, adaptive_params(sigma_hat, TopologyKind::Window, 3, WeightKind::Cgl));
    const double psnr_bf = psnr(clean, bf);
    const double psnr_cgl = psnr(clean, cgl);

    CHECK(psnr_bf > psnr_noisy);
    CHECK(psnr_cgl > psnr_noisy + 3.0);
    CHECK(psnr_cgl > psnr_bf);
}

TEST_CASE("filtering a clean image keeps it close to itself") {
    const ImageGrid clean = synthetic_scene(96, 96);
    const DenoiseParams params = adaptive_params(5.0, TopologyKind::Window, 3, WeightKind::Cgl);
    const ImageGrid out = filter_image(clean, params);
    CHECK(psnr(clean, out) > 25.0);
}

TEST_CASE("adaptive parameters follow the noise level") {
    const DenoiseParams params =
        adaptive_params(12.5, TopologyKind::Window, 5, WeightKind::Bilateral);
    CHECK(params.sigma_d == 3.0);
    CHECK(params.sigma_r == 25.0);
    CHECK(params.alpha == doctest::Approx(4.0 * 12.5 * 12.5));
    CHECK(2.0 * params.sigma_r * params.sigma_r == doctest::Approx(2.0 * params.alpha));
}

TEST_CASE("parameter validation") {
    DenoiseParams params;
    params.window = 4;
    CHECK_THROWS_AS(params.validate(), Error);
    params.window = 3;
    params.alpha = 0.0;
    CHECK_THROWS_AS(params.validate(), Error);
}
