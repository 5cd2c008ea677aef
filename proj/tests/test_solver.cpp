#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lapfit/closed_form.hpp"
#include "lapfit/errors.hpp"
#include "lapfit/gmrf.hpp"
#include "lapfit/objective.hpp"
#include "lapfit/solver.hpp"
#include "test_support.hpp"

#include <Eigen/Dense>
#include <cmath>

using namespace lapfit;

namespace {

// Instrumented descent: replays the solver's accepted iterates by running it
// one iteration at a time and recording J.
std::vector<double> objective_trace(const RegularizedCovariance& K, const GraphTopology& topology,
                                    Eigen::VectorXd u0, int steps) {
    std::vector<double> values;
    SolverConfig config;
    config.grad_tol = 1e-14; // keep iterating
    Eigen::VectorXd u = std::move(u0);
    for (int i = 0; i < steps; ++i) {
        config.max_iters = 1;
        const SolveResult result = solve_cgl(K, topology, config, u);
        values.push_back(result.J);
        u = result.u.cwiseMax(config.u_floor);
        if (result.converged) break;
    }
    return values;
}

} // namespace

TEST_CASE("iterative solver reaches the closed form on a tree") {
    const RandomGraph instance = random_connected_graph(12, 11, 42);
    const SampleSet samples =
        sample_gmrf(WeightedLaplacian(instance.topology, instance.weights), 600, 7);
    const RegularizedCovariance K = build_K(samples, 0.0);
    const Eigen::VectorXd closed = closed_form_weights(samples, instance.topology, 0.0);

    const SolveResult result =
        solve_cgl(K, instance.topology, {}, Eigen::VectorXd::Constant(11, 0.5));
    CHECK(result.converged);
    CHECK(testing::relative_error(result.u, closed) < 1e-6);
    CHECK(result.grad_inf_norm < 1e-9);
}

TEST_CASE("default start is the closed form and is already optimal on trees") {
    const RandomGraph instance = random_connected_graph(10, 9, 4242);
    const SampleSet samples =
        sample_gmrf(WeightedLaplacian(instance.topology, instance.weights), 400, 3);
    const RegularizedCovariance K = build_K(samples, 0.1);
    const SolveResult result = solve_cgl(K, instance.topology);
    CHECK(result.converged);
    CHECK(result.iterations == 0);
    const Eigen::VectorXd closed = closed_form_weights(samples, instance.topology, 0.1);
    CHECK(testing::relative_error(result.u, closed) < 1e-12);
}

TEST_CASE("triangle GMRF is recovered from many samples") {
    const GraphTopology triangle(3, {{0, 1}, {0, 2}, {1, 2}});
    Eigen::VectorXd truth(3);
    truth << 0.8, 0.5, 0.3;
    const SampleSet samples = sample_gmrf(WeightedLaplacian(triangle, truth), 5000, 99);
    const RegularizedCovariance K = build_K(samples, 0.0);
    const SolveResult result = solve_cgl(K, triangle);
    CHECK(result.converged);
    CHECK(testing::relative_error(result.u, truth) < 0.05);
}

TEST_CASE("objective is non-increasing along the iteration") {
    const RandomGraph instance = random_connected_graph(10, 16, 1234);
    const SampleSet samples =
        sample_gmrf(WeightedLaplacian(instance.topology, instance.weights), 300, 5);
    const RegularizedCovariance K = build_K(samples, 0.05);
    const auto trace = objective_trace(K, instance.topology,
                                       Eigen::VectorXd::Constant(16, 0.5), 200);
    REQUIRE(trace.size() > 2);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
}

TEST_CASE("different starts reach the same optimum") {
    const RandomGraph instance = random_connected_graph(8, 13, 777);
    const SampleSet samples =
        sample_gmrf(WeightedLaplacian(instance.topology, instance.weights), 400, 11);
    const RegularizedCovariance K = build_K(samples, 0.02);

    const SolveResult a = solve_cgl(K, instance.topology, {},
                                    Eigen::VectorXd::Constant(13, 0.25));
    const SolveResult b = solve_cgl(K, instance.topology, {},
                                    Eigen::VectorXd::Constant(13, 2.0));
    CHECK(a.converged);
    CHECK(b.converged);
    CHECK(std::abs(a.J - b.J) < 1e-8);
}

TEST_CASE("disconnected topology is rejected") {
    const GraphTopology forest(4, {{0, 1}, {2, 3}});
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(4, 4);
    const RegularizedCovariance K = build_K(SampleSet(x), 0.1);
    CHECK_THROWS_AS(solve_cgl(K, forest), NotConnected);
}

TEST_CASE("iteration budget is honored") {
    const RandomGraph instance = random_connected_graph(12, 24, 31);
    const SampleSet samples =
        sample_gmrf(WeightedLaplacian(instance.topology, instance.weights), 300, 13);
    const RegularizedCovariance K = build_K(samples, 0.0);
    SolverConfig config;
    config.max_iters = 3;
    config.grad_tol = 1e-15;
    const SolveResult result =
        solve_cgl(K, instance.topology, config, Eigen::VectorXd::Constant(24, 0.5));
    CHECK_FALSE(result.converged);
    CHECK(result.iterations == 3);
    CHECK(std::isfinite(result.J));
}

TEST_CASE("config validation") {
    SolverConfig config;
    config.backtrack_factor = 1.5;
    const GraphTopology g(2, {{0, 1}});
    Eigen::MatrixXd x(2, 1);
    x << 1, 0;
    const RegularizedCovariance K = build_K(SampleSet(x), 0.1);
    CHECK_THROWS_AS(solve_cgl(K, g, config), Error);
}

TEST_CASE("inactive edges are reported as exact zeros") {
    // A 3-cycle whose data strongly contradicts one edge: samples are drawn
    // from a GMRF supported on a path, plus the closing edge in the topology.
    const GraphTopology path = path_topology(3);
    Eigen::VectorXd path_weights(2);
    path_weights << 1.0, 1.0;
    const SampleSet samples = sample_gmrf(WeightedLaplacian(path, path_weights), 20000, 21);
    const GraphTopology triangle(3, {{0, 1}, {0, 2}, {1, 2}});
    const RegularizedCovariance K = build_K(samples, 0.0);
    const SolveResult result = solve_cgl(K, triangle);
    CHECK(result.converged);
    // Edge (0,2) is absent from the generating model; with enough samples its
    // optimal weight sits at (or near) the constraint boundary.
    const double smallest = result.u.minCoeff();
    CHECK((smallest == 0.0 || smallest < 1e-3));
}
