#include "lapfit/solver.hpp"

#include "lapfit/errors.hpp"

#include <Eigen/Cholesky>
#include <cassert>
#include <cmath>
#include <limits>
#include <vector>

namespace lapfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Evaluation {
    double J = kInf;
    Eigen::VectorXd grad;  // exact gradient of J at u
    Eigen::MatrixXd gram;  // B_ij = xi_i^T M^{-1} xi_j; Hessian is B o B
    bool pd = false;
};

// One factorization of M(u) = L(u) + 11^T/n yields the objective, the exact
// gradient, and the edge Gram matrix that the Newton direction needs.
Evaluation evaluate(const GraphTopology& topology, const Eigen::VectorXd& c,
                    const Eigen::VectorXd& u) {
    const int n = topology.num_vertices();
    const int m = topology.num_edges();
    Evaluation ev;

    Eigen::MatrixXd mat = assemble_laplacian(topology, u);
    mat.array() += 1.0 / static_cast<double>(n);

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(mat);
    if (ldlt.info() != Eigen::Success) return ev;
    const Eigen::VectorXd d = ldlt.vectorD();
    const double threshold = 1e-12 * mat.trace();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(d[i] > threshold)) return ev;
        logdet += std::log(d[i]);
    }

    const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
    ev.gram.resize(m, m);
    ev.grad.resize(m);
    for (int i = 0; i < m; ++i) {
        const auto& [si, ti] = topology.edge(i);
        for (int j = 0; j <= i; ++j) {
            const auto& [sj, tj] = topology.edge(j);
            const double cross = inv(si, sj) - inv(si, tj) - inv(ti, sj) + inv(ti, tj);
            ev.gram(i, j) = cross;
            ev.gram(j, i) = cross;
        }
        ev.grad[i] = c[i] - ev.gram(i, i);
    }
    ev.J = -logdet + u.dot(c);
    ev.pd = true;
    return ev;
}

// Objective only, for line-search candidates. +inf when not positive
// definite, so the line search rejects the step and backtracks.
double objective_only(const GraphTopology& topology, const Eigen::VectorXd& c,
                      const Eigen::VectorXd& u) {
    Eigen::MatrixXd mat = assemble_laplacian(topology, u);
    mat.array() += 1.0 / static_cast<double>(topology.num_vertices());
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(mat);
    if (ldlt.info() != Eigen::Success) return kInf;
    const Eigen::VectorXd d = ldlt.vectorD();
    const double threshold = 1e-12 * mat.trace();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(d[i] > threshold)) return kInf;
        logdet += std::log(d[i]);
    }
    return -logdet + u.dot(c);
}

double projected_grad_inf_norm(const Eigen::VectorXd& u, const Eigen::VectorXd& grad,
                               double floor) {
    double norm = 0.0;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        // At the floor only the uphill-weight (negative-gradient) move is
        // feasible; a positive gradient there marks the edge inactive.
        const double g = (u[j] > floor) ? grad[j] : std::min(grad[j], 0.0);
        norm = std::max(norm, std::abs(g));
    }
    return norm;
}

// Projected-Newton direction: zero on the active set (pinned at the floor
// with positive gradient), -H^{-1} g on the free set. H = gram o gram is
// exactly diagonal on trees. Falls back to the Jacobi-scaled gradient when
// the reduced Hessian is not safely positive definite.
Eigen::VectorXd descent_direction(const Evaluation& ev, const Eigen::VectorXd& u, double floor) {
    const auto m = u.size();
    std::vector<Eigen::Index> free_set;
    free_set.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j)
        if (u[j] > floor || ev.grad[j] < 0.0) free_set.push_back(j);

    Eigen::VectorXd direction = Eigen::VectorXd::Zero(m);
    const auto f = static_cast<Eigen::Index>(free_set.size());
    if (f == 0) return direction;

    Eigen::MatrixXd hessian(f, f);
    Eigen::VectorXd rhs(f);
    for (Eigen::Index a = 0; a < f; ++a) {
        for (Eigen::Index b = 0; b <= a; ++b) {
            const double cross = ev.gram(free_set[static_cast<std::size_t>(a)],
                                         free_set[static_cast<std::size_t>(b)]);
            hessian(a, b) = cross * cross;
            hessian(b, a) = hessian(a, b);
        }
        rhs[a] = -ev.grad[free_set[static_cast<std::size_t>(a)]];
    }

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    bool usable = ldlt.info() == Eigen::Success;
    if (usable) {
        const double threshold = 1e-10 * hessian.trace();
        usable = (ldlt.vectorD().array() > threshold).all();
    }
    if (usable) {
        const Eigen::VectorXd step = ldlt.solve(rhs);
        for (Eigen::Index a = 0; a < f; ++a)
            direction[free_set[static_cast<std::size_t>(a)]] = step[a];
    } else {
        for (Eigen::Index a = 0; a < f; ++a) {
            const Eigen::Index j = free_set[static_cast<std::size_t>(a)];
            direction[j] = rhs[a] / hessian(a, a);
        }
    }
    return direction;
}

} // namespace

void SolverConfig::validate() const {
    if (max_iters < 1) throw Error("max_iters must be positive");
    if (grad_tol <= 0.0 || step_init <= 0.0 || u_floor <= 0.0)
        throw Error("grad_tol, step_init and u_floor must be positive");
    if (backtrack_factor <= 0.0 || backtrack_factor >= 1.0)
        throw Error("backtrack_factor must lie in (0,1)");
    if (armijo_c <= 0.0 || armijo_c >= 1.0) throw Error("armijo_c must lie in (0,1)");
}

SolveResult solve_cgl(const RegularizedCovariance& K, const GraphTopology& topology,
                      const SolverConfig& config, const std::optional<Eigen::VectorXd>& u0) {
    config.validate();
    if (!classify_structure(topology).connected) throw NotConnected();
    if (K.dim() != topology.num_vertices())
        throw DimensionMismatch("K dimension does not match topology");

    const int m = topology.num_edges();
    const Eigen::VectorXd c = K.edge_quadratics(topology);

    Eigen::VectorXd u;
    if (u0) {
        if (u0->size() != m) throw DimensionMismatch("u0 length does not match edge count");
        u = u0->cwiseMax(config.u_floor);
    } else {
        u = c.cwiseInverse().cwiseMax(config.u_floor);
    }

    Evaluation ev = evaluate(topology, c, u);
    if (!ev.pd) throw NotPositiveDefinite("objective undefined at the start point");

    int iter = 0;
    double pg_norm = projected_grad_inf_norm(u, ev.grad, config.u_floor);
    bool converged = pg_norm < config.grad_tol;

    while (!converged && iter < config.max_iters) {
        const Eigen::VectorXd direction = descent_direction(ev, u, config.u_floor);

        double step = config.step_init;
        bool accepted = false;
        Eigen::VectorXd candidate(m);
        for (int bt = 0; bt < 80; ++bt) {
            candidate = (u + step * direction).cwiseMax(config.u_floor);
            const double decrease = ev.grad.dot(candidate - u);
            if (decrease >= 0.0) break; // no feasible first-order descent left
            const double J_candidate = objective_only(topology, c, candidate);
            if (J_candidate <= ev.J + config.armijo_c * decrease) {
                accepted = true;
                break;
            }
            step *= config.backtrack_factor;
        }
        if (!accepted) {
            // Near the optimum the attainable decrease drops below the
            // floating-point resolution of J. Fall back to accepting the
            // full step when it strictly reduces the optimality measure.
            candidate = (u + config.step_init * direction).cwiseMax(config.u_floor);
            const Evaluation trial = evaluate(topology, c, candidate);
            if (trial.pd &&
                projected_grad_inf_norm(candidate, trial.grad, config.u_floor) < pg_norm &&
                trial.J <= ev.J + 1e-12 * (1.0 + std::abs(ev.J))) {
                u = candidate;
                ev = trial;
                ++iter;
                pg_norm = projected_grad_inf_norm(u, ev.grad, config.u_floor);
                converged = pg_norm < config.grad_tol;
                continue;
            }
            break; // numerically stationary
        }

        u = candidate;
        const double prev_J = ev.J;
        ev = evaluate(topology, c, u);
        if (!ev.pd) throw NotPositiveDefinite("objective lost positive definiteness mid-solve");
        assert(ev.J <= prev_J && "accepted step must not increase J");
        (void)prev_J;
        ++iter;
        pg_norm = projected_grad_inf_norm(u, ev.grad, config.u_floor);
        converged = pg_norm < config.grad_tol;
    }

    // Edges pinned at the floor are inactive; report them as exact zeros.
    SolveResult result;
    result.u = u;
    for (int j = 0; j < m; ++j)
        if (result.u[j] <= config.u_floor) result.u[j] = 0.0;
    result.J = objective_only(topology, c, result.u);
    result.iterations = iter;
    result.converged = converged;
    result.grad_inf_norm = pg_norm;
    return result;
}

} // namespace lapfit
