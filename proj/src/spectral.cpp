#include "heatlab/spectral.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "heatlab/dirichlet.hpp"
#include "heatlab/error.hpp"

namespace heatlab {

double dirichlet_energy(const WeightedGraph &g, std::span<const double> f) {
    if (f.size() != g.vertex_count())
        throw Error(ErrorKind::BadParameter, "function length does not match the graph");
    // Each unordered edge appears once in the canonical list; the 1/2 cancels the double count.
    double sum = 0.0;
    for (const Edge &e : g.edges()) {
        const double d = f[e.u] - f[e.v];
        sum += e.weight * d * d;
    }
    return sum;
}

double inner_product(const WeightedGraph &g, std::span<const double> f, std::span<const double> h) {
    double sum = 0.0;
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        sum += f[x] * h[x] * g.measure(x);
    return sum;
}

double norm1(const WeightedGraph &g, std::span<const double> f) {
    double sum = 0.0;
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        sum += std::abs(f[x]) * g.measure(x);
    return sum;
}

double norm2(const WeightedGraph &g, std::span<const double> f) { return std::sqrt(inner_product(g, f, f)); }

double rayleigh_quotient(const WeightedGraph &g, std::span<const double> f) {
    return dirichlet_energy(g, f) / inner_product(g, f, f);
}

namespace {

// phi is the symmetrised unit vector on A; returns (Rayleigh quotient, residual norm).
std::pair<double, double> symmetric_rq(const DirichletLaplacian &lap, const Eigen::VectorXd &sqrt_mu,
                                       const Eigen::VectorXd &phi) {
    // M phi = D^{-1/2} L_A D^{-1/2} phi
    Eigen::VectorXd y = phi.cwiseQuotient(sqrt_mu);
    Eigen::VectorXd m_phi = (lap.matrix() * y).cwiseQuotient(sqrt_mu);
    const double rq = phi.dot(m_phi) / phi.squaredNorm();
    const double res = (m_phi - rq * phi).norm() / phi.norm();
    return {rq, res};
}

} // namespace

EigenResult lambda_min(const WeightedGraph &g, const VertexSet &a, const SpectralOptions &options) {
    if (a.empty())
        throw Error(ErrorKind::EmptySet, "lambda of an empty set");
    if (a.size() >= g.vertex_count())
        throw Error(ErrorKind::WholeGraph, "lambda of the whole finite graph is zero");

    DirichletLaplacian lap(g, a);
    const std::size_t n = lap.size();
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::VectorXd sqrt_mu = lap.measure_vector().cwiseSqrt();

    Eigen::VectorXd phi(ni);
    if (n <= options.dense_limit) {
        Eigen::MatrixXd m = Eigen::MatrixXd(lap.matrix());
        for (Eigen::Index i = 0; i < ni; ++i)
            for (Eigen::Index j = 0; j < ni; ++j)
                m(i, j) /= sqrt_mu[i] * sqrt_mu[j];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        if (solver.info() != Eigen::Success)
            throw Error(ErrorKind::SolverFailure, "dense eigensolver failed");
        phi = solver.eigenvectors().col(0);
    } else {
        // Shifted inverse iteration with shift 0: M^{-1} = D^{1/2} L_A^{-1} D^{1/2}.
        phi = Eigen::VectorXd::Ones(ni) / std::sqrt(static_cast<double>(n));
        double previous = std::numeric_limits<double>::infinity();
        bool converged = false;
        for (int it = 0; it < options.max_iterations; ++it) {
            Eigen::VectorXd next = lap.solve(phi.cwiseProduct(sqrt_mu)).cwiseProduct(sqrt_mu);
            phi = next / next.norm();
            auto [rq, res] = symmetric_rq(lap, sqrt_mu, phi);
            if (std::abs(rq - previous) <= options.tolerance * rq && res <= 1e-10 * rq) {
                converged = true;
                break;
            }
            previous = rq;
        }
        if (!converged)
            throw Error(ErrorKind::SolverFailure, "inverse iteration did not converge");
    }
    if (phi.sum() < 0)
        phi = -phi;

    auto [rq, res] = symmetric_rq(lap, sqrt_mu, phi);
    EigenResult result;
    result.value = rq;
    result.residual = res;
    result.certified_interval = {rq - res, rq};
    result.vector.assign(g.vertex_count(), 0.0);
    const double scale = 1.0 / phi.norm();
    for (std::size_t i = 0; i < n; ++i)
        result.vector[lap.global(i)] = scale * phi[static_cast<Eigen::Index>(i)] / sqrt_mu[static_cast<Eigen::Index>(i)];
    return result;
}

NashCheck nash_check(const WeightedGraph &g, std::span<const double> f, double a, double c, double delta) {
    for (double v : f)
        if (v < 0)
            throw Error(ErrorKind::BadParameter, "Nash check needs a nonnegative function");
    NashCheck check;
    const double l1 = norm1(g, f);
    const double l2sq = inner_product(g, f, f);
    if (l1 == 0.0)
        throw Error(ErrorKind::BadParameter, "Nash check needs a nonzero function");

    check.lhs = l2sq * std::pow(std::sqrt(l2sq) / l1, 2.0 * delta);
    check.rhs = 2.0 * std::pow(4.0, delta) * a * c * dirichlet_energy(g, f);
    check.level = l2sq / (4.0 * l1);
    std::vector<VertexId> above;
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        if (f[x] > check.level)
            above.push_back(x);
    check.level_set = VertexSet(std::move(above));
    if (check.level_set.size() < g.vertex_count()) {
        const double lam = lambda_min(g, check.level_set).value;
        check.hypothesis_ratio = 1.0 / (lam * a * std::pow(check.level_set.measure(g), delta));
        check.hypothesis_holds = check.hypothesis_ratio <= c * (1 + 1e-12);
    } else {
        check.hypothesis_ratio = std::numeric_limits<double>::infinity();
    }
    check.holds = check.lhs <= check.rhs * (1 + 1e-6);
    return check;
}

} // namespace heatlab
