#include "heatlab/dirichlet.hpp"

#include <algorithm>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "heatlab/error.hpp"

namespace heatlab {

struct DirichletLaplacian::Backend {
    std::optional<Eigen::LDLT<Eigen::MatrixXd>> dense;
    std::optional<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> direct;
    std::optional<Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                           Eigen::IncompleteCholesky<double>>>
        iterative;
};

DirichletLaplacian::DirichletLaplacian(const WeightedGraph &g, VertexSet set)
    : graph_(&g), set_(std::move(set)), backend_(std::make_unique<Backend>()) {
    if (set_.empty())
        throw Error(ErrorKind::EmptySet, "Dirichlet problem on an empty set");
    if (set_.size() == g.vertex_count())
        throw Error(ErrorKind::AbsorbingSet, "the walk never leaves the whole graph");
    for (VertexId x : set_)
        if (!g.contains(x))
            throw Error(ErrorKind::InvalidVertex, "set member out of range");

    const std::size_t n = set_.size();
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t i = 0; i < n; ++i) {
        const VertexId x = set_.members()[i];
        double diagonal = g.measure(x);
        for (const auto &nb : g.neighbours(x)) {
            if (nb.vertex == x) {
                diagonal -= nb.weight;
                continue;
            }
            if (auto j = local(nb.vertex))
                triplets.emplace_back(static_cast<int>(i), static_cast<int>(*j), -nb.weight);
        }
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), diagonal);
    }
    matrix_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.makeCompressed();

    if (n <= kDenseLimit) {
        backend_->dense.emplace(Eigen::MatrixXd(matrix_));
        if (backend_->dense->info() != Eigen::Success)
            throw Error(ErrorKind::SolverFailure, "dense LDLT failed");
    } else if (n <= kSparseDirectLimit) {
        backend_->direct.emplace(matrix_);
        if (backend_->direct->info() != Eigen::Success)
            throw Error(ErrorKind::SolverFailure, "sparse LDLT failed");
    } else {
        auto &cg = backend_->iterative.emplace();
        cg.setTolerance(1e-14);
        cg.setMaxIterations(static_cast<Eigen::Index>(20 * n));
        cg.compute(matrix_);
        if (cg.info() != Eigen::Success)
            throw Error(ErrorKind::SolverFailure, "preconditioner setup failed");
    }
}

DirichletLaplacian::~DirichletLaplacian() = default;
DirichletLaplacian::DirichletLaplacian(DirichletLaplacian &&) noexcept = default;
DirichletLaplacian &DirichletLaplacian::operator=(DirichletLaplacian &&) noexcept = default;

std::optional<std::size_t> DirichletLaplacian::local(VertexId x) const {
    auto m = set_.members();
    auto it = std::lower_bound(m.begin(), m.end(), x);
    if (it == m.end() || *it != x)
        return std::nullopt;
    return static_cast<std::size_t>(it - m.begin());
}

Eigen::VectorXd DirichletLaplacian::solve(const Eigen::VectorXd &rhs) const {
    if (backend_->dense)
        return backend_->dense->solve(rhs);
    if (backend_->direct) {
        Eigen::VectorXd u = backend_->direct->solve(rhs);
        // One step of iterative refinement keeps large ill-conditioned balls accurate.
        Eigen::VectorXd r = rhs - matrix_ * u;
        u += backend_->direct->solve(r);
        return u;
    }
    Eigen::VectorXd u = backend_->iterative->solve(rhs);
    if (backend_->iterative->info() != Eigen::Success)
        throw Error(ErrorKind::SolverFailure, "conjugate gradients did not converge");
    return u;
}

double DirichletLaplacian::residual(const Eigen::VectorXd &u, const Eigen::VectorXd &rhs) const {
    return (matrix_ * u - rhs).lpNorm<Eigen::Infinity>();
}

Eigen::VectorXd DirichletLaplacian::measure_vector() const {
    Eigen::VectorXd m(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i)
        m[static_cast<Eigen::Index>(i)] = graph_->measure(global(i));
    return m;
}

} // namespace heatlab
