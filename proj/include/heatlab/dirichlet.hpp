#pragma once

#include <memory>
#include <optional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "heatlab/graph.hpp"

namespace heatlab {

/// The weighted Dirichlet Laplacian L_A = (D - W) restricted to a finite set A.
///
/// L_A = D_A (I - P^A), so it is symmetric positive definite whenever A is a
/// proper subset of a connected graph. Factorised once on construction:
/// dense LDLT for tiny sets, sparse LDLT up to kSparseDirectLimit unknowns and
/// preconditioned conjugate gradients beyond.
class DirichletLaplacian {
public:
    static constexpr std::size_t kDenseLimit = 64;
    static constexpr std::size_t kSparseDirectLimit = 50000;

    DirichletLaplacian(const WeightedGraph &g, VertexSet set);
    ~DirichletLaplacian();
    DirichletLaplacian(DirichletLaplacian &&) noexcept;
    DirichletLaplacian &operator=(DirichletLaplacian &&) noexcept;

    const VertexSet &set() const noexcept { return set_; }
    std::size_t size() const noexcept { return set_.size(); }
    /// Position of x in the set, or nullopt.
    std::optional<std::size_t> local(VertexId x) const;
    VertexId global(std::size_t i) const { return set_.members()[i]; }

    const Eigen::SparseMatrix<double> &matrix() const noexcept { return matrix_; }

    /// Solves L_A u = rhs.
    Eigen::VectorXd solve(const Eigen::VectorXd &rhs) const;
    /// max-norm of L_A u - rhs.
    double residual(const Eigen::VectorXd &u, const Eigen::VectorXd &rhs) const;

    /// mu restricted to A, in local order.
    Eigen::VectorXd measure_vector() const;

private:
    struct Backend;
    const WeightedGraph *graph_;
    VertexSet set_;
    Eigen::SparseMatrix<double> matrix_;
    std::unique_ptr<Backend> backend_;
};

} // namespace heatlab
