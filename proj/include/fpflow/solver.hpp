#pragma once

#include <stdexcept>
#include <string>

#include "fpflow/fem.hpp"

namespace fpflow {

/// Raised when the factorization of the coupled system fails; the message
/// names the suspected cause of ill-posedness.
class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Discrete solution fields, addressed through the DofMap used to assemble.
struct Solution {
    Eigen::VectorXd x;          ///< full dof vector
    double residual_norm = 0.0; ///< |A x - b|_2 / max(|b|_2, 1)
    int pinned_pressure_dof = -1;

    Vec2 v_free(const DofMap& d, int node) const {
        return {x[d.vfree_dof(node, 0)], x[d.vfree_dof(node, 1)]};
    }
    Vec2 v_por(const DofMap& d, int node) const {
        return {x[d.vpor_dof(node, 0)], x[d.vpor_dof(node, 1)]};
    }
    double p_free(const DofMap& d, int vertex) const { return x[d.pfree_dof(vertex)]; }
    double p_por(const DofMap& d, int vertex) const { return x[d.ppor_dof(vertex)]; }
    double lambda(const DofMap& d, int vertex) const { return x[d.lambda_dof(vertex)]; }
};

/// Direct sparse solve of the symmetric indefinite system. Deterministic for
/// identical input; throws solver_error on singular factorizations.
Solution solve(const CoupledSystem& system);

/// Reusable factorization: one factorize, many right-hand sides.
class DirectSolver {
public:
    explicit DirectSolver(const CoupledSystem& system);
    Eigen::VectorXd solve_rhs(const Eigen::VectorXd& rhs) const;
    Solution solve() const;

private:
    const CoupledSystem& system_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

}  // namespace fpflow
