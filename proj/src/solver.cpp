#include "fpflow/solver.hpp"

namespace fpflow {

namespace {
std::string diagnose(const CoupledSystem& system) {
    std::string msg = "ill-posed configuration: sparse factorization failed";
    if (!system.has_traction_boundary && system.pinned_pressure_dof < 0)
        msg += " (suspected cause: no pressure datum; add a traction boundary or a pressure pin)";
    else if (system.constrained.empty())
        msg += " (suspected cause: zero-measure velocity boundary with no traction data;"
               " rigid motions are uncontrolled)";
    else
        msg += " (suspected cause: insufficient boundary data or degenerate coefficients)";
    return msg;
}
}  // namespace

DirectSolver::DirectSolver(const CoupledSystem& system) : system_(system) {
    lu_.analyzePattern(system.A);
    lu_.factorize(system.A);
    if (lu_.info() != Eigen::Success) throw solver_error(diagnose(system));
}

Eigen::VectorXd DirectSolver::solve_rhs(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success) throw solver_error("sparse back-substitution failed");
    return x;
}

Solution DirectSolver::solve() const {
    Solution s;
    s.x = solve_rhs(system_.b);
    s.residual_norm =
        (system_.A * s.x - system_.b).norm() / std::max(system_.b.norm(), 1.0);
    s.pinned_pressure_dof = system_.pinned_pressure_dof;
    if (!(s.residual_norm < 1e-9))
        throw solver_error(diagnose(system_) + "; relative residual " +
                           std::to_string(s.residual_norm));
    return s;
}

Solution solve(const CoupledSystem& system) { return DirectSolver(system).solve(); }

}  // namespace fpflow
