#pragma once

#include <cstdint>
#include <vector>

#include "fpflow/channel.hpp"
#include "fpflow/fem.hpp"
#include "fpflow/solver.hpp"

namespace fpflow {

/// Components of the total mechanical power functional evaluated on a
/// velocity field pair. phi_* are the dissipation potentials (half the
/// dissipation rate); total = phi_free + phi_por + psi_interface - external.
struct PowerBreakdown {
    double phi_free = 0.0;       ///< int mu D(v_f):D(v_f)
    double phi_por = 0.0;        ///< int [mu D(v_p):D(v_p) + 1/2 mu (K^-1 v_p).v_p]
    double psi_interface = 0.0;  ///< interface power density integral
    double external_work = 0.0;  ///< body forces and prescribed tractions
    double total = 0.0;
};

/// Evaluates the power functional for any dof vector (only velocity slots are
/// read). `refine` subdivides every triangle into refine^2 children and every
/// edge into refine segments before applying the assembly quadrature; the
/// default matches the rules used in assembly exactly.
PowerBreakdown total_power(const Eigen::VectorXd& dofs_vector, const Mesh& mesh,
                           const DofMap& dofs, const ModelConfig& config,
                           int refine = 1);

/// |phi_free| + |phi_por| + |psi| + |external|: robust magnitude for
/// normalizing derivative and gap tolerances.
double power_scale(const PowerBreakdown& p);

// ---------------------------------------------------------------------------
// Kinematically admissible perturbations.
// ---------------------------------------------------------------------------

/// Divergence-free random velocity perturbation built from per-region
/// polynomial stream functions: delta v = (dpsi/dy, -dpsi/dx). The stream
/// function vanishes on the interface line (so delta v . n = 0 on both sides,
/// with generically nonzero tangential slip) and vanishes to first order on
/// velocity walls.
class StreamPerturbation {
public:
    StreamPerturbation(const Mesh& mesh, std::uint64_t seed);

    Vec2 delta_v(Region region, Vec2 pos) const;
    /// Analytic divergence at a point (cancels to rounding).
    double divergence(Region region, Vec2 pos) const;

    /// Interpolation onto the quadratic velocity space (velocity dof slots of
    /// the full layout; constrained dofs zeroed).
    Eigen::VectorXd interpolate(const DofMap& dofs) const;

private:
    struct RegionFields {
        std::vector<double> dx_coeff, dy_coeff;  // dense monomial tables
        int n = 0;
    };
    RegionFields free_, por_;
    static RegionFields build(const Mesh& mesh, Region region, std::uint64_t seed);
};

/// Verification harness bound to one solved configuration; reuses the solved
/// system's factorization to map raw perturbations into the discrete
/// admissible set (divergence rows, interface rows and velocity constraints
/// all satisfied to solver precision).
class PowerVerifier {
public:
    PowerVerifier(const Mesh& mesh, const DofMap& dofs, const ModelConfig& config,
                  const CoupledSystem& system, const DirectSolver& solver);

    /// Discretely admissible direction with unit velocity L2 norm.
    Eigen::VectorXd admissible_direction(std::uint64_t seed) const;

    /// Quadratic part of the power functional (the Hessian form) at delta.
    double quadratic_energy(const Eigen::VectorXd& delta) const;

    struct GateauxReport {
        double h = 0.0;
        int n_dirs = 0;
        std::uint64_t seed = 0;
        double scale = 0.0;
        double max_normalized_derivative = 0.0;
        std::vector<double> per_direction;
    };
    /// Central-difference directional derivatives of the power functional at
    /// `state`, normalized by the power scale (directions have unit norm).
    GateauxReport gateaux_check(const Eigen::VectorXd& state, int n_dirs, double h,
                                std::uint64_t seed) const;

    struct MinPowerRow {
        int trial;
        double amplitude;
        double power_gap;
    };
    struct MinPowerReport {
        std::uint64_t seed = 0;
        double power_at_solution = 0.0;
        double scale = 0.0;
        double tol_abs = 0.0;
        int violations = 0;
        double slope_min = 0.0, slope_max = 0.0;
        std::vector<MinPowerRow> rows;
    };
    /// Evaluates the power gap P(v + a*delta) - P(v) for random admissible
    /// perturbations and all amplitudes; also fits the log-log growth slope
    /// per trial (exactly 2 for the quadratic functional).
    MinPowerReport minimum_power_check(const Solution& sol, int n_trials,
                                       const std::vector<double>& amplitudes,
                                       std::uint64_t seed) const;

    const Eigen::SparseMatrix<double>& velocity_mass() const { return mass_; }

private:
    const Mesh& mesh_;
    const DofMap& dofs_;
    const ModelConfig& config_;
    const CoupledSystem& system_;
    const DirectSolver& solver_;
    Eigen::SparseMatrix<double> mass_;
};

}  // namespace fpflow
