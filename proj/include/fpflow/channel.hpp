#pragma once

#include <optional>
#include <vector>

#include "fpflow/fem.hpp"
#include "fpflow/solver.hpp"

namespace fpflow {

/// Cauchy traction t = T n on a surface with unit normal n.
inline Vec2 traction(const Ten2& stress, Vec2 n) { return stress * n; }

enum class PorousModel { darcy, brinkman };

/// Pressure-gradient-driven rectilinear flow in a horizontal channel: free
/// fluid for y in (0, h), porous layer for y in (-H, 0), interface at y = 0.
/// x points right, y up, G = dP/dx (negative G drives flow in +x).
struct ChannelProblem {
    double h;  ///< free-channel height
    double H;  ///< porous-layer depth
    double G;  ///< applied pressure gradient dP/dx
    FluidProps fluid;
    PorousProps porous;  ///< isotropic permeability required
    InterfaceLaw law;
    PorousModel model = PorousModel::brinkman;
    double slip_alpha = 1.0;  ///< slip coefficient used by the darcy branch

    void validate() const;
    double k() const;  ///< isotropic permeability value
};

/// Closed-form channel profile. The darcy branch imposes the classical slip
/// relation u_B - Q = (sqrt(k)/alpha) u'(0+) directly; the brinkman branch
/// derives the slip from the interface-law coefficients.
struct ChannelSolution {
    PorousModel model;
    double h, H, G, mu, k;

    // Free region: u(y) = G/(2 mu) y^2 + A y + B.
    double coefA = 0.0, coefB = 0.0;
    // Porous region, brinkman: u(y) = u_part + C exp(y/s) + D exp(-(y+H)/s),
    // s = sqrt(k); darcy: u(y) = Q uniformly.
    double coefC = 0.0, coefD = 0.0, u_part = 0.0;

    double u_B = 0.0;              ///< slip velocity at y = 0+
    double Q = 0.0;                ///< Darcy discharge (deep-porous value)
    double dudy_interface = 0.0;   ///< u'(0+)
    double u_por_interface = 0.0;  ///< porous velocity at y = 0-

    /// Tangential porous velocity at the interface implied by the law when
    /// the porous stress has no viscous part (darcy branch only; empty when
    /// the law leaves it unconstrained).
    std::optional<double> law_porous_slip;

    /// Free branch for y >= 0, porous branch below.
    double eval(double y) const;
    double eval_dudy(double y) const;
    /// Porous-side branch, valid for y <= 0 including the interface limit 0-.
    double eval_porous(double y) const;
    double eval_dudy_porous(double y) const;

    /// Profile sampled on n uniformly spaced points across [-H, h].
    std::vector<std::pair<double, double>> sample(int n) const;
};

ChannelSolution solve_channel(const ChannelProblem& problem);

// ---------------------------------------------------------------------------
// Interface-condition residuals of a discrete solution.
// ---------------------------------------------------------------------------

struct InterfaceResidualRow {
    double x_mid;                ///< edge midpoint abscissa
    double r1, r2, r3, r4;       ///< per-edge L2 norms of the four conditions
};

struct InterfaceResiduals {
    std::vector<InterfaceResidualRow> per_edge;
    double r1_l2 = 0.0;  ///< normal-velocity jump
    double r2_l2 = 0.0;  ///< normal traction balance including the beta term
    double r3_l2 = 0.0;  ///< free-side tangential condition
    double r4_l2 = 0.0;  ///< porous-side tangential condition
    double r1_weighted_max = 0.0;  ///< max_k |int l_k (v_f.nf + v_p.np)| (multiplier test functions)
    double lambda_vs_free_normal_l2 = 0.0;  ///< |lambda - (nf.Tf nf + dPsi/dvn)|
    double lambda_vs_por_normal_l2 = 0.0;   ///< |lambda - np.Tp np|
    double slip_mean_free = 0.0;   ///< mean tangential free velocity on the interface
    double slip_mean_por = 0.0;
    double interface_length = 0.0;
};

/// Evaluates the residuals of the four interface conditions with stresses
/// reconstructed from the discrete fields (pressure from the linear nodes,
/// strain rate from the quadratic velocity gradient on each side).
InterfaceResiduals interface_residuals(const Solution& sol, const Mesh& mesh,
                                       const DofMap& dofs, const ModelConfig& config);

/// Max over pressure test functions q of |int q div(u) dOmega| within the
/// test function's region (the discrete mass-conservation rows).
double max_mass_conservation_residual(const Solution& sol, const Mesh& mesh,
                                      const DofMap& dofs);

}  // namespace fpflow
