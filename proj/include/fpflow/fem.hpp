#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "fpflow/core.hpp"
#include "fpflow/mesh.hpp"

namespace fpflow {

// ---------------------------------------------------------------------------
// Quadrature (degree-4 exact on triangles, degree-5 exact on edges).
// ---------------------------------------------------------------------------

struct TriQP {
    double l1, l2, l3, w;  ///< barycentric point; weights sum to 1, scale by area
};
const std::array<TriQP, 6>& tri_quadrature_deg4();

struct EdgeQP {
    double t, w;  ///< parameter on [0,1]; weights sum to 1, scale by length
};
const std::array<EdgeQP, 3>& edge_quadrature_gauss3();

// ---------------------------------------------------------------------------
// Quadratic scalar basis on the reference triangle.
// Node order: vertices 0,1,2 then midpoints (0,1), (1,2), (2,0).
// ---------------------------------------------------------------------------

void p2_shape_values(double l1, double l2, double l3, double N[6]);
void p2_shape_gradients_ref(double l1, double l2, double l3, double dN[6][2]);

/// Affine geometry of one triangle: maps reference gradients to physical ones.
struct TriGeom {
    Vec2 p0;
    Ten2 jac;       ///< columns are the two edge vectors
    Ten2 jac_inv_t; ///< inverse transpose, for gradient push-forward
    double area;

    static TriGeom from(const std::array<Vec2, 3>& coords);
    Vec2 point(double l1, double l2, double l3) const;
};

// ---------------------------------------------------------------------------
// Degrees of freedom.
// ---------------------------------------------------------------------------

/// Node and dof layout for the coupled problem. Velocities are quadratic
/// (vertex + edge-midpoint nodes, two components), pressures linear, and the
/// interface multiplier linear on interface vertices. Each region owns its
/// velocity/pressure dofs; interface nodes carry one set per side.
///
/// The natural block order is [v_free | v_por | p_free | p_por | lambda];
/// an optional seeded permutation remaps all indices (assembly and solves go
/// through the map, so results must not depend on the permutation).
struct DofMap {
    // Geometric nodes: mesh vertices first, then edge midpoints.
    std::vector<Vec2> node_pos;
    std::vector<std::array<int, 6>> tri_nodes;  ///< per triangle: 3 vertices + 3 midpoints
    int n_vertices = 0;

    std::vector<int> vel_node_free;   ///< geometric node -> velocity node slot or -1
    std::vector<int> vel_node_por;
    std::vector<int> pres_node_free;  ///< vertex -> pressure slot or -1
    std::vector<int> pres_node_por;
    std::vector<int> lambda_node;     ///< vertex -> multiplier slot or -1

    int n_vel_free = 0, n_vel_por = 0;
    int n_pres_free = 0, n_pres_por = 0;
    int n_lambda = 0;
    int total_dofs = 0;

    std::vector<int> perm;  ///< natural index -> dof index (identity by default)
    std::vector<char> velocity_constrained;  ///< by dof index; set for nodes on velocity walls

    int vfree_dof(int node, int comp) const {
        return perm[2 * vel_node_free[node] + comp];
    }
    int vpor_dof(int node, int comp) const {
        return perm[off_v_por_ + 2 * vel_node_por[node] + comp];
    }
    int pfree_dof(int vertex) const { return perm[off_p_free_ + pres_node_free[vertex]]; }
    int ppor_dof(int vertex) const { return perm[off_p_por_ + pres_node_por[vertex]]; }
    int lambda_dof(int vertex) const { return perm[off_lambda_ + lambda_node[vertex]]; }

    int vel_dof(Region r, int node, int comp) const {
        return r == Region::free_flow ? vfree_dof(node, comp) : vpor_dof(node, comp);
    }
    int pres_dof(Region r, int vertex) const {
        return r == Region::free_flow ? pfree_dof(vertex) : ppor_dof(vertex);
    }

    int midpoint_node(int va, int vb) const;

    /// Pressure dof for the i-th pressure node (natural enumeration) of a region.
    int pressure_dof_by_index(Region r, int index) const;

    int off_v_por_ = 0, off_p_free_ = 0, off_p_por_ = 0, off_lambda_ = 0;
    std::unordered_map<std::uint64_t, int> edge_mid_;
};

DofMap build_dof_map(const Mesh& mesh);
/// Same layout with a seeded random permutation applied to every dof index.
DofMap build_dof_map(const Mesh& mesh, std::uint64_t permutation_seed);

// ---------------------------------------------------------------------------
// Model configuration.
// ---------------------------------------------------------------------------

using VectorField = std::function<Vec2(Vec2)>;

inline VectorField zero_field() {
    return [](Vec2) { return Vec2{0.0, 0.0}; };
}

/// Requests pinning the pressure dof of the index-th pressure node of a region
/// to zero; used when no traction boundary fixes the pressure level.
struct PressurePin {
    Region region = Region::free_flow;
    int index = 0;
};

struct ModelConfig {
    ModelConfig(FluidProps f, PorousProps p, InterfaceLaw l)
        : fluid(f), porous(p), law(l) {}

    FluidProps fluid;
    PorousProps porous;
    InterfaceLaw law;

    Vec2 body_force_free{0.0, 0.0};
    Vec2 body_force_por{0.0, 0.0};

    VectorField velocity_free = zero_field();  ///< data on free_v walls
    VectorField velocity_por = zero_field();   ///< data on por_v walls
    VectorField traction_free = zero_field();  ///< data on free_t walls
    VectorField traction_por = zero_field();   ///< data on por_t walls

    /// Explicit pressure-pin choice; when absent and no traction boundary
    /// exists, the first free-region pressure node is pinned to zero.
    std::optional<PressurePin> pressure_pin;
};

// ---------------------------------------------------------------------------
// Assembly.
// ---------------------------------------------------------------------------

/// Accumulates matrix triplets and the right-hand side before constraints.
struct SystemBuilder {
    int n = 0;
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs;

    explicit SystemBuilder(int n_dofs) : n(n_dofs), rhs(Eigen::VectorXd::Zero(n_dofs)) {}
    void add(int r, int c, double v) { triplets.emplace_back(r, c, v); }
    void add_rhs(int r, double v) { rhs[r] += v; }
};

/// Stokes block on the free region: 2 mu D(u):D(w), the pressure/divergence
/// coupling, body force and prescribed tractions on free_t walls.
void assemble_free_block(const Mesh& mesh, const DofMap& dofs, const ModelConfig& config,
                         SystemBuilder& sys, int threads = 1);

/// Darcy-Brinkman block on the porous region: Stokes-type terms plus the
/// drag term mu (K^-1 u).w; body force weighted by gamma*phi.
void assemble_porous_block(const Mesh& mesh, const DofMap& dofs, const ModelConfig& config,
                           SystemBuilder& sys, int threads = 1);

/// Interface terms: tangential coupling from the power-density gradients, the
/// normal beta term, and the multiplier rows enforcing normal-velocity
/// continuity. With the sign convention used here the multiplier approximates
/// nf.T_free nf + 2 beta vn = np.T_por np on the interface.
void assemble_interface_block(const Mesh& mesh, const DofMap& dofs,
                              const ModelConfig& config, SystemBuilder& sys);

struct CoupledSystem {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    std::vector<std::pair<int, double>> constrained;  ///< (dof, prescribed value)
    int pinned_pressure_dof = -1;
    bool has_traction_boundary = false;
};

/// Symmetric elimination of prescribed velocity dofs (row/column zeroing with
/// unit diagonal and right-hand-side lift), plus the pressure pin when no
/// traction boundary provides a datum.
CoupledSystem apply_velocity_bcs(const SystemBuilder& sys, const Mesh& mesh,
                                 const DofMap& dofs, const ModelConfig& config);

/// Full pipeline: all three blocks then boundary conditions.
CoupledSystem assemble_coupled_system(const Mesh& mesh, const DofMap& dofs,
                                      const ModelConfig& config, int threads = 1);

/// Velocity-block mass matrix (both regions) on the full dof layout.
Eigen::SparseMatrix<double> assemble_velocity_mass(const Mesh& mesh, const DofMap& dofs);

// Element matrices on velocity dof order (node i, component c) -> 2i + c.
Eigen::Matrix<double, 12, 12> stokes_viscous_element(const std::array<Vec2, 3>& coords,
                                                     double mu);
Eigen::Matrix<double, 12, 12> porous_drag_element(const std::array<Vec2, 3>& coords,
                                                  double mu, const Ten2& K_inv);
/// Entries of -int p div(w) for p in P1 (columns) and w in P2 x P2 (rows).
Eigen::Matrix<double, 12, 3> divergence_coupling_element(const std::array<Vec2, 3>& coords);

/// Max-norm symmetry defect |A - A^T|_max / |A|_max.
double symmetry_defect(const Eigen::SparseMatrix<double>& A);

// ---------------------------------------------------------------------------
// Field evaluation on the discrete spaces.
// ---------------------------------------------------------------------------

struct VelocitySample {
    Vec2 value;
    Ten2 gradient;  ///< grad v, row i = component i
};

VelocitySample sample_velocity(const Mesh& mesh, const DofMap& dofs,
                               const Eigen::VectorXd& x, int tri, double l1, double l2,
                               double l3);
double sample_pressure(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& x,
                       int tri, double l1, double l2, double l3);
double sample_lambda(const DofMap& dofs, const Eigen::VectorXd& x,
                     const InterfaceEdge& edge, double t);

/// Barycentric coordinates inside triangle `tri` of the point at parameter t
/// along the oriented segment a->b (both must be vertices of the triangle).
std::array<double, 3> edge_point_barycentric(const Mesh& mesh, int tri, int a, int b,
                                             double t);

}  // namespace fpflow
