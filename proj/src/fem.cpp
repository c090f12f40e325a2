#include "fpflow/fem.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>
#include <thread>

namespace fpflow {

// ---------------------------------------------------------------------------
// Quadrature.
// ---------------------------------------------------------------------------

const std::array<TriQP, 6>& tri_quadrature_deg4() {
    // Two symmetric orbits, exact for polynomials of degree 4.
    static const std::array<TriQP, 6> rule = [] {
        const double a1 = 0.445948490915965, w1 = 0.223381589678011;
        const double a2 = 0.091576213509771, w2 = 0.109951743655322;
        std::array<TriQP, 6> r{};
        r[0] = {1.0 - 2.0 * a1, a1, a1, w1};
        r[1] = {a1, 1.0 - 2.0 * a1, a1, w1};
        r[2] = {a1, a1, 1.0 - 2.0 * a1, w1};
        r[3] = {1.0 - 2.0 * a2, a2, a2, w2};
        r[4] = {a2, 1.0 - 2.0 * a2, a2, w2};
        r[5] = {a2, a2, 1.0 - 2.0 * a2, w2};
        return r;
    }();
    return rule;
}

const std::array<EdgeQP, 3>& edge_quadrature_gauss3() {
    static const std::array<EdgeQP, 3> rule = [] {
        const double s = 0.5 * std::sqrt(3.0 / 5.0);
        std::array<EdgeQP, 3> r{};
        r[0] = {0.5 - s, 5.0 / 18.0};
        r[1] = {0.5, 8.0 / 18.0};
        r[2] = {0.5 + s, 5.0 / 18.0};
        return r;
    }();
    return rule;
}

// ---------------------------------------------------------------------------
// Shape functions.
// ---------------------------------------------------------------------------

void p2_shape_values(double l1, double l2, double l3, double N[6]) {
    N[0] = l1 * (2.0 * l1 - 1.0);
    N[1] = l2 * (2.0 * l2 - 1.0);
    N[2] = l3 * (2.0 * l3 - 1.0);
    N[3] = 4.0 * l1 * l2;
    N[4] = 4.0 * l2 * l3;
    N[5] = 4.0 * l3 * l1;
}

void p2_shape_gradients_ref(double l1, double l2, double l3, double dN[6][2]) {
    // Reference coordinates: l2 = xi, l3 = eta, l1 = 1 - xi - eta.
    const double g1[2] = {-1.0, -1.0};
    const double g2[2] = {1.0, 0.0};
    const double g3[2] = {0.0, 1.0};
    for (int k = 0; k < 2; ++k) {
        dN[0][k] = (4.0 * l1 - 1.0) * g1[k];
        dN[1][k] = (4.0 * l2 - 1.0) * g2[k];
        dN[2][k] = (4.0 * l3 - 1.0) * g3[k];
        dN[3][k] = 4.0 * (l2 * g1[k] + l1 * g2[k]);
        dN[4][k] = 4.0 * (l3 * g2[k] + l2 * g3[k]);
        dN[5][k] = 4.0 * (l1 * g3[k] + l3 * g1[k]);
    }
}

TriGeom TriGeom::from(const std::array<Vec2, 3>& coords) {
    TriGeom g;
    g.p0 = coords[0];
    const Vec2 e1 = coords[1] - coords[0];
    const Vec2 e2 = coords[2] - coords[0];
    g.jac = Ten2(e1.x, e2.x, e1.y, e2.y);
    const double det = g.jac.det();
    if (!(det > 0.0)) throw invalid_model_data("triangle is degenerate or clockwise");
    g.jac_inv_t = g.jac.inverse().transpose();
    g.area = 0.5 * det;
    return g;
}

Vec2 TriGeom::point(double l1, double l2, double l3) const {
    (void)l1;
    return p0 + jac * Vec2{l2, l3};
}

namespace {

/// Physical gradients of the six quadratic shapes at a barycentric point.
void p2_gradients_phys(const TriGeom& g, double l1, double l2, double l3,
                       Vec2 grad[6]) {
    double dN[6][2];
    p2_shape_gradients_ref(l1, l2, l3, dN);
    for (int i = 0; i < 6; ++i) grad[i] = g.jac_inv_t * Vec2{dN[i][0], dN[i][1]};
}

std::uint64_t edge_key(int a, int b) {
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (hi << 32) | lo;
}

}  // namespace

// ---------------------------------------------------------------------------
// DofMap.
// ---------------------------------------------------------------------------

int DofMap::midpoint_node(int va, int vb) const {
    const auto it = edge_mid_.find(edge_key(va, vb));
    if (it == edge_mid_.end()) throw invalid_model_data("edge has no midpoint node");
    return it->second;
}

int DofMap::pressure_dof_by_index(Region r, int index) const {
    const auto& map = (r == Region::free_flow) ? pres_node_free : pres_node_por;
    for (int v = 0; v < n_vertices; ++v)
        if (map[v] == index)
            return r == Region::free_flow ? pfree_dof(v) : ppor_dof(v);
    throw invalid_model_data("pressure node index out of range");
}

DofMap build_dof_map(const Mesh& mesh) {
    DofMap d;
    d.n_vertices = static_cast<int>(mesh.vertices.size());
    d.node_pos = mesh.vertices;

    // Midpoint nodes for every triangle edge.
    d.tri_nodes.resize(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        std::array<int, 6> nodes{tr.v[0], tr.v[1], tr.v[2], -1, -1, -1};
        const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
        for (int e = 0; e < 3; ++e) {
            const int va = tr.v[pairs[e][0]], vb = tr.v[pairs[e][1]];
            const auto key = edge_key(va, vb);
            auto it = d.edge_mid_.find(key);
            if (it == d.edge_mid_.end()) {
                const int id = static_cast<int>(d.node_pos.size());
                d.node_pos.push_back((mesh.vertices[va] + mesh.vertices[vb]) * 0.5);
                it = d.edge_mid_.emplace(key, id).first;
            }
            nodes[3 + e] = it->second;
        }
        d.tri_nodes[t] = nodes;
    }

    const int n_nodes = static_cast<int>(d.node_pos.size());
    d.vel_node_free.assign(n_nodes, -1);
    d.vel_node_por.assign(n_nodes, -1);
    d.pres_node_free.assign(d.n_vertices, -1);
    d.pres_node_por.assign(d.n_vertices, -1);
    d.lambda_node.assign(d.n_vertices, -1);

    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        auto& vel = mesh.triangles[t].region == Region::free_flow ? d.vel_node_free
                                                                  : d.vel_node_por;
        auto& pres = mesh.triangles[t].region == Region::free_flow ? d.pres_node_free
                                                                   : d.pres_node_por;
        for (int k = 0; k < 6; ++k) vel[d.tri_nodes[t][k]] = 0;
        for (int k = 0; k < 3; ++k) pres[mesh.triangles[t].v[k]] = 0;
    }
    for (const auto& e : mesh.interface_edges) {
        d.lambda_node[e.a] = 0;
        d.lambda_node[e.b] = 0;
    }

    const auto enumerate = [](std::vector<int>& map) {
        int count = 0;
        for (auto& m : map)
            if (m == 0) m = count++;
        return count;
    };
    d.n_vel_free = enumerate(d.vel_node_free);
    d.n_vel_por = enumerate(d.vel_node_por);
    d.n_pres_free = enumerate(d.pres_node_free);
    d.n_pres_por = enumerate(d.pres_node_por);
    d.n_lambda = enumerate(d.lambda_node);

    d.off_v_por_ = 2 * d.n_vel_free;
    d.off_p_free_ = d.off_v_por_ + 2 * d.n_vel_por;
    d.off_p_por_ = d.off_p_free_ + d.n_pres_free;
    d.off_lambda_ = d.off_p_por_ + d.n_pres_por;
    d.total_dofs = d.off_lambda_ + d.n_lambda;

    d.perm.resize(d.total_dofs);
    std::iota(d.perm.begin(), d.perm.end(), 0);

    // Flag velocity dofs on velocity-prescribed walls.
    d.velocity_constrained.assign(d.total_dofs, 0);
    for (const auto& be : mesh.boundary_edges) {
        if (!is_velocity_tag(be.tag)) continue;
        const Region r = region_of_tag(be.tag);
        const int nodes[3] = {be.a, be.b, d.midpoint_node(be.a, be.b)};
        for (int node : nodes)
            for (int c = 0; c < 2; ++c) d.velocity_constrained[d.vel_dof(r, node, c)] = 1;
    }
    return d;
}

DofMap build_dof_map(const Mesh& mesh, std::uint64_t permutation_seed) {
    DofMap d = build_dof_map(mesh);
    std::mt19937_64 rng(permutation_seed);
    std::shuffle(d.perm.begin(), d.perm.end(), rng);
    // Re-derive constraint flags under the new indices.
    d.velocity_constrained.assign(d.total_dofs, 0);
    for (const auto& be : mesh.boundary_edges) {
        if (!is_velocity_tag(be.tag)) continue;
        const Region r = region_of_tag(be.tag);
        const int nodes[3] = {be.a, be.b, d.midpoint_node(be.a, be.b)};
        for (int node : nodes)
            for (int c = 0; c < 2; ++c) d.velocity_constrained[d.vel_dof(r, node, c)] = 1;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Element matrices.
// ---------------------------------------------------------------------------

Eigen::Matrix<double, 12, 12> stokes_viscous_element(const std::array<Vec2, 3>& coords,
                                                     double mu) {
    const TriGeom g = TriGeom::from(coords);
    Eigen::Matrix<double, 12, 12> K = Eigen::Matrix<double, 12, 12>::Zero();
    Vec2 grad[6];
    for (const auto& qp : tri_quadrature_deg4()) {
        p2_gradients_phys(g, qp.l1, qp.l2, qp.l3, grad);
        const double s = qp.w * g.area * mu;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                const double gij = grad[i].dot(grad[j]);
                const double gi[2] = {grad[i].x, grad[i].y};
                const double gj[2] = {grad[j].x, grad[j].y};
                for (int c = 0; c < 2; ++c)
                    for (int e = 0; e < 2; ++e) {
                        // 2 mu D(phi_i e_c) : D(phi_j e_e)
                        const double val = s * ((c == e ? gij : 0.0) + gi[e] * gj[c]);
                        K(2 * i + c, 2 * j + e) += val;
                    }
            }
    }
    return K;
}

Eigen::Matrix<double, 12, 12> porous_drag_element(const std::array<Vec2, 3>& coords,
                                                  double mu, const Ten2& K_inv) {
    const TriGeom g = TriGeom::from(coords);
    Eigen::Matrix<double, 12, 12> M = Eigen::Matrix<double, 12, 12>::Zero();
    const double Ki[2][2] = {{K_inv.a00, K_inv.a01}, {K_inv.a10, K_inv.a11}};
    double N[6];
    for (const auto& qp : tri_quadrature_deg4()) {
        p2_shape_values(qp.l1, qp.l2, qp.l3, N);
        const double s = qp.w * g.area * mu;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                const double nn = s * N[i] * N[j];
                for (int c = 0; c < 2; ++c)
                    for (int e = 0; e < 2; ++e) M(2 * i + c, 2 * j + e) += nn * Ki[c][e];
            }
    }
    return M;
}

Eigen::Matrix<double, 12, 3> divergence_coupling_element(const std::array<Vec2, 3>& coords) {
    const TriGeom g = TriGeom::from(coords);
    Eigen::Matrix<double, 12, 3> B = Eigen::Matrix<double, 12, 3>::Zero();
    Vec2 grad[6];
    for (const auto& qp : tri_quadrature_deg4()) {
        p2_gradients_phys(g, qp.l1, qp.l2, qp.l3, grad);
        const double lin[3] = {qp.l1, qp.l2, qp.l3};
        const double s = qp.w * g.area;
        for (int i = 0; i < 6; ++i) {
            const double gi[2] = {grad[i].x, grad[i].y};
            for (int j = 0; j < 3; ++j)
                for (int c = 0; c < 2; ++c) B(2 * i + c, j) += -s * lin[j] * gi[c];
        }
    }
    return B;
}

// ---------------------------------------------------------------------------
// Region assembly.
// ---------------------------------------------------------------------------

namespace {

struct ElementBatch {
    std::vector<Eigen::Triplet<double>> trips;
    std::vector<std::pair<int, double>> rhs;
};

/// Computes batches for items [0, n) in parallel but appends them to the
/// builder in item order, so the result is identical for any thread count.
template <class Compute>
void ordered_assemble(int n_items, int threads, SystemBuilder& sys, Compute&& compute) {
    if (threads <= 1) {
        ElementBatch batch;
        for (int i = 0; i < n_items; ++i) {
            batch.trips.clear();
            batch.rhs.clear();
            compute(i, batch);
            for (const auto& t : batch.trips) sys.triplets.push_back(t);
            for (const auto& [r, v] : batch.rhs) sys.rhs[r] += v;
        }
        return;
    }
    std::vector<ElementBatch> batches(n_items);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int n_workers = std::min(threads, n_items > 0 ? n_items : 1);
    for (int w = 0; w < n_workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_items; i = next.fetch_add(1))
                compute(i, batches[i]);
        });
    for (auto& th : pool) th.join();
    for (const auto& batch : batches) {
        for (const auto& t : batch.trips) sys.triplets.push_back(t);
        for (const auto& [r, v] : batch.rhs) sys.rhs[r] += v;
    }
}

std::array<Vec2, 3> tri_coords(const Mesh& mesh, int t) {
    const auto& tr = mesh.triangles[t];
    return {mesh.vertices[tr.v[0]], mesh.vertices[tr.v[1]], mesh.vertices[tr.v[2]]};
}

void assemble_region_block(const Mesh& mesh, const DofMap& dofs, const ModelConfig& config,
                           Region region, SystemBuilder& sys, int threads) {
    std::vector<int> elems;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        if (mesh.triangles[t].region == region) elems.push_back(static_cast<int>(t));

    const bool porous = region == Region::porous;
    const double mu = config.fluid.mu;
    const Ten2 K_inv = porous ? config.porous.K_inverse() : Ten2::identity();
    const Vec2 body = porous ? config.body_force_por : config.body_force_free;
    const double body_weight =
        porous ? config.fluid.gamma * config.porous.phi : config.fluid.gamma;

    ordered_assemble(
        static_cast<int>(elems.size()), threads, sys,
        [&](int idx, ElementBatch& batch) {
            const int t = elems[idx];
            const auto coords = tri_coords(mesh, t);
            const auto& nodes = dofs.tri_nodes[t];
            const auto& verts = mesh.triangles[t].v;

            int vdof[12];
            for (int i = 0; i < 6; ++i)
                for (int c = 0; c < 2; ++c) vdof[2 * i + c] = dofs.vel_dof(region, nodes[i], c);
            int pdof[3];
            for (int j = 0; j < 3; ++j) pdof[j] = dofs.pres_dof(region, verts[j]);

            Eigen::Matrix<double, 12, 12> Ke = stokes_viscous_element(coords, mu);
            if (porous) Ke += porous_drag_element(coords, mu, K_inv);
            const Eigen::Matrix<double, 12, 3> Be = divergence_coupling_element(coords);

            for (int a = 0; a < 12; ++a)
                for (int b = 0; b < 12; ++b)
                    if (Ke(a, b) != 0.0) batch.trips.emplace_back(vdof[a], vdof[b], Ke(a, b));
            for (int a = 0; a < 12; ++a)
                for (int j = 0; j < 3; ++j)
                    if (Be(a, j) != 0.0) {
                        batch.trips.emplace_back(vdof[a], pdof[j], Be(a, j));
                        batch.trips.emplace_back(pdof[j], vdof[a], Be(a, j));
                    }

            if (body.x != 0.0 || body.y != 0.0) {
                const TriGeom g = TriGeom::from(coords);
                double N[6];
                for (const auto& qp : tri_quadrature_deg4()) {
                    p2_shape_values(qp.l1, qp.l2, qp.l3, N);
                    const double s = qp.w * g.area * body_weight;
                    for (int i = 0; i < 6; ++i) {
                        batch.rhs.emplace_back(vdof[2 * i], s * N[i] * body.x);
                        batch.rhs.emplace_back(vdof[2 * i + 1], s * N[i] * body.y);
                    }
                }
            }
        });

    // Prescribed tractions on this region's traction walls.
    const BoundaryTag t_tag = porous ? BoundaryTag::por_t : BoundaryTag::free_t;
    const VectorField& traction = porous ? config.traction_por : config.traction_free;
    for (const auto& be : mesh.boundary_edges) {
        if (be.tag != t_tag) continue;
        const Vec2 pa = mesh.vertices[be.a], pb = mesh.vertices[be.b];
        const double len = (pb - pa).norm();
        const int mid = dofs.midpoint_node(be.a, be.b);
        const int edge_nodes[3] = {be.a, be.b, mid};
        for (const auto& qp : edge_quadrature_gauss3()) {
            const Vec2 pos = pa + (pb - pa) * qp.t;
            const Vec2 tp = traction(pos);
            const double S[3] = {(1.0 - qp.t) * (1.0 - 2.0 * qp.t),
                                 qp.t * (2.0 * qp.t - 1.0), 4.0 * qp.t * (1.0 - qp.t)};
            const double s = qp.w * len;
            for (int i = 0; i < 3; ++i) {
                sys.add_rhs(dofs.vel_dof(region, edge_nodes[i], 0), s * S[i] * tp.x);
                sys.add_rhs(dofs.vel_dof(region, edge_nodes[i], 1), s * S[i] * tp.y);
            }
        }
    }
}

}  // namespace

void assemble_free_block(const Mesh& mesh, const DofMap& dofs, const ModelConfig& config,
                         SystemBuilder& sys, int threads) {
    assemble_region_block(mesh, dofs, config, Region::free_flow, sys, threads);
}

void assemble_porous_block(const Mesh& mesh, const DofMap& dofs, const ModelConfig& config,
                           SystemBuilder& sys, int threads) {
    assemble_region_block(mesh, dofs, config, Region::porous, sys, threads);
}

void assemble_interface_block(const Mesh& mesh, const DofMap& dofs,
                              const ModelConfig& config, SystemBuilder& sys) {
    const InterfaceLaw& law = config.law;
    for (const auto& e : mesh.interface_edges) {
        const Vec2 pa = mesh.vertices[e.a], pb = mesh.vertices[e.b];
        const double len = (pb - pa).norm();
        const Vec2 n = e.normal_free;
        // Tangential projector I - n n^T (the same from both sides).
        const double P[2][2] = {{1.0 - n.x * n.x, -n.x * n.y},
                                {-n.x * n.y, 1.0 - n.y * n.y}};
        const double nf[2] = {n.x, n.y};

        const int mid = dofs.midpoint_node(e.a, e.b);
        const int edge_nodes[3] = {e.a, e.b, mid};
        int vf[6], vp[6];
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < 2; ++c) {
                vf[2 * i + c] = dofs.vfree_dof(edge_nodes[i], c);
                vp[2 * i + c] = dofs.vpor_dof(edge_nodes[i], c);
            }
        const int lam[2] = {dofs.lambda_dof(e.a), dofs.lambda_dof(e.b)};

        for (const auto& qp : edge_quadrature_gauss3()) {
            const double S[3] = {(1.0 - qp.t) * (1.0 - 2.0 * qp.t),
                                 qp.t * (2.0 * qp.t - 1.0), 4.0 * qp.t * (1.0 - qp.t)};
            const double L[2] = {1.0 - qp.t, qp.t};
            const double s = qp.w * len;

            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double ss = s * S[i] * S[j];
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d) {
                            if (law.a11 != 0.0)
                                sys.add(vf[2 * i + c], vf[2 * j + d],
                                        ss * 2.0 * law.a11 * P[c][d]);
                            if (law.a12 != 0.0) {
                                sys.add(vf[2 * i + c], vp[2 * j + d],
                                        ss * 2.0 * law.a12 * P[c][d]);
                                sys.add(vp[2 * i + c], vf[2 * j + d],
                                        ss * 2.0 * law.a12 * P[c][d]);
                            }
                            if (law.a22 != 0.0)
                                sys.add(vp[2 * i + c], vp[2 * j + d],
                                        ss * 2.0 * law.a22 * P[c][d]);
                            if (law.beta != 0.0)
                                sys.add(vf[2 * i + c], vf[2 * j + d],
                                        ss * 2.0 * law.beta * nf[c] * nf[d]);
                        }
                }

            // Multiplier rows: -int m (w_f . nf + w_p . np), np = -nf.
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 2; ++k) {
                    const double sl = s * S[i] * L[k];
                    for (int c = 0; c < 2; ++c) {
                        const double cf = -sl * nf[c];
                        const double cp = sl * nf[c];
                        sys.add(vf[2 * i + c], lam[k], cf);
                        sys.add(lam[k], vf[2 * i + c], cf);
                        sys.add(vp[2 * i + c], lam[k], cp);
                        sys.add(lam[k], vp[2 * i + c], cp);
                    }
                }
        }
    }
}

// ---------------------------------------------------------------------------
// Boundary conditions and finalization.
// ---------------------------------------------------------------------------

CoupledSystem apply_velocity_bcs(const SystemBuilder& sys, const Mesh& mesh,
                                 const DofMap& dofs, const ModelConfig& config) {
    const int n = sys.n;
    std::vector<char> fixed(n, 0);
    std::vector<double> value(n, 0.0);

    auto set_constraint = [&](int dof, double v) {
        if (fixed[dof] && value[dof] != v)
            throw invalid_model_data("conflicting velocity prescriptions on the same dof");
        fixed[dof] = 1;
        value[dof] = v;
    };

    bool has_traction = false;
    for (const auto& be : mesh.boundary_edges) {
        if (!is_velocity_tag(be.tag)) {
            has_traction = true;
            continue;
        }
        const Region r = region_of_tag(be.tag);
        const VectorField& data =
            r == Region::free_flow ? config.velocity_free : config.velocity_por;
        const int nodes[3] = {be.a, be.b, dofs.midpoint_node(be.a, be.b)};
        for (int node : nodes) {
            const Vec2 v = data(dofs.node_pos[node]);
            set_constraint(dofs.vel_dof(r, node, 0), v.x);
            set_constraint(dofs.vel_dof(r, node, 1), v.y);
        }
    }

    int pinned = -1;
    if (config.pressure_pin) {
        pinned = dofs.pressure_dof_by_index(config.pressure_pin->region,
                                            config.pressure_pin->index);
    } else if (!has_traction) {
        // No traction boundary: the pressure level is free; pin one dof.
        pinned = dofs.pressure_dof_by_index(Region::free_flow, 0);
    }
    if (pinned >= 0) set_constraint(pinned, 0.0);

    CoupledSystem out;
    out.pinned_pressure_dof = pinned;
    out.has_traction_boundary = has_traction;
    out.b = sys.rhs;

    std::vector<Eigen::Triplet<double>> kept;
    kept.reserve(sys.triplets.size() + static_cast<std::size_t>(n));
    for (const auto& t : sys.triplets) {
        if (fixed[t.row()]) continue;
        if (fixed[t.col()]) {
            out.b[t.row()] -= t.value() * value[t.col()];
            continue;
        }
        kept.push_back(t);
    }
    for (int i = 0; i < n; ++i)
        if (fixed[i]) {
            kept.emplace_back(i, i, 1.0);
            out.b[i] = value[i];
            out.constrained.emplace_back(i, value[i]);
        }

    out.A.resize(n, n);
    out.A.setFromTriplets(kept.begin(), kept.end());
    out.A.makeCompressed();
    return out;
}

CoupledSystem assemble_coupled_system(const Mesh& mesh, const DofMap& dofs,
                                      const ModelConfig& config, int threads) {
    SystemBuilder sys(dofs.total_dofs);
    assemble_free_block(mesh, dofs, config, sys, threads);
    assemble_porous_block(mesh, dofs, config, sys, threads);
    assemble_interface_block(mesh, dofs, config, sys);
    return apply_velocity_bcs(sys, mesh, dofs, config);
}

Eigen::SparseMatrix<double> assemble_velocity_mass(const Mesh& mesh, const DofMap& dofs) {
    std::vector<Eigen::Triplet<double>> trips;
    double N[6];
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Region region = mesh.triangles[t].region;
        const TriGeom g = TriGeom::from(tri_coords(mesh, static_cast<int>(t)));
        const auto& nodes = dofs.tri_nodes[t];
        for (const auto& qp : tri_quadrature_deg4()) {
            p2_shape_values(qp.l1, qp.l2, qp.l3, N);
            const double s = qp.w * g.area;
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) {
                    const double m = s * N[i] * N[j];
                    for (int c = 0; c < 2; ++c)
                        trips.emplace_back(dofs.vel_dof(region, nodes[i], c),
                                           dofs.vel_dof(region, nodes[j], c), m);
                }
        }
    }
    Eigen::SparseMatrix<double> M(dofs.total_dofs, dofs.total_dofs);
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();
    return M;
}

double symmetry_defect(const Eigen::SparseMatrix<double>& A) {
    Eigen::SparseMatrix<double> D = Eigen::SparseMatrix<double>(A.transpose()) - A;
    double dmax = 0.0, amax = 0.0;
    for (int k = 0; k < D.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(D, k); it; ++it)
            dmax = std::max(dmax, std::abs(it.value()));
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            amax = std::max(amax, std::abs(it.value()));
    return amax > 0.0 ? dmax / amax : dmax;
}

// ---------------------------------------------------------------------------
// Field evaluation.
// ---------------------------------------------------------------------------

VelocitySample sample_velocity(const Mesh& mesh, const DofMap& dofs,
                               const Eigen::VectorXd& x, int tri, double l1, double l2,
                               double l3) {
    const Region region = mesh.triangles[tri].region;
    const TriGeom g = TriGeom::from(tri_coords(mesh, tri));
    const auto& nodes = dofs.tri_nodes[tri];
    double N[6];
    Vec2 grad[6];
    p2_shape_values(l1, l2, l3, N);
    p2_gradients_phys(g, l1, l2, l3, grad);

    VelocitySample s{};
    for (int i = 0; i < 6; ++i) {
        const double ux = x[dofs.vel_dof(region, nodes[i], 0)];
        const double uy = x[dofs.vel_dof(region, nodes[i], 1)];
        s.value += Vec2{ux * N[i], uy * N[i]};
        s.gradient = s.gradient + Ten2(ux * grad[i].x, ux * grad[i].y,
                                       uy * grad[i].x, uy * grad[i].y);
    }
    return s;
}

double sample_pressure(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& x,
                       int tri, double l1, double l2, double l3) {
    const Region region = mesh.triangles[tri].region;
    const auto& verts = mesh.triangles[tri].v;
    const double lin[3] = {l1, l2, l3};
    double p = 0.0;
    for (int j = 0; j < 3; ++j) p += lin[j] * x[dofs.pres_dof(region, verts[j])];
    return p;
}

double sample_lambda(const DofMap& dofs, const Eigen::VectorXd& x,
                     const InterfaceEdge& edge, double t) {
    return (1.0 - t) * x[dofs.lambda_dof(edge.a)] + t * x[dofs.lambda_dof(edge.b)];
}

std::array<double, 3> edge_point_barycentric(const Mesh& mesh, int tri, int a, int b,
                                             double t) {
    const auto& verts = mesh.triangles[tri].v;
    std::array<double, 3> l{0.0, 0.0, 0.0};
    int la = -1, lb = -1;
    for (int k = 0; k < 3; ++k) {
        if (verts[k] == a) la = k;
        if (verts[k] == b) lb = k;
    }
    if (la < 0 || lb < 0)
        throw invalid_model_data("edge endpoints are not vertices of the triangle");
    l[la] = 1.0 - t;
    l[lb] = t;
    return l;
}

}  // namespace fpflow
