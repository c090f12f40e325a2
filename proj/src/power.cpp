#include "fpflow/power.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fpflow {

// ---------------------------------------------------------------------------
// Power functional evaluation.
// ---------------------------------------------------------------------------

namespace {

/// P2 trace values on an edge at parameter t, node order (a, b, midpoint).
inline void edge_trace_shapes(double t, double S[3]) {
    S[0] = (1.0 - t) * (1.0 - 2.0 * t);
    S[1] = t * (2.0 * t - 1.0);
    S[2] = 4.0 * t * (1.0 - t);
}

Vec2 edge_trace_velocity(const DofMap& dofs, const Eigen::VectorXd& x, Region region,
                         const int nodes[3], double t) {
    double S[3];
    edge_trace_shapes(t, S);
    Vec2 v{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        v.x += S[i] * x[dofs.vel_dof(region, nodes[i], 0)];
        v.y += S[i] * x[dofs.vel_dof(region, nodes[i], 1)];
    }
    return v;
}

}  // namespace

PowerBreakdown total_power(const Eigen::VectorXd& x, const Mesh& mesh, const DofMap& dofs,
                           const ModelConfig& config, int refine) {
    if (refine < 1) throw invalid_model_data("quadrature refinement must be >= 1");
    PowerBreakdown p;
    const double mu = config.fluid.mu;
    const double gamma = config.fluid.gamma;
    const Ten2 K_inv = config.porous.K_inverse();
    const double r = refine;

    // Sub-triangle lattice in barycentric coordinates.
    struct Bary {
        double l1, l2, l3;
    };
    std::vector<std::array<Bary, 3>> children;
    for (int j = 0; j < refine; ++j)
        for (int i = 0; i + j < refine; ++i) {
            const auto P = [&](int a, int b) {
                return Bary{1.0 - (a + b) / r, a / r, b / r};
            };
            children.push_back({P(i, j), P(i + 1, j), P(i, j + 1)});
            if (i + j + 1 < refine)
                children.push_back({P(i + 1, j), P(i + 1, j + 1), P(i, j + 1)});
        }

    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        const bool porous = tr.region == Region::porous;
        const double area = mesh.triangle_area(static_cast<int>(t));
        const Vec2 body = porous ? config.body_force_por : config.body_force_free;
        const double body_w = porous ? gamma * config.porous.phi : gamma;
        for (const auto& child : children)
            for (const auto& qp : tri_quadrature_deg4()) {
                const double l1 = qp.l1 * child[0].l1 + qp.l2 * child[1].l1 + qp.l3 * child[2].l1;
                const double l2 = qp.l1 * child[0].l2 + qp.l2 * child[1].l2 + qp.l3 * child[2].l2;
                const double l3 = qp.l1 * child[0].l3 + qp.l2 * child[1].l3 + qp.l3 * child[2].l3;
                const double w = qp.w * area / (r * r);
                const auto u = sample_velocity(mesh, dofs, x, static_cast<int>(t), l1, l2, l3);
                const Ten2 D = u.gradient.symmetric_part();
                const double dd = D.ddot(D);
                if (porous) {
                    p.phi_por += w * (mu * dd + 0.5 * mu * (K_inv * u.value).dot(u.value));
                } else {
                    p.phi_free += w * mu * dd;
                }
                p.external_work += w * body_w * body.dot(u.value);
            }
    }

    // Interface power density.
    for (const auto& e : mesh.interface_edges) {
        const Vec2 pa = mesh.vertices[e.a], pb = mesh.vertices[e.b];
        const double len = (pb - pa).norm();
        const Vec2 n = e.normal_free;
        const int nodes[3] = {e.a, e.b, dofs.midpoint_node(e.a, e.b)};
        for (int seg = 0; seg < refine; ++seg)
            for (const auto& qp : edge_quadrature_gauss3()) {
                const double t = (seg + qp.t) / r;
                const double w = qp.w * len / r;
                const Vec2 vf = edge_trace_velocity(dofs, x, Region::free_flow, nodes, t);
                const Vec2 vp = edge_trace_velocity(dofs, x, Region::porous, nodes, t);
                const Vec2 vtf = vf - n * vf.dot(n);
                const Vec2 vtp = vp - n * vp.dot(n);
                p.psi_interface +=
                    w * interface_power_density(config.law, vtf, vtp, vf.dot(n));
            }
    }

    // Prescribed tractions.
    for (const auto& be : mesh.boundary_edges) {
        if (is_velocity_tag(be.tag)) continue;
        const Region region = region_of_tag(be.tag);
        const VectorField& traction =
            region == Region::free_flow ? config.traction_free : config.traction_por;
        const Vec2 pa = mesh.vertices[be.a], pb = mesh.vertices[be.b];
        const double len = (pb - pa).norm();
        const int nodes[3] = {be.a, be.b, dofs.midpoint_node(be.a, be.b)};
        for (int seg = 0; seg < refine; ++seg)
            for (const auto& qp : edge_quadrature_gauss3()) {
                const double t = (seg + qp.t) / r;
                const double w = qp.w * len / r;
                const Vec2 v = edge_trace_velocity(dofs, x, region, nodes, t);
                p.external_work += w * traction(pa + (pb - pa) * t).dot(v);
            }
    }

    p.total = p.phi_free + p.phi_por + p.psi_interface - p.external_work;
    return p;
}

double power_scale(const PowerBreakdown& p) {
    return std::max(std::abs(p.phi_free) + std::abs(p.phi_por) +
                        std::abs(p.psi_interface) + std::abs(p.external_work),
                    1e-30);
}

// ---------------------------------------------------------------------------
// Stream-function perturbations.
// ---------------------------------------------------------------------------

namespace {

constexpr int kPolyDim = 14;  // dense monomial table x^i y^j, i,j < kPolyDim

struct PolyTable {
    std::array<double, kPolyDim * kPolyDim> c{};

    double& at(int i, int j) { return c[i * kPolyDim + j]; }
    double get(int i, int j) const { return c[i * kPolyDim + j]; }

    static PolyTable constant(double v) {
        PolyTable p;
        p.at(0, 0) = v;
        return p;
    }
    /// a*x + b*y + d
    static PolyTable linear(double a, double b, double d) {
        PolyTable p;
        p.at(1, 0) = a;
        p.at(0, 1) = b;
        p.at(0, 0) = d;
        return p;
    }

    PolyTable mul(const PolyTable& o) const {
        PolyTable out;
        for (int i = 0; i < kPolyDim; ++i)
            for (int j = 0; j < kPolyDim; ++j) {
                if (get(i, j) == 0.0) continue;
                for (int k = 0; k + i < kPolyDim; ++k)
                    for (int l = 0; l + j < kPolyDim; ++l) {
                        if (o.get(k, l) == 0.0) continue;
                        out.at(i + k, j + l) += get(i, j) * o.get(k, l);
                    }
            }
        return out;
    }
    PolyTable add_scaled(const PolyTable& o, double s) const {
        PolyTable out = *this;
        for (int i = 0; i < kPolyDim * kPolyDim; ++i) out.c[i] += s * o.c[i];
        return out;
    }
    PolyTable dx() const {
        PolyTable out;
        for (int i = 1; i < kPolyDim; ++i)
            for (int j = 0; j < kPolyDim; ++j) out.at(i - 1, j) = i * get(i, j);
        return out;
    }
    PolyTable dy() const {
        PolyTable out;
        for (int i = 0; i < kPolyDim; ++i)
            for (int j = 1; j < kPolyDim; ++j) out.at(i, j - 1) = j * get(i, j);
        return out;
    }
    double eval(Vec2 p) const {
        // Horner over y inside Horner over x.
        double result = 0.0;
        for (int i = kPolyDim - 1; i >= 0; --i) {
            double row = 0.0;
            for (int j = kPolyDim - 1; j >= 0; --j) row = row * p.y + get(i, j);
            result = result * p.x + row;
        }
        return result;
    }
};

struct WallFlags {
    bool top = false, bottom = false, left = false, right = false;
};

WallFlags velocity_walls(const Mesh& mesh, Region region) {
    const auto& g = mesh.geometry;
    const double eps = 1e-12 * std::max({std::abs(g.x1 - g.x0), std::abs(g.y_top),
                                         std::abs(g.y_bottom), 1.0});
    WallFlags f;
    for (const auto& be : mesh.boundary_edges) {
        if (!is_velocity_tag(be.tag) || region_of_tag(be.tag) != region) continue;
        const Vec2 a = mesh.vertices[be.a], b = mesh.vertices[be.b];
        if (std::abs(a.y - g.y_top) < eps && std::abs(b.y - g.y_top) < eps) f.top = true;
        if (std::abs(a.y - g.y_bottom) < eps && std::abs(b.y - g.y_bottom) < eps)
            f.bottom = true;
        if (std::abs(a.x - g.x0) < eps && std::abs(b.x - g.x0) < eps) f.left = true;
        if (std::abs(a.x - g.x1) < eps && std::abs(b.x - g.x1) < eps) f.right = true;
    }
    return f;
}

}  // namespace

StreamPerturbation::RegionFields StreamPerturbation::build(const Mesh& mesh, Region region,
                                                           std::uint64_t seed) {
    const auto& g = mesh.geometry;
    const double ylo = region == Region::free_flow ? g.y_interface : g.y_bottom;
    const double yhi = region == Region::free_flow ? g.y_top : g.y_interface;
    const WallFlags walls = velocity_walls(mesh, region);

    // psi = (wall factors) * (interface factor) * (random cubic in normalized coords)
    PolyTable psi = PolyTable::linear(0.0, 1.0, -g.y_interface);  // vanishes on the interface
    const auto square = [](const PolyTable& p) { return p.mul(p); };
    if (region == Region::free_flow && walls.top)
        psi = psi.mul(square(PolyTable::linear(0.0, -1.0, g.y_top)));
    if (region == Region::porous && walls.bottom)
        psi = psi.mul(square(PolyTable::linear(0.0, 1.0, -g.y_bottom)));
    if (walls.left) psi = psi.mul(square(PolyTable::linear(1.0, 0.0, -g.x0)));
    if (walls.right) psi = psi.mul(square(PolyTable::linear(-1.0, 0.0, g.x1)));

    const double lx = g.x1 - g.x0, ly = yhi - ylo;
    const PolyTable X = PolyTable::linear(1.0 / lx, 0.0, -(g.x0 + 0.5 * lx) / lx);
    const PolyTable Y = PolyTable::linear(0.0, 1.0 / ly, -(ylo + 0.5 * ly) / ly);

    std::mt19937_64 rng(seed ^ (region == Region::free_flow ? 0x66726565ull : 0x706f7275ull));
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    PolyTable random = PolyTable::constant(0.0);
    PolyTable xi = PolyTable::constant(1.0);
    for (int i = 0; i <= 3; ++i) {
        PolyTable term = xi;
        for (int j = 0; i + j <= 3; ++j) {
            random = random.add_scaled(term, coeff(rng));
            term = term.mul(Y);
        }
        xi = xi.mul(X);
    }
    psi = psi.mul(random);

    RegionFields f;
    f.n = kPolyDim;
    const PolyTable px = psi.dx(), py = psi.dy();
    f.dx_coeff.assign(px.c.begin(), px.c.end());
    f.dy_coeff.assign(py.c.begin(), py.c.end());
    return f;
}

StreamPerturbation::StreamPerturbation(const Mesh& mesh, std::uint64_t seed)
    : free_(build(mesh, Region::free_flow, seed)), por_(build(mesh, Region::porous, seed)) {}

namespace {
double eval_table(const std::vector<double>& c, Vec2 p) {
    double result = 0.0;
    for (int i = kPolyDim - 1; i >= 0; --i) {
        double row = 0.0;
        for (int j = kPolyDim - 1; j >= 0; --j) row = row * p.y + c[i * kPolyDim + j];
        result = result * p.x + row;
    }
    return result;
}
PolyTable to_table(const std::vector<double>& c) {
    PolyTable t;
    std::copy(c.begin(), c.end(), t.c.begin());
    return t;
}
}  // namespace

Vec2 StreamPerturbation::delta_v(Region region, Vec2 pos) const {
    const RegionFields& f = region == Region::free_flow ? free_ : por_;
    return {eval_table(f.dy_coeff, pos), -eval_table(f.dx_coeff, pos)};
}

double StreamPerturbation::divergence(Region region, Vec2 pos) const {
    const RegionFields& f = region == Region::free_flow ? free_ : por_;
    // div delta_v = d/dx (psi_y) - d/dy (psi_x); cancels to rounding.
    return to_table(f.dy_coeff).dx().eval(pos) - to_table(f.dx_coeff).dy().eval(pos);
}

Eigen::VectorXd StreamPerturbation::interpolate(const DofMap& dofs) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dofs.total_dofs);
    const int n_nodes = static_cast<int>(dofs.node_pos.size());
    for (int node = 0; node < n_nodes; ++node) {
        if (dofs.vel_node_free[node] >= 0) {
            const Vec2 d = delta_v(Region::free_flow, dofs.node_pos[node]);
            v[dofs.vfree_dof(node, 0)] = d.x;
            v[dofs.vfree_dof(node, 1)] = d.y;
        }
        if (dofs.vel_node_por[node] >= 0) {
            const Vec2 d = delta_v(Region::porous, dofs.node_pos[node]);
            v[dofs.vpor_dof(node, 0)] = d.x;
            v[dofs.vpor_dof(node, 1)] = d.y;
        }
    }
    for (int i = 0; i < dofs.total_dofs; ++i)
        if (dofs.velocity_constrained[i]) v[i] = 0.0;
    return v;
}

// ---------------------------------------------------------------------------
// PowerVerifier.
// ---------------------------------------------------------------------------

PowerVerifier::PowerVerifier(const Mesh& mesh, const DofMap& dofs, const ModelConfig& config,
                             const CoupledSystem& system, const DirectSolver& solver)
    : mesh_(mesh), dofs_(dofs), config_(config), system_(system), solver_(solver),
      mass_(assemble_velocity_mass(mesh, dofs)) {}

Eigen::VectorXd PowerVerifier::admissible_direction(std::uint64_t seed) const {
    std::vector<char> is_velocity(dofs_.total_dofs, 0);
    for (int i = 0; i < dofs_.off_p_free_; ++i) is_velocity[dofs_.perm[i]] = 1;

    for (int attempt = 0; attempt < 8; ++attempt) {
        const StreamPerturbation sp(mesh_, seed + 7919ull * attempt);
        const Eigen::VectorXd raw = sp.interpolate(dofs_);
        Eigen::VectorXd rhs = mass_ * raw;
        for (int i = 0; i < dofs_.total_dofs; ++i)
            if (dofs_.velocity_constrained[i] || !is_velocity[i]) rhs[i] = 0.0;

        // Solving the stationary system with this right-hand side lands the
        // velocity part in the kernel of the divergence and interface rows.
        Eigen::VectorXd z = solver_.solve_rhs(rhs);
        for (int i = 0; i < dofs_.total_dofs; ++i)
            if (!is_velocity[i] || dofs_.velocity_constrained[i]) z[i] = 0.0;

        const double nrm = std::sqrt(z.dot(mass_ * z));
        if (nrm > 1e-12 * std::sqrt(static_cast<double>(dofs_.total_dofs))) return z / nrm;
    }
    throw solver_error("failed to generate a nonzero admissible perturbation");
}

double PowerVerifier::quadratic_energy(const Eigen::VectorXd& delta) const {
    const PowerBreakdown p = total_power(delta, mesh_, dofs_, config_);
    return p.phi_free + p.phi_por + p.psi_interface;
}

PowerVerifier::GateauxReport PowerVerifier::gateaux_check(const Eigen::VectorXd& state,
                                                          int n_dirs, double h,
                                                          std::uint64_t seed) const {
    GateauxReport rep;
    rep.h = h;
    rep.n_dirs = n_dirs;
    rep.seed = seed;
    rep.scale = power_scale(total_power(state, mesh_, dofs_, config_));
    for (int d = 0; d < n_dirs; ++d) {
        const Eigen::VectorXd delta = admissible_direction(seed + d);
        const double p_plus = total_power(state + h * delta, mesh_, dofs_, config_).total;
        const double p_minus = total_power(state - h * delta, mesh_, dofs_, config_).total;
        const double deriv = std::abs(p_plus - p_minus) / (2.0 * h) / rep.scale;
        rep.per_direction.push_back(deriv);
        rep.max_normalized_derivative = std::max(rep.max_normalized_derivative, deriv);
    }
    return rep;
}

PowerVerifier::MinPowerReport PowerVerifier::minimum_power_check(
    const Solution& sol, int n_trials, const std::vector<double>& amplitudes,
    std::uint64_t seed) const {
    MinPowerReport rep;
    rep.seed = seed;
    const PowerBreakdown p0 = total_power(sol.x, mesh_, dofs_, config_);
    rep.power_at_solution = p0.total;
    rep.scale = power_scale(p0);
    rep.tol_abs = 1e-10 * std::abs(p0.total);

    bool first = true;
    for (int trial = 0; trial < n_trials; ++trial) {
        Eigen::VectorXd delta = admissible_direction(seed + 104729ull * (trial + 1));
        double q = quadratic_energy(delta);
        if (!(q > 1e-14 * rep.scale)) continue;  // degenerate draw
        delta *= std::sqrt(rep.scale / q);

        std::vector<double> la, lg;
        for (double a : amplitudes) {
            const double pa = total_power(sol.x + a * delta, mesh_, dofs_, config_).total;
            const double gap = pa - p0.total;
            rep.rows.push_back({trial, a, gap});
            if (gap < -rep.tol_abs) ++rep.violations;
            if (gap > 0.0) {
                la.push_back(std::log(a));
                lg.push_back(std::log(gap));
            }
        }
        if (la.size() >= 2) {
            // Least-squares slope of log(gap) against log(a).
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(la.size());
            for (std::size_t i = 0; i < la.size(); ++i) {
                sx += la[i];
                sy += lg[i];
                sxx += la[i] * la[i];
                sxy += la[i] * lg[i];
            }
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            if (first) {
                rep.slope_min = rep.slope_max = slope;
                first = false;
            } else {
                rep.slope_min = std::min(rep.slope_min, slope);
                rep.slope_max = std::max(rep.slope_max, slope);
            }
        }
    }
    return rep;
}

}  // namespace fpflow
