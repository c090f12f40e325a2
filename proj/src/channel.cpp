#include "fpflow/channel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace fpflow {

void ChannelProblem::validate() const {
    if (!(h > 0.0 && H > 0.0)) throw invalid_model_data("channel requires h > 0 and H > 0");
    if (!porous.is_isotropic())
        throw invalid_model_data("channel oracle requires isotropic permeability K = k I");
    if (model == PorousModel::darcy && !(slip_alpha > 0.0))
        throw invalid_model_data("darcy branch requires slip_alpha > 0");
}

double ChannelProblem::k() const { return porous.K.a00; }

double ChannelSolution::eval(double y) const {
    if (y >= 0.0) return G / (2.0 * mu) * y * y + coefA * y + coefB;
    return eval_porous(y);
}

double ChannelSolution::eval_dudy(double y) const {
    if (y >= 0.0) return G / mu * y + coefA;
    return eval_dudy_porous(y);
}

double ChannelSolution::eval_porous(double y) const {
    if (model == PorousModel::darcy) return Q;
    const double s = std::sqrt(k);
    return u_part + coefC * std::exp(y / s) + coefD * std::exp(-(y + H) / s);
}

double ChannelSolution::eval_dudy_porous(double y) const {
    if (model == PorousModel::darcy) return 0.0;
    const double s = std::sqrt(k);
    return coefC / s * std::exp(y / s) - coefD / s * std::exp(-(y + H) / s);
}

std::vector<std::pair<double, double>> ChannelSolution::sample(int n) const {
    if (n < 2) throw invalid_model_data("profile sampling needs at least 2 points");
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double y = -H + (h + H) * i / (n - 1);
        out.emplace_back(y, eval(y));
    }
    return out;
}

ChannelSolution solve_channel(const ChannelProblem& problem) {
    problem.validate();
    const double mu = problem.fluid.mu;
    const double k = problem.k();
    const double G = problem.G;
    const InterfaceLaw& law = problem.law;

    ChannelSolution sol;
    sol.model = problem.model;
    sol.h = problem.h;
    sol.H = problem.H;
    sol.G = G;
    sol.mu = mu;
    sol.k = k;
    sol.Q = -k * G / mu;

    if (problem.model == PorousModel::darcy) {
        // Free region only; the porous velocity is the uniform Darcy discharge
        // and the slip relation closes the system:
        //   u(h) = 0,   u(0) - Q = (sqrt(k)/alpha) u'(0+).
        const double sk = std::sqrt(k) / problem.slip_alpha;
        const double denom = problem.h + sk;
        sol.coefA = -(G / (2.0 * mu) * problem.h * problem.h + sol.Q) / denom;
        sol.coefB = sol.Q + sk * sol.coefA;
        sol.u_B = sol.coefB;
        sol.dudy_interface = sol.coefA;
        sol.u_por_interface = sol.Q;
        // With a vanishing porous extra stress the law's porous-side condition
        // reads a12 uf* + a22 up* = 0; a22 = 0 leaves up* unconstrained.
        if (law.a22 != 0.0) sol.law_porous_slip = -(law.a12 / law.a22) * sol.u_B;
        return sol;
    }

    // Brinkman branch: mu u'' = G in the free region, mu u'' - (mu/k) u = G in
    // the porous layer, wall conditions u(h) = u(-H) = 0 and the two tangential
    // interface conditions
    //   mu u_f'(0) =  2 a11 u_f(0) + 2 a12 u_p(0)
    //   mu u_p'(0) = -2 a12 u_f(0) - 2 a22 u_p(0).
    // Porous basis exp(y/s), exp(-(y+H)/s) keeps all exponents non-positive.
    const double s = std::sqrt(k);
    const double E = std::exp(-problem.H / s);
    sol.u_part = -k * G / mu;

    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    Eigen::Vector4d rhs = Eigen::Vector4d::Zero();
    // Unknowns: [A, B, C, D].
    M(0, 0) = problem.h;
    M(0, 1) = 1.0;
    rhs(0) = -G / (2.0 * mu) * problem.h * problem.h;

    M(1, 2) = E;
    M(1, 3) = 1.0;
    rhs(1) = -sol.u_part;

    M(2, 0) = mu;
    M(2, 1) = -2.0 * law.a11;
    M(2, 2) = -2.0 * law.a12;
    M(2, 3) = -2.0 * law.a12 * E;
    rhs(2) = 2.0 * law.a12 * sol.u_part;

    M(3, 1) = 2.0 * law.a12;
    M(3, 2) = 2.0 * law.a22 + mu / s;
    M(3, 3) = (2.0 * law.a22 - mu / s) * E;
    rhs(3) = -2.0 * law.a22 * sol.u_part;

    Eigen::FullPivLU<Eigen::Matrix4d> lu(M);
    if (!lu.isInvertible()) {
        std::ostringstream os;
        os << "singular channel constant-system (mu=" << mu << ", k=" << k
           << ", a11=" << law.a11 << ", a12=" << law.a12 << ", a22=" << law.a22 << ")";
        throw invalid_model_data(os.str());
    }
    const Eigen::Vector4d c = lu.solve(rhs);
    sol.coefA = c(0);
    sol.coefB = c(1);
    sol.coefC = c(2);
    sol.coefD = c(3);
    sol.u_B = sol.coefB;
    sol.dudy_interface = sol.coefA;
    sol.u_por_interface = sol.u_part + sol.coefC + sol.coefD * E;
    return sol;
}

// ---------------------------------------------------------------------------
// Discrete interface residuals.
// ---------------------------------------------------------------------------

InterfaceResiduals interface_residuals(const Solution& sol, const Mesh& mesh,
                                       const DofMap& dofs, const ModelConfig& config) {
    InterfaceResiduals out;
    const double mu = config.fluid.mu;
    const auto& quad = edge_quadrature_gauss3();

    double acc1 = 0.0, acc2 = 0.0, acc3 = 0.0, acc4 = 0.0;
    double acc_lam_f = 0.0, acc_lam_p = 0.0;
    double slip_f = 0.0, slip_p = 0.0, total_len = 0.0;

    // Weighted constraint residuals, one per multiplier node.
    std::vector<double> weighted(dofs.n_lambda, 0.0);

    for (const auto& e : mesh.interface_edges) {
        const Vec2 pa = mesh.vertices[e.a], pb = mesh.vertices[e.b];
        const double len = (pb - pa).norm();
        const Vec2 n = e.normal_free;
        const Vec2 t = tangent_of(e);
        total_len += len;

        double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;
        for (const auto& qp : quad) {
            const auto lf = edge_point_barycentric(mesh, e.tri_free, e.a, e.b, qp.t);
            const auto lp = edge_point_barycentric(mesh, e.tri_por, e.a, e.b, qp.t);
            const auto uf = sample_velocity(mesh, dofs, sol.x, e.tri_free, lf[0], lf[1], lf[2]);
            const auto up = sample_velocity(mesh, dofs, sol.x, e.tri_por, lp[0], lp[1], lp[2]);
            const double pf = sample_pressure(mesh, dofs, sol.x, e.tri_free, lf[0], lf[1], lf[2]);
            const double pp = sample_pressure(mesh, dofs, sol.x, e.tri_por, lp[0], lp[1], lp[2]);

            const Ten2 Df = uf.gradient.symmetric_part();
            const Ten2 Dp = up.gradient.symmetric_part();
            const Ten2 Tf = -pf * Ten2::identity() + 2.0 * mu * Df;
            const Ten2 Tp = -pp * Ten2::identity() + 2.0 * mu * Dp;

            const Vec2 vtf = uf.value - n * uf.value.dot(n);
            const Vec2 vtp = up.value - n * up.value.dot(n);
            const double vn = uf.value.dot(n);
            const auto g = interface_power_gradients(config.law, vtf, vtp, vn);

            const double r1 = (uf.value - up.value).dot(n);
            const double r2 = n.dot(Tf * n) + g.g_normal - (-n).dot(Tp * (-n));
            const double r3 = t.dot((2.0 * mu * Df) * n) + t.dot(g.g_free);
            const double r4 = t.dot((2.0 * mu * Dp) * (-n)) + t.dot(g.g_por);

            const double lam = sample_lambda(dofs, sol.x, e, qp.t);
            const double dlam_f = lam - (n.dot(Tf * n) + g.g_normal);
            const double dlam_p = lam - (-n).dot(Tp * (-n));

            const double w = qp.w * len;
            e1 += w * r1 * r1;
            e2 += w * r2 * r2;
            e3 += w * r3 * r3;
            e4 += w * r4 * r4;
            acc_lam_f += w * dlam_f * dlam_f;
            acc_lam_p += w * dlam_p * dlam_p;
            slip_f += w * uf.value.dot(t);
            slip_p += w * up.value.dot(t);

            const double L[2] = {1.0 - qp.t, qp.t};
            weighted[dofs.lambda_node[e.a]] += w * L[0] * r1;
            weighted[dofs.lambda_node[e.b]] += w * L[1] * r1;
        }
        acc1 += e1;
        acc2 += e2;
        acc3 += e3;
        acc4 += e4;
        out.per_edge.push_back({0.5 * (pa.x + pb.x), std::sqrt(e1), std::sqrt(e2),
                                std::sqrt(e3), std::sqrt(e4)});
    }

    out.r1_l2 = std::sqrt(acc1);
    out.r2_l2 = std::sqrt(acc2);
    out.r3_l2 = std::sqrt(acc3);
    out.r4_l2 = std::sqrt(acc4);
    out.lambda_vs_free_normal_l2 = std::sqrt(acc_lam_f);
    out.lambda_vs_por_normal_l2 = std::sqrt(acc_lam_p);
    for (double wres : weighted)
        out.r1_weighted_max = std::max(out.r1_weighted_max, std::abs(wres));
    out.interface_length = total_len;
    if (total_len > 0.0) {
        out.slip_mean_free = slip_f / total_len;
        out.slip_mean_por = slip_p / total_len;
    }
    return out;
}

double max_mass_conservation_residual(const Solution& sol, const Mesh& mesh,
                                      const DofMap& dofs) {
    // int q div(u) per pressure node, accumulated over the node's support.
    std::vector<double> res_free(dofs.n_pres_free, 0.0);
    std::vector<double> res_por(dofs.n_pres_por, 0.0);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        const TriGeom g = TriGeom::from(
            {mesh.vertices[tr.v[0]], mesh.vertices[tr.v[1]], mesh.vertices[tr.v[2]]});
        auto& res = tr.region == Region::free_flow ? res_free : res_por;
        const auto& pmap =
            tr.region == Region::free_flow ? dofs.pres_node_free : dofs.pres_node_por;
        for (const auto& qp : tri_quadrature_deg4()) {
            const auto u =
                sample_velocity(mesh, dofs, sol.x, static_cast<int>(t), qp.l1, qp.l2, qp.l3);
            const double div_u = u.gradient.trace();
            const double lin[3] = {qp.l1, qp.l2, qp.l3};
            for (int j = 0; j < 3; ++j)
                res[pmap[tr.v[j]]] += qp.w * g.area * lin[j] * div_u;
        }
    }
    double m = 0.0;
    for (double r : res_free) m = std::max(m, std::abs(r));
    for (double r : res_por) m = std::max(m, std::abs(r));
    return m;
}

}  // namespace fpflow
