#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpflow/channel.hpp"
#include "fpflow/config.hpp"
#include "fpflow/solver.hpp"

using namespace fpflow;

namespace {

RunConfig small_channel(int nx = 4) {
    RunConfig c;
    c.nx = nx;
    c.ny_free = nx;
    c.ny_por = nx;
    c.k = 0.1;
    c.law_type = "bjs";
    return c;
}

}  // namespace

TEST_CASE("identity system") {
    CoupledSystem sys;
    sys.A.resize(3, 3);
    sys.A.setIdentity();
    sys.b = Eigen::VectorXd::Zero(3);
    sys.b[0] = 1.0;
    sys.has_traction_boundary = true;
    const Solution s = solve(sys);
    CHECK(s.x[0] == doctest::Approx(1.0));
    CHECK(s.x[1] == 0.0);
    CHECK(s.residual_norm < 1e-15);
}

TEST_CASE("channel solve satisfies the residual contract") {
    const Scene scene = build_scene(small_channel());
    const CoupledSystem sys = assemble_coupled_system(scene.mesh, scene.dofs, scene.model);
    const Solution s = solve(sys);
    CHECK(s.residual_norm < 1e-9);
    CHECK(s.pinned_pressure_dof == -1);
}

TEST_CASE("all-velocity walls with zero data give the zero solution") {
    RunConfig c = small_channel();
    c.bc_plan = "all_dirichlet";
    const Scene scene = build_scene(c);
    const CoupledSystem sys = assemble_coupled_system(scene.mesh, scene.dofs, scene.model);
    const Solution s = solve(sys);
    CHECK(s.pinned_pressure_dof >= 0);
    CHECK(s.x.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("solution is invariant under dof permutation") {
    const RunConfig c = small_channel();
    const Scene plain = build_scene(c);
    const Scene shuffled = build_scene(c, 987654321u);

    const Solution s1 = solve(assemble_coupled_system(plain.mesh, plain.dofs, plain.model));
    const Solution s2 =
        solve(assemble_coupled_system(shuffled.mesh, shuffled.dofs, shuffled.model));

    double vmax = 0.0, pmax = 0.0;
    const int n_nodes = static_cast<int>(plain.dofs.node_pos.size());
    for (int node = 0; node < n_nodes; ++node) {
        if (plain.dofs.vel_node_free[node] >= 0) {
            const Vec2 d = s1.v_free(plain.dofs, node) - s2.v_free(shuffled.dofs, node);
            vmax = std::max({vmax, std::abs(d.x), std::abs(d.y)});
        }
        if (plain.dofs.vel_node_por[node] >= 0) {
            const Vec2 d = s1.v_por(plain.dofs, node) - s2.v_por(shuffled.dofs, node);
            vmax = std::max({vmax, std::abs(d.x), std::abs(d.y)});
        }
    }
    for (int v = 0; v < plain.dofs.n_vertices; ++v) {
        if (plain.dofs.pres_node_free[v] >= 0)
            pmax = std::max(pmax, std::abs(s1.p_free(plain.dofs, v) - s2.p_free(shuffled.dofs, v)));
        if (plain.dofs.pres_node_por[v] >= 0)
            pmax = std::max(pmax, std::abs(s1.p_por(plain.dofs, v) - s2.p_por(shuffled.dofs, v)));
    }
    CHECK(vmax < 1e-9);
    CHECK(pmax < 1e-9);  // traction data pins both pressures, no free constant
}

TEST_CASE("repeated solves are bit-identical") {
    const Scene scene = build_scene(small_channel());
    const CoupledSystem sys = assemble_coupled_system(scene.mesh, scene.dofs, scene.model);
    const Solution s1 = solve(sys);
    const Solution s2 = solve(sys);
    CHECK((s1.x - s2.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solution scales linearly with the data") {
    const double factor = 3.75;
    RunConfig c1 = small_channel();
    c1.body_force_free = {0.2, 0.1};
    c1.body_force_por = {-0.15, 0.05};
    RunConfig c2 = c1;
    c2.pressure_gradient *= factor;
    c2.body_force_free = factor * c1.body_force_free;
    c2.body_force_por = factor * c1.body_force_por;

    const Scene a = build_scene(c1);
    const Scene b = build_scene(c2);
    const Solution sa = solve(assemble_coupled_system(a.mesh, a.dofs, a.model));
    const Solution sb = solve(assemble_coupled_system(b.mesh, b.dofs, b.model));

    const double scale = sb.x.cwiseAbs().maxCoeff();
    CHECK((factor * sa.x - sb.x).cwiseAbs().maxCoeff() < 1e-9 * scale);
}

TEST_CASE("anisotropic permeability solves satisfy the contracts") {
    RunConfig c = small_channel();
    c.bc_plan = "all_dirichlet";
    c.k = 0.2;
    c.kxy = 0.05;
    c.kyy = 0.08;
    c.body_force_free = {1.0, 0.0};
    c.body_force_por = {1.0, 0.3};
    const Scene scene = build_scene(c);
    const Solution s = solve(assemble_coupled_system(scene.mesh, scene.dofs, scene.model));
    CHECK(s.residual_norm < 1e-9);
    CHECK(max_mass_conservation_residual(s, scene.mesh, scene.dofs) < 1e-10);
    const auto res = interface_residuals(s, scene.mesh, scene.dofs, scene.model);
    CHECK(res.r1_weighted_max < 1e-9);
    CHECK(s.x.cwiseAbs().maxCoeff() > 1e-6);  // genuinely nonzero flow
}

TEST_CASE("uncontrolled rigid motion is reported as ill-posed") {
    // All-traction walls with a zero interface law: a free-region horizontal
    // translation costs nothing and satisfies all constraints.
    BoundaryPlan plan;
    plan.top = BoundaryTag::free_t;
    plan.bottom = BoundaryTag::por_t;
    plan.left_free = plan.right_free = BoundaryTag::free_t;
    plan.left_por = plan.right_por = BoundaryTag::por_t;
    const Mesh mesh = build_channel_mesh({0, 1, 0, 1, -1}, 2, 2, 2, plan);
    const DofMap dofs = build_dof_map(mesh);
    ModelConfig config{FluidProps(1.0, 1.0), PorousProps(0.5, Ten2::identity()),
                       InterfaceLaw(0.0, 0.0, 0.0, 0.0)};
    config.body_force_free = {1.0, 0.0};  // works against the free null mode
    const CoupledSystem sys = assemble_coupled_system(mesh, dofs, config);
    CHECK_THROWS_AS(solve(sys), solver_error);
    try {
        solve(sys);
    } catch (const solver_error& e) {
        CHECK(std::string(e.what()).find("ill-posed") != std::string::npos);
    }
}
