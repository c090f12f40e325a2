#include "fpflow/mesh.hpp"

namespace fpflow {

namespace {

void check_plan(const BoundaryPlan& plan) {
    struct Wall {
        const char* name;
        std::optional<BoundaryTag> tag;
        Region region;
    };
    const Wall walls[] = {
        {"top", plan.top, Region::free_flow},
        {"bottom", plan.bottom, Region::porous},
        {"left_free", plan.left_free, Region::free_flow},
        {"right_free", plan.right_free, Region::free_flow},
        {"left_por", plan.left_por, Region::porous},
        {"right_por", plan.right_por, Region::porous},
    };
    for (const auto& w : walls) {
        if (!w.tag)
            throw invalid_model_data(std::string("boundary plan leaves wall '") + w.name +
                                     "' untagged");
        if (region_of_tag(*w.tag) != w.region)
            throw invalid_model_data(std::string("boundary tag on wall '") + w.name +
                                     "' belongs to the wrong region");
    }
}

}  // namespace

Mesh build_channel_mesh(const DomainGeometry& geom, int nx, int ny_free, int ny_por,
                        const BoundaryPlan& plan) {
    geom.validate();
    if (nx < 1 || ny_free < 1 || ny_por < 1)
        throw invalid_model_data("mesh subdivisions nx, ny_free, ny_por must be >= 1");
    check_plan(plan);

    Mesh mesh;
    mesh.geometry = geom;
    mesh.nx = nx;
    mesh.ny_free = ny_free;
    mesh.ny_por = ny_por;

    const int ny = ny_free + ny_por;
    const double dx = (geom.x1 - geom.x0) / nx;
    const double dy_por = (geom.y_interface - geom.y_bottom) / ny_por;
    const double dy_free = (geom.y_top - geom.y_interface) / ny_free;

    // Grid lines: porous rows from the bottom up to the interface, then free rows.
    std::vector<double> ys(ny + 1);
    for (int j = 0; j <= ny_por; ++j) ys[j] = geom.y_bottom + j * dy_por;
    ys[ny_por] = geom.y_interface;  // resolved exactly
    for (int j = 1; j <= ny_free; ++j) ys[ny_por + j] = geom.y_interface + j * dy_free;
    ys[ny] = geom.y_top;

    const auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
    mesh.vertices.reserve((nx + 1) * (ny + 1) + nx * ny);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            mesh.vertices.push_back({geom.x0 + i * dx, ys[j]});

    // Per cell: append the center vertex and four CCW triangles (S, E, N, W).
    mesh.triangles.reserve(4 * nx * ny);
    std::vector<int> south_tri(nx * ny), north_tri(nx * ny);
    for (int j = 0; j < ny; ++j) {
        const Region region = (j < ny_por) ? Region::porous : Region::free_flow;
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            const int c = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(
                {geom.x0 + (i + 0.5) * dx, 0.5 * (ys[j] + ys[j + 1])});

            const int base = static_cast<int>(mesh.triangles.size());
            mesh.triangles.push_back({{v00, v10, c}, region});  // south
            mesh.triangles.push_back({{v10, v11, c}, region});  // east
            mesh.triangles.push_back({{v11, v01, c}, region});  // north
            mesh.triangles.push_back({{v01, v00, c}, region});  // west
            south_tri[j * nx + i] = base;
            north_tri[j * nx + i] = base + 2;
        }
    }

    // Exterior boundary edges.
    for (int i = 0; i < nx; ++i) {
        mesh.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), *plan.bottom});
        mesh.boundary_edges.push_back({vid(i, ny), vid(i + 1, ny), *plan.top});
    }
    for (int j = 0; j < ny; ++j) {
        const bool porous = j < ny_por;
        mesh.boundary_edges.push_back(
            {vid(0, j), vid(0, j + 1), porous ? *plan.left_por : *plan.left_free});
        mesh.boundary_edges.push_back(
            {vid(nx, j), vid(nx, j + 1), porous ? *plan.right_por : *plan.right_free});
    }

    // Interface edges along y = y_interface; the free cell row sits above,
    // the porous cell row below. The normal points from free into porous.
    for (int i = 0; i < nx; ++i) {
        InterfaceEdge e;
        e.a = vid(i, ny_por);
        e.b = vid(i + 1, ny_por);
        e.tri_free = south_tri[ny_por * nx + i];
        e.tri_por = north_tri[(ny_por - 1) * nx + i];
        e.normal_free = {0.0, -1.0};
        mesh.interface_edges.push_back(e);
    }

    return mesh;
}

Vec2 tangent_of(const InterfaceEdge& edge) {
    if (edge.a == edge.b) throw invalid_model_data("zero-length interface edge");
    return edge.normal_free.rot90ccw();
}

}  // namespace fpflow
