#pragma once

#include <array>
#include <optional>
#include <vector>

#include "fpflow/core.hpp"

namespace fpflow {

/// Axis-aligned two-layer rectangle: free region on top of the porous region,
/// separated by the horizontal line y = y_interface.
struct DomainGeometry {
    double x0;
    double x1;
    double y_interface;
    double y_top;     ///< top of the free region
    double y_bottom;  ///< bottom of the porous region

    void validate() const {
        if (!(x0 < x1)) throw invalid_model_data("geometry requires x0 < x1");
        if (!(y_bottom < y_interface && y_interface < y_top))
            throw invalid_model_data("geometry requires y_bottom < y_interface < y_top");
    }
};

enum class Region { free_flow, porous };

enum class BoundaryTag { free_v, free_t, por_v, por_t };

inline bool is_velocity_tag(BoundaryTag t) {
    return t == BoundaryTag::free_v || t == BoundaryTag::por_v;
}
inline Region region_of_tag(BoundaryTag t) {
    return (t == BoundaryTag::free_v || t == BoundaryTag::free_t) ? Region::free_flow
                                                                  : Region::porous;
}

/// Boundary-tag assignment for the six exterior walls of the channel domain.
/// Every wall must be tagged; the tag's region must match the wall's region.
struct BoundaryPlan {
    std::optional<BoundaryTag> top;         // free region
    std::optional<BoundaryTag> bottom;      // porous region
    std::optional<BoundaryTag> left_free;   // x = x0, above the interface
    std::optional<BoundaryTag> right_free;  // x = x1, above the interface
    std::optional<BoundaryTag> left_por;    // x = x0, below the interface
    std::optional<BoundaryTag> right_por;   // x = x1, below the interface

    /// Walls no-slip, lateral boundaries carry prescribed tractions.
    static BoundaryPlan channel_traction() {
        return {BoundaryTag::free_v, BoundaryTag::por_v, BoundaryTag::free_t,
                BoundaryTag::free_t, BoundaryTag::por_t, BoundaryTag::por_t};
    }

    /// Velocity prescribed on every exterior wall.
    static BoundaryPlan all_velocity() {
        return {BoundaryTag::free_v, BoundaryTag::por_v, BoundaryTag::free_v,
                BoundaryTag::free_v, BoundaryTag::por_v, BoundaryTag::por_v};
    }
};

struct Triangle {
    std::array<int, 3> v;  ///< vertex indices, counter-clockwise
    Region region;
};

struct BoundaryEdge {
    int a, b;  ///< vertex indices
    BoundaryTag tag;
};

struct InterfaceEdge {
    int a, b;          ///< vertex indices along the interface line
    int tri_free;      ///< adjacent triangle on the free side
    int tri_por;       ///< adjacent triangle on the porous side
    Vec2 normal_free;  ///< unit normal pointing from free into porous
};

/// Conforming triangulation of the two-layer channel domain. Triangles carry
/// subdomain tags; the interface is resolved by a horizontal mesh line.
struct Mesh {
    DomainGeometry geometry{};
    int nx = 0, ny_free = 0, ny_por = 0;

    std::vector<Vec2> vertices;
    std::vector<Triangle> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<InterfaceEdge> interface_edges;

    double triangle_area(int t) const {
        const auto& tr = triangles[t];
        const Vec2 p0 = vertices[tr.v[0]], p1 = vertices[tr.v[1]], p2 = vertices[tr.v[2]];
        return 0.5 * ((p1 - p0).x * (p2 - p0).y - (p1 - p0).y * (p2 - p0).x);
    }
};

/// Structured crossed-triangle mesh: each grid cell is split into four
/// triangles around an inserted center vertex. The base grid has
/// (nx+1)*(ny_free+ny_por+1) vertices; centers are appended after them.
Mesh build_channel_mesh(const DomainGeometry& geom, int nx, int ny_free, int ny_por,
                        const BoundaryPlan& plan);

/// Unit tangent of an interface edge: the +90 degree rotation of normal_free.
Vec2 tangent_of(const InterfaceEdge& edge);

}  // namespace fpflow
