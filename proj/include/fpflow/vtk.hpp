#pragma once

#include <string>
#include <vector>

#include "fpflow/mesh.hpp"

namespace fpflow {

/// Point-sampled scalar/vector data attached to mesh vertices for export.
struct VtkPointField {
    std::string name;
    bool is_vector = false;
    std::vector<double> values;  ///< n values (scalar) or 2n values (vector, xy pairs)
};

/// Writes the mesh as a legacy-VTK ASCII unstructured grid: POINTS, CELLS,
/// CELL_TYPES, CELL_DATA with subdomain tags, and optional POINT_DATA fields.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<VtkPointField>& point_fields = {},
               const std::string& title = "fpflow fields");

}  // namespace fpflow
