#include "fpflow/vtk.hpp"

#include <fstream>
#include <iomanip>

namespace fpflow {

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<VtkPointField>& point_fields,
               const std::string& title) {
    std::ofstream out(path, std::ios::binary);  // binary stream mode keeps LF endings
    if (!out) throw std::runtime_error("cannot open VTK output file: " + path);
    out << std::setprecision(17);

    const auto n = mesh.vertices.size();
    const auto m = mesh.triangles.size();

    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";

    out << "POINTS " << n << " double\n";
    for (const auto& p : mesh.vertices) out << p.x << " " << p.y << " 0\n";

    out << "CELLS " << m << " " << 4 * m << "\n";
    for (const auto& t : mesh.triangles)
        out << "3 " << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";

    out << "CELL_TYPES " << m << "\n";
    for (std::size_t i = 0; i < m; ++i) out << "5\n";  // VTK_TRIANGLE

    out << "CELL_DATA " << m << "\n";
    out << "SCALARS subdomain int 1\nLOOKUP_TABLE default\n";
    for (const auto& t : mesh.triangles) out << (t.region == Region::free_flow ? 0 : 1) << "\n";

    if (!point_fields.empty()) {
        out << "POINT_DATA " << n << "\n";
        for (const auto& f : point_fields) {
            if (f.is_vector) {
                if (f.values.size() != 2 * n)
                    throw std::runtime_error("vector field size mismatch: " + f.name);
                out << "VECTORS " << f.name << " double\n";
                for (std::size_t i = 0; i < n; ++i)
                    out << f.values[2 * i] << " " << f.values[2 * i + 1] << " 0\n";
            } else {
                if (f.values.size() != n)
                    throw std::runtime_error("scalar field size mismatch: " + f.name);
                out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
                for (std::size_t i = 0; i < n; ++i) out << f.values[i] << "\n";
            }
        }
    }
}

}  // namespace fpflow
