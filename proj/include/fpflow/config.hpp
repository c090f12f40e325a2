#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fpflow/channel.hpp"
#include "fpflow/fem.hpp"
#include "fpflow/mesh.hpp"

namespace fpflow {

/// Configuration-file error with a line-level diagnostic.
class config_error : public std::runtime_error {
public:
    config_error(int line, const std::string& message)
        : std::runtime_error("config line " + std::to_string(line) + ": " + message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Flat, typed key-value run configuration (see docs/config.md for the file
/// schema). Defaults describe the unit two-layer channel.
struct RunConfig {
    // [geometry]
    double x0 = 0.0, x1 = 1.0;
    double y_interface = 0.0, y_top = 1.0, y_bottom = -1.0;

    // [mesh]
    int nx = 16, ny_free = 16, ny_por = 16;

    // [fluid]
    double mu = 1.0, gamma = 1.0;

    // [porous]
    double phi = 0.4;
    double k = 0.1;    ///< isotropic permeability; kxy/kyy extend to a tensor
    double kxy = 0.0;
    std::optional<double> kyy;

    // [interface_law]  type in {bj, bjs, noslip, coefficients}
    std::string law_type = "bjs";
    double alpha = 1.0;
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, beta = 0.0;

    // [problem]
    double pressure_gradient = -1.0;  ///< G = dP/dx
    Vec2 body_force_free{0.0, 0.0};
    Vec2 body_force_por{0.0, 0.0};
    std::string bc_plan = "channel_traction";  ///< or all_dirichlet

    // [run]
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    int threads = 1;

    std::string config_hash = "0x0000000000000000";
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// FNV-1a 64-bit hash of the raw configuration bytes, "0x" + 16 hex digits.
std::string hash_bytes(const std::string& bytes);

Ten2 permeability_tensor(const RunConfig& c);
InterfaceLaw make_law(const RunConfig& c);

/// Everything needed to run one configuration: mesh, dof layout, model data
/// and the matching 1D channel oracle (brinkman branch, used both for lateral
/// traction data and for accuracy checks).
struct Scene {
    Mesh mesh;
    DofMap dofs;
    ModelConfig model;
    ChannelProblem problem;
    ChannelSolution oracle;
};

/// Builds the scene; mesh resolution can be overridden (convergence ladders)
/// and the dof order optionally permuted with a seed.
Scene build_scene(const RunConfig& config,
                  std::optional<std::uint64_t> permutation_seed = std::nullopt,
                  std::optional<int> nx_override = std::nullopt);

}  // namespace fpflow
