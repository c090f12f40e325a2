#include "fpflow/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fpflow {

std::string hash_bytes(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw config_error(line, "expected a number, got '" + v + "'");
    }
    if (pos != v.size()) throw config_error(line, "trailing characters after number: '" + v + "'");
    return d;
}

int parse_int(const std::string& v, int line) {
    const double d = parse_double(v, line);
    if (d != std::floor(d)) throw config_error(line, "expected an integer, got '" + v + "'");
    return static_cast<int>(d);
}

Vec2 parse_vec2(const std::string& v, int line) {
    std::istringstream is(v);
    double x, y;
    if (!(is >> x >> y)) throw config_error(line, "expected two numbers, got '" + v + "'");
    std::string rest;
    if (is >> rest) throw config_error(line, "trailing characters after vector: '" + v + "'");
    return {x, y};
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    c.config_hash = hash_bytes(text);

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    bool kyy_seen = false;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw config_error(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            static const std::set<std::string> known = {
                "geometry", "mesh", "fluid", "porous", "interface_law", "problem", "run"};
            if (!known.count(section))
                throw config_error(line_no, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw config_error(line_no, "key outside of any section");
        if (value.empty()) throw config_error(line_no, "missing value for '" + key + "'");

        const std::string qualified = section + "." + key;
        if (qualified == "geometry.x0") c.x0 = parse_double(value, line_no);
        else if (qualified == "geometry.x1") c.x1 = parse_double(value, line_no);
        else if (qualified == "geometry.y_interface") c.y_interface = parse_double(value, line_no);
        else if (qualified == "geometry.y_top") c.y_top = parse_double(value, line_no);
        else if (qualified == "geometry.y_bottom") c.y_bottom = parse_double(value, line_no);
        else if (qualified == "mesh.nx") c.nx = parse_int(value, line_no);
        else if (qualified == "mesh.ny_free") c.ny_free = parse_int(value, line_no);
        else if (qualified == "mesh.ny_por") c.ny_por = parse_int(value, line_no);
        else if (qualified == "fluid.mu") c.mu = parse_double(value, line_no);
        else if (qualified == "fluid.gamma") c.gamma = parse_double(value, line_no);
        else if (qualified == "porous.phi") c.phi = parse_double(value, line_no);
        else if (qualified == "porous.k") c.k = parse_double(value, line_no);
        else if (qualified == "porous.kxy") c.kxy = parse_double(value, line_no);
        else if (qualified == "porous.kyy") { c.kyy = parse_double(value, line_no); kyy_seen = true; }
        else if (qualified == "interface_law.type") c.law_type = value;
        else if (qualified == "interface_law.alpha") c.alpha = parse_double(value, line_no);
        else if (qualified == "interface_law.a11") c.a11 = parse_double(value, line_no);
        else if (qualified == "interface_law.a12") c.a12 = parse_double(value, line_no);
        else if (qualified == "interface_law.a22") c.a22 = parse_double(value, line_no);
        else if (qualified == "interface_law.beta") c.beta = parse_double(value, line_no);
        else if (qualified == "problem.pressure_gradient") c.pressure_gradient = parse_double(value, line_no);
        else if (qualified == "problem.body_force_free") c.body_force_free = parse_vec2(value, line_no);
        else if (qualified == "problem.body_force_por") c.body_force_por = parse_vec2(value, line_no);
        else if (qualified == "problem.bc_plan") c.bc_plan = value;
        else if (qualified == "run.out_dir") c.out_dir = value;
        else if (qualified == "run.seed") c.seed = static_cast<std::uint64_t>(parse_double(value, line_no));
        else if (qualified == "run.threads") c.threads = parse_int(value, line_no);
        else throw config_error(line_no, "unknown key '" + key + "' in section [" + section + "]");
    }
    (void)kyy_seen;

    if (c.law_type != "bj" && c.law_type != "bjs" && c.law_type != "noslip" &&
        c.law_type != "coefficients")
        throw config_error(0, "interface_law.type must be bj, bjs, noslip or coefficients");
    if (c.bc_plan != "channel_traction" && c.bc_plan != "all_dirichlet")
        throw config_error(0, "problem.bc_plan must be channel_traction or all_dirichlet");
    if (c.threads < 1) throw config_error(0, "run.threads must be >= 1");
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error(0, "cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

Ten2 permeability_tensor(const RunConfig& c) {
    return Ten2(c.k, c.kxy, c.kxy, c.kyy.value_or(c.k));
}

InterfaceLaw make_law(const RunConfig& c) {
    const Ten2 K = permeability_tensor(c);
    if (c.law_type == "bj") return beavers_joseph_law(c.alpha, c.mu, K);
    if (c.law_type == "bjs") return beavers_joseph_saffman_law(c.alpha, c.mu, K);
    if (c.law_type == "noslip") return no_slip_limit_law(c.alpha, K.trace());
    return InterfaceLaw(c.a11, c.a12, c.a22, c.beta);
}

Scene build_scene(const RunConfig& config, std::optional<std::uint64_t> permutation_seed,
                  std::optional<int> nx_override) {
    Scene s{Mesh{}, DofMap{},
            ModelConfig{FluidProps(config.mu, config.gamma),
                        PorousProps(config.phi, permeability_tensor(config)),
                        make_law(config)},
            ChannelProblem{config.y_top - config.y_interface,
                           config.y_interface - config.y_bottom,
                           config.pressure_gradient,
                           FluidProps(config.mu, config.gamma),
                           PorousProps(config.phi, permeability_tensor(config)),
                           make_law(config), PorousModel::brinkman, config.alpha},
            ChannelSolution{}};

    const DomainGeometry geom{config.x0, config.x1, config.y_interface, config.y_top,
                              config.y_bottom};
    int nx = config.nx, ny_free = config.ny_free, ny_por = config.ny_por;
    if (nx_override) {
        const double scale = static_cast<double>(*nx_override) / config.nx;
        nx = *nx_override;
        ny_free = std::max(1, static_cast<int>(std::lround(config.ny_free * scale)));
        ny_por = std::max(1, static_cast<int>(std::lround(config.ny_por * scale)));
    }

    const bool traction_plan = config.bc_plan == "channel_traction";
    s.mesh = build_channel_mesh(geom, nx, ny_free, ny_por,
                                traction_plan ? BoundaryPlan::channel_traction()
                                              : BoundaryPlan::all_velocity());
    s.dofs = permutation_seed ? build_dof_map(s.mesh, *permutation_seed)
                              : build_dof_map(s.mesh);

    // 1D reference profile; the channel oracle requires an isotropic K, for
    // anisotropic tensors it is built with the equivalent k = tr(K)/2.
    ChannelProblem oracle_problem = s.problem;
    if (!oracle_problem.porous.is_isotropic())
        oracle_problem.porous =
            PorousProps(config.phi, Ten2::diag(permeability_tensor(config).trace() / 2.0,
                                               permeability_tensor(config).trace() / 2.0));
    s.oracle = solve_channel(oracle_problem);

    s.model.body_force_free = config.body_force_free;
    s.model.body_force_por = config.body_force_por;

    if (traction_plan) {
        // Lateral tractions consistent with the 1D profile: the full stress
        // T = -p I + 2 mu D with p(x) = G (x - x0), evaluated on each side.
        const double mu = config.mu;
        const double G = config.pressure_gradient;
        const double x_mid = 0.5 * (config.x0 + config.x1);
        const double p_right = G * (config.x1 - config.x0);
        const ChannelSolution oracle = s.oracle;
        const auto lateral = [mu, G, x_mid, p_right, oracle](Vec2 pos) -> Vec2 {
            (void)G;
            const double shear = mu * oracle.eval_dudy(pos.y);
            if (pos.x < x_mid) return {0.0, -shear};        // n = (-1, 0), p(x0) = 0
            return {-p_right, shear};                       // n = (+1, 0)
        };
        s.model.traction_free = lateral;
        s.model.traction_por = lateral;
    }
    return s;
}

}  // namespace fpflow
