#include "fpflow/core.hpp"

namespace fpflow {

FluidProps::FluidProps(double mu_, double gamma_) : mu(mu_), gamma(gamma_) {
    if (!(mu > 0.0)) throw invalid_model_data("viscosity mu must be > 0");
    if (!(gamma > 0.0)) throw invalid_model_data("density gamma must be > 0");
}

PorousProps::PorousProps(double phi_, const Ten2& K_) : phi(phi_), K(K_) {
    if (!(phi > 0.0 && phi <= 1.0)) throw invalid_model_data("porosity phi must lie in (0, 1]");
    if (K.a01 != K.a10) throw invalid_model_data("permeability tensor K must be symmetric");
    // Eigenvalues of a symmetric 2x2: positive iff trace > 0 and det > 0.
    if (!(K.trace() > 0.0 && K.det() > 0.0))
        throw invalid_model_data("permeability tensor K must be positive definite");
}

InterfaceLaw::InterfaceLaw(double a11_, double a12_, double a22_, double beta_)
    : a11(a11_), a12(a12_), a22(a22_), beta(beta_) {
    if (!(a11 >= 0.0 && a22 >= 0.0))
        throw invalid_model_data("interface law requires a11 >= 0 and a22 >= 0");
    if (!(beta >= 0.0)) throw invalid_model_data("interface law requires beta >= 0");
    if (!(a11 * a22 >= a12 * a12))
        throw invalid_model_data(
            "interface law violates positive semi-definiteness: a11*a22 < a12^2");
}

double interface_power_density(const InterfaceLaw& law, Vec2 vt_free, Vec2 vt_por,
                               double vn) {
    return law.a11 * vt_free.dot(vt_free) + 2.0 * law.a12 * vt_free.dot(vt_por) +
           law.a22 * vt_por.dot(vt_por) + law.beta * vn * vn;
}

InterfacePowerGradients interface_power_gradients(const InterfaceLaw& law,
                                                  Vec2 vt_free, Vec2 vt_por,
                                                  double vn) {
    InterfacePowerGradients g;
    g.g_free = 2.0 * (law.a11 * vt_free + law.a12 * vt_por);
    g.g_por = 2.0 * (law.a12 * vt_free + law.a22 * vt_por);
    g.g_normal = 2.0 * law.beta * vn;
    return g;
}

namespace {
double slip_prefactor(double alpha, double mu, const Ten2& K) {
    if (!(alpha > 0.0)) throw invalid_model_data("slip coefficient alpha must be > 0");
    const double trK = K.trace();
    if (!(trK > 0.0)) throw invalid_model_data("degenerate permeability: tr K must be > 0");
    return alpha * mu * std::sqrt(3.0) / (2.0 * std::sqrt(trK));
}
}  // namespace

InterfaceLaw beavers_joseph_law(double alpha, double mu, const Ten2& K) {
    const double c = slip_prefactor(alpha, mu, K);
    return InterfaceLaw(c, -c, c, 0.0);
}

InterfaceLaw beavers_joseph_saffman_law(double alpha, double mu, const Ten2& K) {
    const double c = slip_prefactor(alpha, mu, K);
    return InterfaceLaw(c, 0.0, c, 0.0);
}

InterfaceLaw no_slip_limit_law(double alpha, double trK) {
    if (!(trK > 0.0)) throw invalid_model_data("degenerate permeability: tr K must be > 0");
    return InterfaceLaw(alpha / (2.0 * std::sqrt(trK)), 0.0, 0.0, 0.0);
}

}  // namespace fpflow
