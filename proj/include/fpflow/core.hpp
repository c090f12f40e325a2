#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fpflow {

/// Thrown when a value violates a model invariant (bad material data,
/// indefinite interface law, degenerate geometry, ...).
class invalid_model_data : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Small dense algebra: 2-vectors and 2x2 tensors.
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }

    /// Rotation by +90 degrees (counter-clockwise).
    constexpr Vec2 rot90ccw() const { return {-y, x}; }

    Vec2 normalized() const {
        const double n = norm();
        if (n == 0.0) throw invalid_model_data("cannot normalize zero vector");
        return {x / n, y / n};
    }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

struct Ten2 {
    // Row-major components.
    double a00 = 0.0, a01 = 0.0;
    double a10 = 0.0, a11 = 0.0;

    constexpr Ten2() = default;
    constexpr Ten2(double m00, double m01, double m10, double m11)
        : a00(m00), a01(m01), a10(m10), a11(m11) {}

    static constexpr Ten2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Ten2 diag(double d0, double d1) { return {d0, 0.0, 0.0, d1}; }
    static constexpr Ten2 outer(Vec2 u, Vec2 v) {
        return {u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y};
    }

    constexpr Ten2 operator+(const Ten2& o) const {
        return {a00 + o.a00, a01 + o.a01, a10 + o.a10, a11 + o.a11};
    }
    constexpr Ten2 operator-(const Ten2& o) const {
        return {a00 - o.a00, a01 - o.a01, a10 - o.a10, a11 - o.a11};
    }
    constexpr Ten2 operator*(double s) const {
        return {a00 * s, a01 * s, a10 * s, a11 * s};
    }
    constexpr Vec2 operator*(Vec2 v) const {
        return {a00 * v.x + a01 * v.y, a10 * v.x + a11 * v.y};
    }

    constexpr Ten2 transpose() const { return {a00, a10, a01, a11}; }
    constexpr Ten2 symmetric_part() const {
        return {a00, 0.5 * (a01 + a10), 0.5 * (a01 + a10), a11};
    }
    constexpr double trace() const { return a00 + a11; }
    constexpr double det() const { return a00 * a11 - a01 * a10; }

    /// Double contraction A : B.
    constexpr double ddot(const Ten2& o) const {
        return a00 * o.a00 + a01 * o.a01 + a10 * o.a10 + a11 * o.a11;
    }

    Ten2 inverse() const {
        const double d = det();
        if (d == 0.0) throw invalid_model_data("singular 2x2 tensor");
        return {a11 / d, -a01 / d, -a10 / d, a00 / d};
    }
};

inline constexpr Ten2 operator*(double s, const Ten2& t) { return t * s; }

// ---------------------------------------------------------------------------
// Material data.
// ---------------------------------------------------------------------------

/// Fluid properties shared by both regions (same true density on either side
/// of the interface).
struct FluidProps {
    double mu;     ///< dynamic viscosity [Pa s]
    double gamma;  ///< true fluid density [kg/m^3]

    FluidProps(double mu_, double gamma_);
};

/// Porous-matrix properties: porosity and a symmetric positive-definite
/// permeability tensor.
struct PorousProps {
    double phi;  ///< porosity, in (0, 1]
    Ten2 K;      ///< permeability tensor [m^2]

    PorousProps(double phi_, const Ten2& K_);

    Ten2 K_inverse() const { return K.inverse(); }
    bool is_isotropic() const { return K.a01 == 0.0 && K.a10 == 0.0 && K.a00 == K.a11; }
};

/// Coefficients of the quadratic interface power density
///
///   a11 |vf*|^2 + 2 a12 vf*.vp* + a22 |vp*|^2 + beta vn^2
///
/// acting on the tangential velocities on either side of the interface and
/// on the normal velocity. Positive semi-definiteness requires a11, a22,
/// beta >= 0 and a11*a22 >= a12^2.
struct InterfaceLaw {
    double a11;
    double a12;
    double a22;
    double beta;

    InterfaceLaw(double a11_, double a12_, double a22_, double beta_);

    /// Strict inequality a11*a22 > a12^2 (positive-definite tangential block).
    bool strictly_definite() const { return a11 * a22 > a12 * a12; }
};

// ---------------------------------------------------------------------------
// Interface power density and its gradients.
// ---------------------------------------------------------------------------

/// Power expended per unit interface area for the given tangential velocities
/// and normal velocity. Inputs are assumed tangential; no projection is done
/// here.
double interface_power_density(const InterfaceLaw& law, Vec2 vt_free, Vec2 vt_por,
                               double vn);

struct InterfacePowerGradients {
    Vec2 g_free;     ///< d/d(vf*) = 2 (a11 vf* + a12 vp*)
    Vec2 g_por;      ///< d/d(vp*) = 2 (a12 vf* + a22 vp*)
    double g_normal; ///< d/d(vn)  = 2 beta vn
};

InterfacePowerGradients interface_power_gradients(const InterfaceLaw& law,
                                                  Vec2 vt_free, Vec2 vt_por,
                                                  double vn);

// ---------------------------------------------------------------------------
// Named interface laws.
// ---------------------------------------------------------------------------

/// Beavers-Joseph slip law: penalizes only the tangential velocity jump.
/// a11 = a22 = -a12 = alpha*mu*sqrt(3)/(2 sqrt(tr K)), beta = 0.
InterfaceLaw beavers_joseph_law(double alpha, double mu, const Ten2& K);

/// Beavers-Joseph-Saffman law: drops the porous-side velocity.
/// a11 = a22 = alpha*mu*sqrt(3)/(2 sqrt(tr K)), a12 = 0, beta = 0.
InterfaceLaw beavers_joseph_saffman_law(double alpha, double mu, const Ten2& K);

/// One-sided penalty a11 = alpha/(2 sqrt(trK)) that drives the free-side
/// tangential slip to zero as trK -> 0.
InterfaceLaw no_slip_limit_law(double alpha, double trK);

}  // namespace fpflow
