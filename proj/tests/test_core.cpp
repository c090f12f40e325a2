#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fpflow/core.hpp"

using namespace fpflow;

namespace {

std::mt19937_64 rng(20240811ull);

InterfaceLaw random_psd_law() {
    std::uniform_real_distribution<double> mag(0.0, 2.0);
    std::uniform_real_distribution<double> rho(-1.0, 1.0);
    const double a11 = mag(rng), a22 = mag(rng);
    const double a12 = rho(rng) * std::sqrt(a11 * a22);
    return InterfaceLaw(a11, a12, a22, mag(rng));
}

Vec2 random_vec(double s = 3.0) {
    std::uniform_real_distribution<double> u(-s, s);
    return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("power density: frozen values") {
    CHECK(interface_power_density(InterfaceLaw(1, 0, 1, 0), {0, 0}, {0, 0}, 0.0) == 0.0);
    CHECK(interface_power_density(InterfaceLaw(2, 0, 0, 0), {1, 0}, {0, 0}, 0.0) == 2.0);
    // 1 - 2 + 1 + 3*4 = 12
    CHECK(interface_power_density(InterfaceLaw(1, -1, 1, 3), {1, 0}, {1, 0}, 2.0) ==
          doctest::Approx(12.0).epsilon(1e-15));
}

TEST_CASE("power gradients: frozen values") {
    const auto g0 = interface_power_gradients(InterfaceLaw(1, 0, 1, 0), {0, 0}, {0, 0}, 0.0);
    CHECK(g0.g_free.x == 0.0);
    CHECK(g0.g_free.y == 0.0);
    CHECK(g0.g_por.x == 0.0);
    CHECK(g0.g_normal == 0.0);

    const auto g1 = interface_power_gradients(InterfaceLaw(1, 0, 1, 0), {3, 0}, {0, 0}, 0.0);
    CHECK(g1.g_free.x == doctest::Approx(6.0));
    CHECK(g1.g_free.y == 0.0);
    CHECK(g1.g_por.x == 0.0);
    CHECK(g1.g_normal == 0.0);
}

TEST_CASE("power density is non-negative for PSD laws") {
    for (int i = 0; i < 1000; ++i) {
        const InterfaceLaw law = random_psd_law();
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        const double psi = interface_power_density(law, random_vec(), random_vec(), u(rng));
        CHECK(psi >= -1e-12);
    }
}

TEST_CASE("power density is invariant under joint rotations") {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const InterfaceLaw law = random_psd_law();
        const Vec2 vf = random_vec(), vp = random_vec();
        const double vn = u(rng);
        const double th = angle(rng);
        const double c = std::cos(th), s = std::sin(th);
        const Vec2 rvf{c * vf.x - s * vf.y, s * vf.x + c * vf.y};
        const Vec2 rvp{c * vp.x - s * vp.y, s * vp.x + c * vp.y};
        const double p0 = interface_power_density(law, vf, vp, vn);
        const double p1 = interface_power_density(law, rvf, rvp, vn);
        CHECK(std::abs(p1 - p0) <= 1e-12 * std::max(1.0, std::abs(p0)));
    }
}

TEST_CASE("gradients match central finite differences") {
    const double h = 1e-6;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const InterfaceLaw law = random_psd_law();
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        const Vec2 vf = random_vec(), vp = random_vec();
        const double vn = u(rng);
        const auto g = interface_power_gradients(law, vf, vp, vn);

        const auto fd = [&](auto perturbed) {
            return (perturbed(h) - perturbed(-h)) / (2.0 * h);
        };
        const double fd_fx = fd([&](double e) {
            return interface_power_density(law, {vf.x + e, vf.y}, vp, vn);
        });
        const double fd_fy = fd([&](double e) {
            return interface_power_density(law, {vf.x, vf.y + e}, vp, vn);
        });
        const double fd_px = fd([&](double e) {
            return interface_power_density(law, vf, {vp.x + e, vp.y}, vn);
        });
        const double fd_py = fd([&](double e) {
            return interface_power_density(law, vf, {vp.x, vp.y + e}, vn);
        });
        const double fd_n = fd([&](double e) {
            return interface_power_density(law, vf, vp, vn + e);
        });

        const double scale = std::max({1.0, std::abs(g.g_free.x), std::abs(g.g_free.y),
                                       std::abs(g.g_por.x), std::abs(g.g_por.y),
                                       std::abs(g.g_normal)});
        worst = std::max({worst, std::abs(fd_fx - g.g_free.x) / scale,
                          std::abs(fd_fy - g.g_free.y) / scale,
                          std::abs(fd_px - g.g_por.x) / scale,
                          std::abs(fd_py - g.g_por.y) / scale,
                          std::abs(fd_n - g.g_normal) / scale});
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("degree-2 homogeneity: g.v = 2 psi") {
    for (int i = 0; i < 1000; ++i) {
        const InterfaceLaw law = random_psd_law();
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        const Vec2 vf = random_vec(), vp = random_vec();
        const double vn = u(rng);
        const double psi = interface_power_density(law, vf, vp, vn);
        const auto g = interface_power_gradients(law, vf, vp, vn);
        const double euler = g.g_free.dot(vf) + g.g_por.dot(vp) + g.g_normal * vn;
        CHECK(std::abs(euler - 2.0 * psi) <= 1e-12 * std::max(1.0, std::abs(2.0 * psi)));
    }
}

TEST_CASE("interface law invariants are enforced") {
    CHECK_THROWS_AS(InterfaceLaw(-1.0, 0.0, -1.0, 0.0), invalid_model_data);
    CHECK_THROWS_AS(InterfaceLaw(1.0, 2.0, 1.0, 0.0), invalid_model_data);  // a12^2 > a11 a22
    CHECK_THROWS_AS(InterfaceLaw(1.0, 0.0, 1.0, -0.5), invalid_model_data);
    CHECK_NOTHROW(InterfaceLaw(1.0, 1.0, 1.0, 0.0));  // PSD boundary is allowed
}

TEST_CASE("material invariants are enforced") {
    CHECK_THROWS_AS(FluidProps(0.0, 1.0), invalid_model_data);
    CHECK_THROWS_AS(FluidProps(1.0, -1.0), invalid_model_data);
    CHECK_THROWS_AS(PorousProps(0.0, Ten2::identity()), invalid_model_data);
    CHECK_THROWS_AS(PorousProps(1.5, Ten2::identity()), invalid_model_data);
    CHECK_THROWS_AS(PorousProps(0.5, Ten2(1.0, 0.2, 0.1, 1.0)), invalid_model_data);
    CHECK_THROWS_AS(PorousProps(0.5, Ten2::diag(1.0, -1.0)), invalid_model_data);
    CHECK_NOTHROW(PorousProps(1.0, Ten2(2.0, 0.5, 0.5, 1.0)));
}

TEST_CASE("beavers-joseph law coefficients") {
    const auto law = beavers_joseph_law(1.0, 1.0, Ten2::diag(1.5, 1.5));  // trK = 3
    CHECK(law.a11 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(law.a22 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(law.a12 == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(law.beta == 0.0);

    // sqrt(3)/(2 sqrt(2e-4)), evaluated independently.
    const auto tiny = beavers_joseph_law(1.0, 1.0, Ten2::diag(1e-4, 1e-4));
    CHECK(tiny.a11 == doctest::Approx(61.237243569579455).epsilon(1e-12));
    CHECK(tiny.a12 == doctest::Approx(-tiny.a11).epsilon(1e-15));

    // Jump-only penalty: equal traces expend no power.
    for (int i = 0; i < 50; ++i) {
        const Vec2 v = random_vec();
        CHECK(std::abs(interface_power_density(law, v, v, 0.0)) <= 1e-14);
    }
    CHECK_THROWS_AS(beavers_joseph_law(1.0, 1.0, Ten2::diag(0.0, 0.0)), invalid_model_data);
}

TEST_CASE("beavers-joseph-saffman law coefficients") {
    const auto law = beavers_joseph_saffman_law(1.0, 1.0, Ten2::diag(1.5, 1.5));
    CHECK(law.a11 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(law.a22 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(law.a12 == 0.0);
    CHECK(law.strictly_definite());

    // With a vanishing porous trace the free-side gradient is 2 a11 vf*.
    const Vec2 vf = random_vec();
    const auto g = interface_power_gradients(law, vf, {0, 0}, 0.0);
    CHECK(g.g_free.x == doctest::Approx(2.0 * law.a11 * vf.x).epsilon(1e-14));
    CHECK(g.g_free.y == doctest::Approx(2.0 * law.a11 * vf.y).epsilon(1e-14));

    // Linear in alpha.
    const auto law2 = beavers_joseph_saffman_law(2.0, 1.0, Ten2::diag(1.5, 1.5));
    CHECK(law2.a11 == doctest::Approx(2.0 * law.a11).epsilon(1e-15));
}

TEST_CASE("no-slip limit law") {
    const auto law = no_slip_limit_law(1.0, 1.0);
    CHECK(law.a11 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(law.a22 == 0.0);
    CHECK(law.a12 == 0.0);
    CHECK(law.beta == 0.0);

    CHECK(no_slip_limit_law(1.0, 1e-8).a11 == doctest::Approx(5e3).epsilon(1e-13));

    // Halving trK multiplies a11 by sqrt(2).
    const double r = no_slip_limit_law(1.0, 0.5).a11 / no_slip_limit_law(1.0, 1.0).a11;
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

    CHECK_THROWS_AS(no_slip_limit_law(1.0, 0.0), invalid_model_data);
}

TEST_CASE("tensor helpers") {
    const Ten2 t(1.0, 2.0, 3.0, 4.0);
    const Ten2 s = t.symmetric_part();
    CHECK(s.a01 == s.a10);
    CHECK(s.symmetric_part().ddot(s) == doctest::Approx(s.ddot(s)));  // idempotent
    CHECK(t.trace() == 5.0);
    const Ten2 inv = t.inverse();
    const Ten2 prod{inv.a00 * t.a00 + inv.a01 * t.a10, inv.a00 * t.a01 + inv.a01 * t.a11,
                    inv.a10 * t.a00 + inv.a11 * t.a10, inv.a10 * t.a01 + inv.a11 * t.a11};
    CHECK(prod.a00 == doctest::Approx(1.0));
    CHECK(prod.a11 == doctest::Approx(1.0));
    CHECK(prod.a01 == doctest::Approx(0.0));
}
