// Acceptance suite: runs every verification criterion at its pinned tolerance
// and prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "fpflow/channel.hpp"
#include "fpflow/config.hpp"
#include "fpflow/power.hpp"
#include "fpflow/suites.hpp"

using namespace fpflow;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s  (%s)\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

RunConfig channel_config(int nx, const std::string& law = "bjs") {
    RunConfig c;
    c.nx = nx;
    c.ny_free = nx;
    c.ny_por = nx;
    c.k = 0.1;
    c.law_type = law;
    c.alpha = 1.0;
    c.out_dir = "acceptance_out";
    return c;
}

// ---------------------------------------------------------------------------
// 1. Quadratic-form property suite: PSD, isotropy, gradient vs finite
//    differences, degree-2 Euler identity; 1000 randomized cases each.
// ---------------------------------------------------------------------------
void criterion_1() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> mag(0.0, 2.0), rho(-1.0, 1.0), vel(-5.0, 5.0),
        angle(0.0, 2.0 * M_PI);
    const auto random_law = [&] {
        const double a11 = mag(rng), a22 = mag(rng);
        return InterfaceLaw(a11, rho(rng) * std::sqrt(a11 * a22), a22, mag(rng));
    };

    int psd_fail = 0, iso_fail = 0, grad_fail = 0, euler_fail = 0;
    double grad_worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const InterfaceLaw law = random_law();
        const Vec2 vf{vel(rng), vel(rng)}, vp{vel(rng), vel(rng)};
        const double vn = vel(rng);
        const double psi = interface_power_density(law, vf, vp, vn);
        if (!(psi >= -1e-12)) ++psd_fail;

        const double th = angle(rng), c = std::cos(th), s = std::sin(th);
        const Vec2 rvf{c * vf.x - s * vf.y, s * vf.x + c * vf.y};
        const Vec2 rvp{c * vp.x - s * vp.y, s * vp.x + c * vp.y};
        if (std::abs(interface_power_density(law, rvf, rvp, vn) - psi) >
            1e-12 * std::max(1.0, std::abs(psi)))
            ++iso_fail;

        const auto g = interface_power_gradients(law, vf, vp, vn);
        const double h = 1e-6;
        const double fd =
            (interface_power_density(law, {vf.x + h, vf.y}, vp, vn) -
             interface_power_density(law, {vf.x - h, vf.y}, vp, vn)) /
            (2.0 * h);
        const double rel = std::abs(fd - g.g_free.x) / std::max(1.0, std::abs(g.g_free.x));
        grad_worst = std::max(grad_worst, rel);
        if (rel >= 1e-6) ++grad_fail;

        const double euler = g.g_free.dot(vf) + g.g_por.dot(vp) + g.g_normal * vn;
        if (std::abs(euler - 2.0 * psi) > 1e-12 * std::max(1.0, std::abs(2.0 * psi)))
            ++euler_fail;
    }
    report(1, "quadratic-form property suite", !psd_fail && !iso_fail && !grad_fail && !euler_fail,
           "psd/iso/grad/euler failures " + std::to_string(psd_fail) + "/" +
               std::to_string(iso_fail) + "/" + std::to_string(grad_fail) + "/" +
               std::to_string(euler_fail) + ", worst grad rel err " + fmt(grad_worst));
}

// ---------------------------------------------------------------------------
// 2. Darcy-branch slip identity u_B - Q = (sqrt(k)/alpha) u'(0+) over a
//    3x3x3 sweep, to 1e-12.
// ---------------------------------------------------------------------------
void criterion_2() {
    double worst = 0.0;
    for (double k : {1e-4, 1e-2, 1.0})
        for (double alpha : {0.1, 1.0, 4.0})
            for (double G : {-2.0, -1.0, 0.5}) {
                const Ten2 K = Ten2::diag(k, k);
                const ChannelSolution s = solve_channel(
                    {1.0, 1.0, G, FluidProps(1.0, 1.0), PorousProps(0.4, K),
                     beavers_joseph_law(alpha, 1.0, K), PorousModel::darcy, alpha});
                const double res = s.u_B - s.Q - (std::sqrt(k) / alpha) * s.dudy_interface;
                worst = std::max(worst,
                                 std::abs(res) / std::max({std::abs(s.u_B), std::abs(s.Q), 1.0}));
            }
    report(2, "Beavers-Joseph slip identity (darcy branch)", worst < 1e-12,
           "worst residual " + fmt(worst) + " < 1e-12");
}

// ---------------------------------------------------------------------------
// 3. Inserting the named-law coefficients into the general tangential
//    conditions reproduces the classical slip relations on random states.
// ---------------------------------------------------------------------------
void criterion_3() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0), kpick(0.01, 2.0),
        apick(0.2, 4.0), ang(0.0, 2.0 * M_PI);
    double worst_bj = 0.0, worst_bjs = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double th = ang(rng);
        const Vec2 n{std::cos(th), std::sin(th)};
        const Vec2 s = n.rot90ccw();
        const double mu = apick(rng), alpha = apick(rng), k = kpick(rng);
        const Ten2 K = Ten2::diag(k, k);
        const double trK = K.trace();
        const double cf = u(rng), cp = u(rng);
        const Vec2 vf = cf * s + u(rng) * n;  // full velocities, random normal parts
        const Vec2 vp = cp * s + u(rng) * n;
        const double extra = u(rng);  // in-plane stretch, no shear contribution

        // BJ: build D_free satisfying the general condition, then check the
        // classical form  s.(-2 mu D) n = (alpha mu sqrt(3)/sqrt(trK)) s.(vf - vp).
        {
            const InterfaceLaw law = beavers_joseph_law(alpha, mu, K);
            const double shear = -2.0 * (law.a11 * cf + law.a12 * cp);  // s.T^extra n
            const Ten2 D = (shear / (2.0 * mu)) * (Ten2::outer(s, n) + Ten2::outer(n, s)) +
                           extra * (Ten2::outer(s, s) - Ten2::outer(n, n));
            const double lhs = s.dot((-2.0 * mu * D) * n);
            const double rhs =
                alpha * mu * std::sqrt(3.0) / std::sqrt(trK) * s.dot(vf - vp);
            worst_bj = std::max(worst_bj, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        // BJS: same with the porous velocity dropped.
        {
            const InterfaceLaw law = beavers_joseph_saffman_law(alpha, mu, K);
            const double shear = -2.0 * (law.a11 * cf + law.a12 * cp);
            const Ten2 D = (shear / (2.0 * mu)) * (Ten2::outer(s, n) + Ten2::outer(n, s)) +
                           extra * (Ten2::outer(s, s) - Ten2::outer(n, n));
            const double lhs = s.dot((-2.0 * mu * D) * n);
            const double rhs = alpha * mu * std::sqrt(3.0) / std::sqrt(trK) * s.dot(vf);
            worst_bjs = std::max(worst_bjs, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
    }
    report(3, "BJ/BJS recovery from the general tangential conditions",
           worst_bj < 1e-12 && worst_bjs < 1e-12,
           "worst residuals BJ " + fmt(worst_bj) + ", BJS " + fmt(worst_bjs) + " < 1e-12");
}

// ---------------------------------------------------------------------------
// 4. No-slip limit: slip velocity decays like sqrt(trK), exponent 1.0 +/- 0.1
//    over trK in {1e-2 .. 1e-8}.
// ---------------------------------------------------------------------------
void criterion_4() {
    std::vector<double> lx, ly;
    for (double trK = 1e-2; trK >= 1e-8 / 1.001; trK /= 10.0) {
        const double k = trK / 2.0;
        const Ten2 K = Ten2::diag(k, k);
        const ChannelSolution s = solve_channel(
            {1.0, 1.0, -1.0, FluidProps(1.0, 1.0), PorousProps(0.4, K),
             no_slip_limit_law(1.0, trK), PorousModel::brinkman, 1.0});
        lx.push_back(std::log(std::sqrt(trK)));
        ly.push_back(std::log(std::abs(s.u_B)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    report(4, "no-slip limit decay exponent", slope > 0.9 && slope < 1.1,
           "fitted exponent " + fmt(slope) + " in [0.9, 1.1]");
}

// ---------------------------------------------------------------------------
// 5. Minimum-power inequality on the nx=16 BJS channel: 100 perturbations,
//    amplitudes {1e-3,1e-2,1e-1,1}, zero violations beyond 1e-10 |P|, gap
//    slope 2.0 +/- 0.05.
// ---------------------------------------------------------------------------
void criterion_5() {
    const SuiteReport rep = suite_minpower(channel_config(16));
    std::string detail;
    bool pass = true;
    for (const auto& r : rep.rows) {
        pass = pass && r.pass;
        detail += r.name + "=" + fmt(r.value) + " ";
    }
    report(5, "minimum-power theorem (100 trials x 4 amplitudes)", pass, detail);
}

// ---------------------------------------------------------------------------
// 6. First variation vanishes at the discrete solution: max normalized
//    directional derivative < 1e-6 over 50 directions.
// ---------------------------------------------------------------------------
void criterion_6() {
    const SuiteReport rep = suite_gradient(channel_config(16));
    bool pass = true;
    std::string detail;
    for (const auto& r : rep.rows) {
        pass = pass && r.pass;
        detail += r.name + "=" + fmt(r.value) + " ";
    }
    report(6, "first-variation vanishing (50 directions)", pass, detail);
}

// ---------------------------------------------------------------------------
// 7. Uniqueness: permuted dofs + different pressure data agree to 1e-8 in
//    velocity and up to one matched constant per region in pressure.
// ---------------------------------------------------------------------------
void criterion_7() {
    const SuiteReport rep = suite_uniqueness(channel_config(16));
    bool pass = true;
    std::string detail;
    for (const auto& r : rep.rows) {
        pass = pass && r.pass;
        detail += r.name + "=" + fmt(r.value) + " ";
    }
    report(7, "uniqueness under permutation and datum change", pass, detail);
}

// ---------------------------------------------------------------------------
// 8. Interface-residual convergence: r3, r4 orders >= 1 over nx = 8..64 and
//    slip-velocity error < 1e-3 at nx = 64.
// ---------------------------------------------------------------------------
void criterion_8() {
    const SuiteReport rep = suite_convergence(channel_config(8));
    bool pass = true;
    std::string detail;
    for (const auto& r : rep.rows) {
        pass = pass && r.pass;
        detail += r.name + "=" + fmt(r.value) + " ";
    }
    report(8, "interface residual convergence (nx = 8..64)", pass, detail);
}

// ---------------------------------------------------------------------------
// 9. Discrete mass conservation and normal-velocity jump rows on a solve.
// ---------------------------------------------------------------------------
void criterion_9() {
    const RunConfig config = channel_config(16);
    const Scene scene = build_scene(config);
    const Solution sol =
        solve(assemble_coupled_system(scene.mesh, scene.dofs, scene.model));
    const auto res = interface_residuals(sol, scene.mesh, scene.dofs, scene.model);
    const double mass = max_mass_conservation_residual(sol, scene.mesh, scene.dofs);
    const bool pass = res.r1_weighted_max < 1e-9 && mass < 1e-10;
    report(9, "mass conservation and normal-jump rows", pass,
           "weighted jump " + fmt(res.r1_weighted_max) + " < 1e-9, mass " + fmt(mass) +
               " < 1e-10");
}

// ---------------------------------------------------------------------------
// 10. Darcy incompatibility: the darcy-branch oracle with BJS coefficients
//     forces zero tangential porous velocity at the interface.
// ---------------------------------------------------------------------------
void criterion_10() {
    const double k = 0.01;
    const Ten2 K = Ten2::diag(k, k);
    const ChannelSolution s = solve_channel(
        {1.0, 1.0, -1.0, FluidProps(1.0, 1.0), PorousProps(0.4, K),
         beavers_joseph_saffman_law(1.0, 1.0, K), PorousModel::darcy, 1.0});
    const bool pass = s.law_porous_slip.has_value() && *s.law_porous_slip == 0.0 &&
                      std::abs(s.u_B) > 0.0;
    report(10, "darcy incompatibility of BJS (porous no-slip)", pass,
           "law-implied porous slip " + fmt(s.law_porous_slip.value_or(-1.0)) +
               ", free slip " + fmt(s.u_B));
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    std::printf("%d of 10 criteria passed in %.1f s\n", 10 - g_failures, dt.count());
    return g_failures == 0 ? 0 : 1;
}
