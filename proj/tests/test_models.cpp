#include <doctest.h>

#include "frobkit/canonical.hpp"
#include "frobkit/errors.hpp"
#include "frobkit/models.hpp"
#include "oracles.hpp"

using namespace frobkit;

TEST_CASE("nm11 closed forms at omega = i") {
    const Nm11Data d = nm11_closed_forms(Complex(0, 1));
    CHECK(std::abs(d.q - 2.0) < 1e-14);
    const std::vector<Complex> a(d.a.begin(), d.a.end());
    CHECK(oracle::set_distance(a, {2.0, Complex(0, 1), Complex(0, -1)}) < 1e-14);
    for (Complex ak : d.a)
        CHECK(std::abs(ak * (ak - 1.0) * (ak - 1.0) - d.q) < 1e-13);
    const auto sq = oracle::nm11_omega_sq(Complex(0, 1));
    CHECK(std::abs(sq[0] + 0.05) < 1e-15);
    CHECK(std::abs(sq[1] - Complex(-0.1, 0.05)) < 1e-15);
    CHECK(std::abs(sq[2] - Complex(-0.1, -0.05)) < 1e-15);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(d.omega_sq[k] - sq[k]) < 1e-15);
    // The printed omega_2², omega_3² belong to a_3, a_2.
    CHECK(std::abs(d.omega_sq[0] - d.omega_sq_roots[0]) < 1e-14);
    CHECK(std::abs(d.omega_sq[1] - d.omega_sq_roots[2]) < 1e-14);
    CHECK(std::abs(d.omega_sq[2] - d.omega_sq_roots[1]) < 1e-14);
    CHECK(std::abs(d.omega_sq[0] + d.omega_sq[1] + d.omega_sq[2] + 0.25) < 1e-14);
    CHECK_THROWS_AS(nm11_closed_forms(3.0), DegenerateError);
}

TEST_CASE("omega to minus omega swaps a_2 and a_3") {
    const Complex w{0.7, 1.3};
    const Nm11Data p = nm11_closed_forms(w), m = nm11_closed_forms(-w);
    CHECK(std::abs(p.a[0] - m.a[0]) < 1e-14);
    CHECK(std::abs(p.a[1] - m.a[2]) < 1e-14);
    CHECK(std::abs(p.a[2] - m.a[1]) < 1e-14);
}

TEST_CASE("nm11 tau function") {
    CHECK(std::abs(nm11_log_tau(2.0, 1.0) - std::log(400.0) / 24.0) < 1e-12);
    CHECK_THROWS_AS(nm11_log_tau(4.0 / 27.0, 1.0), DegenerateError);
    CHECK_THROWS_AS(nm11_log_tau(0.0, 1.0), DegenerateError);
    const std::vector<Complex> x{0.0, 2.0, 1.0};
    const auto g = nm11_log_tau_gradient(x);
    CHECK(std::abs(x[2] * g[2] + 0.01) < 1e-14);
    CHECK(std::abs(1.5 * x[1] * g[1] + 0.5 * x[2] * g[2] - 0.25) < 1e-14);
}

TEST_CASE("nm02 closed forms at (1, 1, 0)") {
    const Nm02Data d = nm02_closed_forms(1.0, 1.0, 0.0);
    const auto f = oracle::cubic_by_deflation(0.0, -1.0, -1.0);
    const double f1 = f[0].real();
    CHECK(std::abs(d.f[0] - f1) < 1e-12);
    CHECK(std::abs(d.u[0] - (1.5 * f1 + 0.5 / f1)) < 1e-12);
    CHECK(std::abs(d.u[0] - 2.3645) < 1e-4);
    CHECK(std::abs(d.lame_sq[0] - f1 * f1 * f1 / (3 * f1 * f1 - 1)) < 1e-12);
    CHECK(std::abs(d.lame_sq[0] - 0.54512) < 1e-5);
    CHECK(std::abs(d.u[0] + d.u[1] + d.u[2] + 0.5) < 1e-12);
    for (Complex g : d.g)
        CHECK(std::abs(g * g * g - g - d.r) < 1e-12);
}

TEST_CASE("nm02 identities at random points") {
    for (const auto& x : random_points("nm02", 4, 9)) {
        const Nm02Data d = nm02_closed_forms(x[0], x[1], x[2]);
        Complex th{0.0};
        for (Complex h : d.lame_sq_tilde)
            th += h;
        CHECK(std::abs(th - 1.0) < 1e-10);
        for (const auto& r : nm02_omega_checks(x[0], x[1], x[2]))
            CHECK_MESSAGE(r.passed, r.check_name << " " << r.residual);
    }
    CHECK_THROWS_AS(nm02_closed_forms(0.0, 1.0, 0.0), DegenerateError);
}

TEST_CASE("pipeline reproduces the closed forms") {
    for (const auto& x : random_points("nm11", 3, 13)) {
        const ClosedFormFrame cf = nm11_point_forms(x);
        RotationOptions ro = contour_rotation();
        ro.reference_alphas = cf.alphas;
        const CanonicalFrame f = full_frame(Chart::nm11(), x, ro);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(f.u[i] - cf.u[i]) < 1e-8);
            CHECK(std::abs(f.lame_sq[i] - cf.lame_sq[i]) < 1e-8);
            CHECK(std::abs(f.omega[i] * f.omega[i] - cf.omega_sq[i]) < 1e-8);
        }
    }
}

TEST_CASE("random points are reproducible") {
    const auto a = random_points("nm11", 3, 42), b = random_points("nm11", 3, 42), c = random_points("nm11", 3, 43);
    CHECK(a == b);
    CHECK(a != c);
}
