#include <doctest.h>

#include <cmath>
#include <random>

#include "frobkit/errors.hpp"
#include "frobkit/eulertop.hpp"
#include "frobkit/models.hpp"
#include "oracles.hpp"

using namespace frobkit;

TEST_CASE("top right-hand side") {
    const auto fixed = top_rhs({Complex(0.3, 0.2), {0.0, 0.0, 1.7}});
    for (Complex z : fixed)
        CHECK(z == Complex(0.0));
    const auto r = top_rhs({2.0, {1.0, 1.0, 1.0}});
    CHECK(std::abs(r[0] - 0.5) < 1e-15);
    CHECK(std::abs(r[1] - 0.5) < 1e-15);
    CHECK(std::abs(r[2] + 1.0) < 1e-15);
    CHECK_THROWS_AS(top_rhs({1.0, {1.0, 1.0, 1.0}}), DegenerateError);
}

TEST_CASE("Casimir is a first integral of the vector field") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        const EulerTopState st{Complex(U(rng), U(rng)), {Complex(U(rng), U(rng)), Complex(U(rng), U(rng)),
                                                         Complex(U(rng), U(rng))}};
        const auto r = top_rhs(st);
        const Complex dc = st.omega[0] * r[0] + st.omega[1] * r[1] + st.omega[2] * r[2];
        CHECK(std::abs(dc) < 1e-12 * (1.0 + std::abs(st.omega[0] * st.omega[1] * st.omega[2] / st.s)));
    }
}

TEST_CASE("RK4 integration") {
    const EulerTopState fixed{Complex(0.3, 0.4), {0.0, 0.0, 0.9}};
    const auto r = integrate_rk4(fixed, Complex(0.5, 1.2), 100);
    CHECK(r.state.omega[0] == Complex(0.0));
    CHECK(r.state.omega[1] == Complex(0.0));
    CHECK(r.state.omega[2] == Complex(0.9));

    const EulerTopState st{Complex(0.5, 0.5), {0.4, Complex(0.2, 0.1), 0.3}};
    const double d1 = integrate_rk4(st, Complex(0.5, 1.5), 10).casimir_drift;
    const double d2 = integrate_rk4(st, Complex(0.5, 1.5), 20).casimir_drift;
    CHECK(d1 / d2 > 8.0);
    CHECK(d1 / d2 < 40.0);

    CHECK_THROWS_AS(integrate_rk4(st, Complex(1.0, 0.0), 10), DegenerateError);
}

TEST_CASE("RK4 follows the closed-form nm11 curve") {
    const Complex w0{0.0, 0.9}, w1{0.0, 1.1};
    std::array<Complex, 3> w;
    auto sq = oracle::nm11_omega_sq(w0);
    for (int k = 0; k < 3; ++k)
        w[k] = std::sqrt(sq[k]);
    const std::array<Complex, 3> w_start = w;
    for (int n = 1; n <= 400; ++n) {
        sq = oracle::nm11_omega_sq(w0 + (w1 - w0) * (n / 400.0));
        for (int k = 0; k < 3; ++k)
            w[k] = sqrt_near(sq[k], w[k]);
    }
    // Either class of the product sign w1 w2 w3; flipping w1 switches it.
    double best = INFINITY, drift = INFINITY;
    for (double sign : {1.0, -1.0}) {
        const EulerTopState start{oracle::nm11_s(w0), {sign * w_start[0], w_start[1], w_start[2]}};
        const auto r = integrate_rk4(start, oracle::nm11_s(w1), 1000);
        double err = std::abs(r.state.omega[0] - sign * w[0]);
        for (int k = 1; k < 3; ++k)
            err = std::max(err, std::abs(r.state.omega[k] - w[k]));
        if (err < best) {
            best = err;
            drift = r.casimir_drift;
        }
    }
    CHECK(best < 1e-6);
    CHECK(drift < 1e-10);
}

TEST_CASE("parametric residual of curves") {
    std::vector<Complex> grid;
    for (int k = 0; k < 9; ++k)
        grid.push_back(Complex(0.0, 0.8 + 0.05 * k));
    const auto rep = parametric_residual(nm11_top_curve(), grid, 1e-6);
    CHECK(rep.passed);
    REQUIRE(rep.convention);
    CHECK(rep.metadata.at("conventions_searched") == "12");

    TopCurve still{[](Complex t) { return t; }, [](Complex) { return std::array<Complex, 3>{0.0, 0.0, 0.5}; }, false};
    std::vector<Complex> sgrid{Complex(0.3, 0.5), Complex(0.4, 0.5), Complex(0.5, 0.5), Complex(0.6, 0.5),
                               Complex(0.7, 0.5)};
    const auto s = parametric_residual(still, sgrid, 1e-6);
    CHECK(s.residual == 0.0);
    CHECK(s.metadata.at("best_residual") == "0");

    TopCurve stuck{[](Complex) { return Complex(0.5, 0.5); }, [](Complex) { return std::array<Complex, 3>{}; }, false};
    CHECK_THROWS_AS(parametric_residual(stuck, sgrid, 1e-6), DegenerateError);
}
