#include <doctest.h>

#include "frobkit/errors.hpp"
#include "frobkit/models.hpp"
#include "frobkit/painleve.hpp"

using namespace frobkit;

TEST_CASE("Hitchin solutions by substitution") {
    const auto k3 = hitchin_solution(HitchinKind::K3X, 2.0);
    CHECK(std::abs(k3.y - 16.0 / 7.0) < 1e-14);
    CHECK(std::abs(k3.s - 32.0 / 5.0) < 1e-14);
    const auto k6 = hitchin_solution(HitchinKind::K6X, 2.0);
    CHECK(std::abs(k6.y - 14.0 / 5.0) < 1e-14);
    CHECK(std::abs(k6.s - 32.0 / 5.0) < 1e-14);
    const auto w = hitchin_solution(HitchinKind::K3Omega, -9.0);
    CHECK(std::abs(w.y - k3.y) < 1e-13);
    CHECK(std::abs(w.s - k3.s) < 1e-13);
    const auto w6 = hitchin_solution(HitchinKind::K6Omega, -9.0);
    CHECK(std::abs(w6.y - k6.y) < 1e-13);
    CHECK_THROWS_AS(hitchin_solution(HitchinKind::K3X, 0.0), DegenerateError);
    CHECK_THROWS_AS(hitchin_solution(HitchinKind::K3Omega, Complex(0.0, std::sqrt(3.0))), DegenerateError);
    CHECK_THROWS_AS(parse_hitchin_kind("k4"), std::invalid_argument);
}

TEST_CASE("PVI residuals") {
    for (auto kind : {HitchinKind::K3X, HitchinKind::K6X})
        CHECK(std::abs(pvi_residual(hitchin_sample(kind, 2.0))) < 1e-8);
    for (auto kind : {HitchinKind::K3Omega, HitchinKind::K6Omega})
        CHECK(std::abs(pvi_residual(hitchin_sample(kind, Complex(0.3, 0.8)))) < 1e-8);

    const PainleveSample control{3.0, 2.0, 0.0, 0.0, std::nullopt};
    CHECK(std::abs(pvi_residual(control) - 9.0 / 64.0) < 1e-12);

    const PainleveSample pole{3.0, 1.0005, 0.0, 0.0, std::nullopt};
    CHECK_THROWS_AS(pvi_residual(pole), DegenerateError);
}

TEST_CASE("omega squares from (y, v, s)") {
    PainleveSample p{Complex(0.4, 0.3), Complex(2.5, -0.5), 0.0, 0.0, std::nullopt};
    p.v = 1.0 / (2.0 * (p.y - 1.0));
    CHECK(std::abs(omega_sq_from_y(p)[1]) < 1e-15);

    std::vector<Complex> grid;
    for (int k = 0; k < 9; ++k)
        grid.push_back(Complex(0.0, 0.8 + 0.05 * k));
    const OmtoyCurve curve{[](Complex w) { return hitchin_solution(HitchinKind::K3Omega, w).y; },
                           [](Complex w) { return hitchin_solution(HitchinKind::K3Omega, w).s; },
                           [](Complex w) { return nm11_closed_forms(w).omega_sq; }};
    const auto reps = omtoy_check(curve, grid);
    REQUIRE(reps.size() == 2);
    CHECK(reps[0].passed);
    CHECK(reps[0].convention.has_value());
    CHECK(reps[1].passed);
}
