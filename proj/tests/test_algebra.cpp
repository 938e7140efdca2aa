#include <doctest.h>

#include <cmath>

#include "frobkit/algebra.hpp"
#include "frobkit/errors.hpp"
#include "oracles.hpp"

using namespace frobkit;

TEST_CASE("cubic roots match independent root finders") {
    SUBCASE("roots of unity") {
        const auto r = roots_all(Polynomial{-1.0, 0.0, 0.0, 1.0});
        const std::vector<Complex> expected{1.0, {-0.5, std::sqrt(3.0) / 2}, {-0.5, -std::sqrt(3.0) / 2}};
        CHECK(oracle::set_distance(r, expected) < 1e-13);
    }
    SUBCASE("factored cubic") {
        const auto r = roots_all(Polynomial{-2.0, 1.0, -2.0, 1.0});
        CHECK(oracle::set_distance(r, {2.0, Complex(0, 1), Complex(0, -1)}) < 1e-13);
    }
    SUBCASE("z^3 - z - 1") {
        const auto r = roots_all(Polynomial{-1.0, -1.0, 0.0, 1.0});
        const auto o = oracle::cubic_by_deflation(0.0, -1.0, -1.0);
        CHECK(oracle::set_distance(r, {o[0], o[1], o[2]}) < 1e-12);
        CHECK(std::abs(o[0] - 1.3247180) < 1e-7);
    }
}

TEST_CASE("higher degree roots agree with the companion matrix") {
    const std::vector<Complex> lower{{0.3, -1.0}, 2.0, {0.0, 1.5}, -0.7, {1.0, 1.0}};
    std::vector<Complex> coeffs = lower;
    coeffs.emplace_back(1.0);
    const auto r = roots_all(Polynomial(coeffs));
    REQUIRE(r.size() == 5);
    CHECK(oracle::set_distance(r, oracle::companion_roots(lower)) < 1e-10);
}

TEST_CASE("root order is deterministic") {
    const auto a = roots_all(Polynomial{-2.0, 1.0, -2.0, 1.0});
    CHECK(std::abs(a[0] - 2.0) < 1e-12);
    CHECK(a[1].imag() < a[2].imag());
}

TEST_CASE("residues at simple zeros") {
    CHECK(residue_at_simple_zero(1.0, 2.0) == Complex(0.5));
    CHECK(residue_at_simple_zero(2.0, 4.0) == Complex(0.5));
    CHECK(std::abs(residue_at_simple_zero(0.2, 1.0) - 0.2) < 1e-15);
    CHECK_THROWS_AS(residue_at_simple_zero(1.0, 0.0), DegenerateError);
}

TEST_CASE("separation and alignment") {
    const std::vector<Complex> v{1.0, 1.0 + 1e-12, 3.0};
    CHECK_THROWS_AS(require_separated(v, 1e-8, "coalescing-critical-points"), DegenerateError);
    const std::vector<Complex> ref{3.0, 1.0, 2.0};
    const auto aligned = align_to_reference(std::vector<Complex>{1.1, 2.1, 2.9}, ref);
    CHECK(std::abs(aligned[0] - 2.9) < 1e-15);
    CHECK(std::abs(aligned[1] - 1.1) < 1e-15);
    CHECK(std::abs(aligned[2] - 2.1) < 1e-15);
}

TEST_CASE("contour derivatives of exp") {
    auto f = [](Complex z) { return std::exp(z); };
    const Complex t{0.3, 0.1};
    CHECK(std::abs(contour_derivative(f, t, 1, 0.1) - std::exp(t)) < 1e-13);
    CHECK(std::abs(contour_derivative(f, t, 2, 0.1) - std::exp(t)) < 1e-11);
}

TEST_CASE("square root continuation and permutations") {
    CHECK(std::abs(sqrt_near(4.0, -1.9) + 2.0) < 1e-15);
    CHECK(permutation_sign({0, 1, 2}) == 1);
    CHECK(permutation_sign({1, 0, 2}) == -1);
    CHECK(permutation_sign({1, 2, 0}) == 1);
    CHECK(permutations3().size() == 6);
}
