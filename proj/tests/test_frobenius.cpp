#include <doctest.h>

#include "frobkit/errors.hpp"
#include "frobkit/frobenius.hpp"
#include "frobkit/models.hpp"
#include "oracles.hpp"

using namespace frobkit;

namespace {

double metric_defect(const ComplexMatrix& eta, const oracle::Metric& m) {
    double d = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            d = std::max(d, std::abs(eta(a, b) - m[a][b]));
    return d;
}

} // namespace

TEST_CASE("model potentials from flat coordinates") {
    const std::vector<Complex> x11{0.0, 2.0, 1.0};
    const auto W = Chart::nm11().potential(x11);
    for (Complex z : {Complex(3.0), Complex(0.5, 2.0)})
        CHECK(std::abs(W.value(z) - (0.5 * z * z + 2.0 / (z - 1.0))) < 1e-13);

    const std::vector<Complex> x02{1.0, 1.0, 0.0};
    const auto V = Chart::nm02().potential(x02);
    for (Complex z : {Complex(2.0), Complex(-0.3, 1.1)})
        CHECK(std::abs(V.value(z) - (z + 1.0 / z + 1.0 / (2.0 * z * z))) < 1e-13);

    const std::vector<Complex> xs{2.0, 1.0, 5.0};
    const auto U = Chart::standard(1, 1).potential(xs);
    REQUIRE(U.a.size() == 1);
    CHECK(std::abs(U.a[0] + 5.0) < 1e-14);
}

TEST_CASE("flat metric by residues") {
    for (const auto& x : random_points("nm11", 5, 7))
        CHECK(metric_defect(flat_metric(Chart::nm11(), x), oracle::nm11_metric) < 1e-9);
    for (const auto& x : random_points("nm02", 5, 7))
        CHECK(metric_defect(flat_metric(Chart::nm02(), x), oracle::nm02_metric) < 1e-9);
}

TEST_CASE("pole-sector metric is antidiagonal for m = 3") {
    const Chart chart = Chart::standard(0, 3);
    for (const auto& x : random_points("custom:0,3", 3, 5)) {
        const ComplexMatrix eta = flat_metric(chart, x);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                CHECK(std::abs(eta(a, b) - (a + b == 3 ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("structure constants against hand-differentiated prepotentials") {
    for (const auto& x : random_points("nm11", 4, 11)) {
        const Tensor3 c = structure_constants(Chart::nm11(), x);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int g = 0; g < 3; ++g)
                    CHECK(std::abs(c(a, b, g) - oracle::nm11_d3(a, b, g, x[0], x[1], x[2])) < 1e-9);
    }
    for (const auto& x : random_points("nm02", 4, 11)) {
        const Tensor3 c = structure_constants(Chart::nm02(), x);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int g = 0; g < 3; ++g)
                    CHECK(std::abs(c(a, b, g) - oracle::nm02_d3(a, b, g, x[0], x[1], x[2])) < 1e-9);
    }
}

TEST_CASE("c with one unit index is the metric") {
    const std::vector<Complex> x{0.0, 2.0, 1.0};
    const Tensor3 c = structure_constants(Chart::nm11(), x);
    CHECK(std::abs(c(1, 1, 1) - 0.5) < 1e-12);
    CHECK(std::abs(c(0, 1, 2) - 1.0) < 1e-12);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(std::abs(c(a, b, 0) - oracle::nm11_metric[a][b]) < 1e-9);
}

TEST_CASE("WDVV for residue and analytic tensors") {
    auto analytic = [](auto d3, const std::vector<Complex>& x) {
        Tensor3 t(3);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int g = 0; g < 3; ++g)
                    t(a, b, g) = d3(a, b, g, x[0], x[1], x[2]);
        return t;
    };
    auto inverse = [](const oracle::Metric& m) {
        ComplexMatrix e(3, 3);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                e(a, b) = m[a][b];
        return ComplexMatrix(e.inverse());
    };
    const std::vector<Complex> p11{0.0, 2.0, 1.0}, p02{1.0, 1.0, 2.0};
    CHECK(wdvv_residual(analytic(oracle::nm11_d3, p11), inverse(oracle::nm11_metric)) < 1e-9);
    CHECK(wdvv_residual(analytic(oracle::nm02_d3, p02), inverse(oracle::nm02_metric)) < 1e-9);
    CHECK(wdvv_residual(structure_constants(Chart::nm11(), p11), inverse(oracle::nm11_metric)) < 1e-8);

    Tensor3 one(1);
    one(0, 0, 0) = 1.0;
    ComplexMatrix eta1(1, 1);
    eta1(0, 0) = 1.0;
    CHECK(wdvv_residual(one, eta1) == 0.0);
    CHECK(symmetry_defect(structure_constants(Chart::nm02(), p02)) < 1e-12);
}

TEST_CASE("prepotential finite differences and quasi-homogeneity") {
    for (const char* id : {"nm11", "nm02"})
        for (const auto& x : random_points(id, 3, 2))
            for (const auto& r : prepotential_checks(id, x))
                CHECK_MESSAGE(r.passed, r.check_name << " " << r.residual);

    const std::vector<Complex> x{0.0, 2.0, 1.0};
    const auto F = Prepotential::for_model("nm11");
    auto f = [&](std::span<const Complex> y) { return F.value(y); };
    CHECK(std::abs(third_derivative_contour(f, x, 1, 1, 1, 0.2) - 0.5) < 1e-9);
    const auto G = Prepotential::for_model("nm02");
    auto g = [&](std::span<const Complex> y) { return G.value(y); };
    const std::vector<Complex> y{1.0, 1.0, 2.0};
    CHECK(std::abs(third_derivative_contour(g, y, 0, 0, 1, 0.2) - 1.0) < 1e-9);
    CHECK_THROWS_AS(prepotential_checks("nm11", std::vector<Complex>{0.0, -2.0, 1.0}), DegenerateError);
}

TEST_CASE("unsupported and degenerate potentials") {
    CHECK_THROWS_AS(Chart::from_model_id("custom:3,1").potential(std::vector<Complex>{1.0, 1.0, 0.1, 0.2, 0.3}),
                    UnsupportedError);
    CHECK_THROWS_AS(Chart::nm11().potential(std::vector<Complex>{0.0, 0.0, 1.0}), DegenerateError);
    CHECK_THROWS_AS(Chart::from_model_id("nm13"), std::invalid_argument);
    CHECK(Chart::from_model_id("custom:1,2").dimension() == 4);
}
