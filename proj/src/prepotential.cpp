#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frobkit/errors.hpp"
#include "frobkit/frobenius.hpp"

namespace frobkit {

Prepotential Prepotential::for_model(const std::string& model_id) {
    if (model_id != "nm11" && model_id != "nm02")
        throw std::invalid_argument("no closed-form prepotential for model '" + model_id + "'");
    return Prepotential(model_id);
}

Complex Prepotential::value(std::span<const Complex> x) const {
    if (x.size() != 3)
        throw std::invalid_argument("prepotential: expected 3 coordinates");
    const Complex x1 = x[0], x2 = x[1], x3 = x[2];
    if (model_ == "nm11")
        return x2 * x3 * x3 * x3 / 6.0 + x1 * x1 * x1 / 6.0 + x1 * x2 * x3 + 0.5 * x2 * x2 * (std::log(x2) - 1.5);
    return 0.5 * x3 * x3 * x1 + 0.5 * x2 * x2 * x3 + 0.5 * x1 * x1 * std::log(x2);
}

std::vector<Complex> Prepotential::gradient(std::span<const Complex> x) const {
    if (x.size() != 3)
        throw std::invalid_argument("prepotential: expected 3 coordinates");
    const Complex x1 = x[0], x2 = x[1], x3 = x[2];
    if (model_ == "nm11")
        return {0.5 * x1 * x1 + x2 * x3, x3 * x3 * x3 / 6.0 + x1 * x3 + x2 * std::log(x2) - x2,
                0.5 * x2 * x3 * x3 + x1 * x2};
    return {0.5 * x3 * x3 + x1 * std::log(x2), x2 * x3 + x1 * x1 / (2.0 * x2), x3 * x1 + 0.5 * x2 * x2};
}

Complex third_derivative_fd(const std::function<Complex(std::span<const Complex>)>& f, std::span<const Complex> x,
                            std::size_t a, std::size_t b, std::size_t c, double h) {
    std::vector<Complex> y(x.begin(), x.end());
    Complex acc{0.0};
    for (int sa : {1, -1})
        for (int sb : {1, -1})
            for (int sc : {1, -1}) {
                std::copy(x.begin(), x.end(), y.begin());
                y[a] += sa * h;
                y[b] += sb * h;
                y[c] += sc * h;
                acc += static_cast<double>(sa * sb * sc) * f(y);
            }
    return acc / (8.0 * h * h * h);
}

Complex third_derivative_contour(const std::function<Complex(std::span<const Complex>)>& f, std::span<const Complex> x,
                                 std::size_t a, std::size_t b, std::size_t c, double radius, int points) {
    if (points < 4)
        throw std::invalid_argument("third_derivative_contour: need at least 4 points");
    std::vector<std::size_t> dirs;
    std::vector<int> order;
    for (std::size_t d : {a, b, c}) {
        const auto it = std::find(dirs.begin(), dirs.end(), d);
        if (it == dirs.end()) {
            dirs.push_back(d);
            order.push_back(1);
        } else {
            ++order[static_cast<std::size_t>(it - dirs.begin())];
        }
    }
    const std::size_t k = dirs.size();
    const double two_pi = 2.0 * std::acos(-1.0);
    std::vector<Complex> y(x.begin(), x.end());
    std::vector<int> idx(k, 0);
    Complex acc{0.0};
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i)
        total *= static_cast<std::size_t>(points);
    for (std::size_t n = 0; n < total; ++n) {
        std::size_t rem = n;
        Complex weight{1.0};
        for (std::size_t i = 0; i < k; ++i) {
            const int j = static_cast<int>(rem % static_cast<std::size_t>(points));
            rem /= static_cast<std::size_t>(points);
            const double theta = two_pi * j / points;
            y[dirs[i]] = x[dirs[i]] + radius * std::polar(1.0, theta);
            weight *= std::polar(1.0, -order[i] * theta);
        }
        acc += weight * f(y);
    }
    double scale = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        scale /= points;
        for (int m = 2; m <= order[i]; ++m)
            scale *= m;
    }
    return acc * scale / (radius * radius * radius);
}

ReportList prepotential_checks(const std::string& model_id, std::span<const Complex> coords, double fd_tolerance,
                               double quasi_tolerance) {
    const Prepotential F = Prepotential::for_model(model_id);
    const Chart chart = Chart::from_model_id(model_id);
    if (coords.size() != 3)
        throw std::invalid_argument("prepotential_checks: expected 3 coordinates");
    if (coords[1].imag() != 0.0 || !(coords[1].real() > 0.0))
        throw DegenerateError("log-branch", "x2 must be real and positive for the principal logarithm");

    const double radius = 0.2 * std::min(1.0, coords[1].real());
    const Tensor3 c = structure_constants(chart, coords);
    const auto& deg = chart.degrees();
    const double dF = chart.prepotential_degree();

    auto fval = [&](std::span<const Complex> y) { return F.value(y); };
    auto gval = [&](std::span<const Complex> y) {
        const auto grad = F.gradient(y);
        Complex g = -dF * F.value(y);
        for (std::size_t i = 0; i < 3; ++i)
            g += deg[i] * y[i] * grad[i];
        return g;
    };

    double fd_worst = 0.0, quasi_worst = 0.0;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a; b < 3; ++b)
            for (std::size_t g = b; g < 3; ++g) {
                fd_worst = std::max(fd_worst, std::abs(third_derivative_contour(fval, coords, a, b, g, radius) - c(a, b, g)));
                quasi_worst = std::max(quasi_worst, std::abs(third_derivative_contour(gval, coords, a, b, g, radius)));
            }

    const auto point = label_point(coords);
    ReportList out;
    auto r1 = VerificationReport::make("prepotential_third_derivatives", model_id, point, fd_worst, fd_tolerance);
    r1.metadata["contour_radius"] = format_number(radius);
    out.push_back(std::move(r1));
    auto r2 = VerificationReport::make("quasi_homogeneity", model_id, point, quasi_worst, quasi_tolerance);
    r2.metadata["d_F"] = format_number(dF);
    out.push_back(std::move(r2));
    return out;
}

} // namespace frobkit
