#pragma once

// Reference values computed without the library: bisection, companion matrices,
// hand-differentiated prepotentials and direct substitution into closed forms.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

using Complex = std::complex<double>;

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Real cubic z³ + b z² + c z + d: one real root by bisection, the other two from the
// deflated quadratic.
inline std::array<Complex, 3> cubic_by_deflation(double b, double c, double d) {
    auto f = [&](double z) { return ((z + b) * z + c) * z + d; };
    double lo = -1.0, hi = 1.0;
    while (f(lo) > 0)
        lo *= 2;
    while (f(hi) < 0)
        hi *= 2;
    const double r = bisect(f, lo, hi);
    const double p = b + r, q = c + p * r; // z² + p z + q
    const Complex disc = std::sqrt(Complex(p * p - 4 * q));
    return {Complex(r), (-p + disc) / 2.0, (-p - disc) / 2.0};
}

// Roots of a monic polynomial (coefficients lowest first, leading 1 omitted) from the
// eigenvalues of its companion matrix.
inline std::vector<Complex> companion_roots(const std::vector<Complex>& lower) {
    const int n = static_cast<int>(lower.size());
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i)
        C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i)
        C(i, n - 1) = -lower[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C);
    std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
    return out;
}

inline double nearest(const std::vector<Complex>& set, Complex z) {
    double d = INFINITY;
    for (Complex w : set)
        d = std::min(d, std::abs(w - z));
    return d;
}

// Multiset distance: each entry of a to its nearest entry of b and back.
inline double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double d = 0.0;
    for (Complex z : a)
        d = std::max(d, nearest(b, z));
    for (Complex z : b)
        d = std::max(d, nearest(a, z));
    return d;
}

using Metric = std::array<std::array<double, 3>, 3>;
inline constexpr Metric nm11_metric{{{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}};
inline constexpr Metric nm02_metric{{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}};

// Third derivatives of F = x2 x3³/6 + x1³/6 + x1 x2 x3 + x2²(log x2 - 3/2)/2.
inline Complex nm11_d3(int a, int b, int c, Complex x1, Complex x2, Complex x3) {
    (void)x1;
    std::array<int, 3> k{a, b, c};
    std::sort(k.begin(), k.end());
    if (k == std::array<int, 3>{0, 0, 0})
        return 1.0;
    if (k == std::array<int, 3>{0, 1, 2})
        return 1.0;
    if (k == std::array<int, 3>{1, 1, 1})
        return 1.0 / x2;
    if (k == std::array<int, 3>{1, 2, 2})
        return x3;
    if (k == std::array<int, 3>{2, 2, 2})
        return x2;
    return 0.0;
}

// Third derivatives of F = x3² x1/2 + x2² x3/2 + x1² log(x2)/2.
inline Complex nm02_d3(int a, int b, int c, Complex x1, Complex x2, Complex x3) {
    (void)x3;
    std::array<int, 3> k{a, b, c};
    std::sort(k.begin(), k.end());
    if (k == std::array<int, 3>{0, 2, 2})
        return 1.0;
    if (k == std::array<int, 3>{1, 1, 2})
        return 1.0;
    if (k == std::array<int, 3>{0, 0, 1})
        return 1.0 / x2;
    if (k == std::array<int, 3>{0, 1, 1})
        return -x1 / (x2 * x2);
    if (k == std::array<int, 3>{1, 1, 1})
        return x1 * x1 / (x2 * x2 * x2);
    return 0.0;
}

// nm11 by substitution: alpha(alpha - x3)² = x2 for the roots, then
// u = W(alpha) and h² = (alpha - x3)² / prod(alpha_i - alpha_j).
struct Nm11Point {
    std::vector<Complex> alpha, u, lame_sq;
};

inline Nm11Point nm11_point(Complex x1, Complex x2, Complex x3) {
    // z³ - 2 x3 z² + x3² z - x2 = 0
    Nm11Point p;
    p.alpha = companion_roots({-x2, x3 * x3, -2.0 * x3});
    for (std::size_t i = 0; i < 3; ++i) {
        const Complex a = p.alpha[i];
        p.u.push_back(0.5 * a * a + x1 + x2 / (a - x3));
        Complex prod{1.0};
        for (std::size_t j = 0; j < 3; ++j)
            if (j != i)
                prod *= a - p.alpha[j];
        p.lame_sq.push_back((a - x3) * (a - x3) / prod);
    }
    return p;
}

// The printed omega-parametrisation of the nm11 family.
inline std::array<Complex, 3> nm11_omega_sq(Complex w) {
    return {-0.25 * (w * w - 1.0) / (w * w - 9.0), 0.25 * (w + 1.0) / (w * (w - 3.0)),
            -0.25 * (w - 1.0) / (w * (w + 3.0))};
}

inline Complex nm11_s(Complex w) {
    return std::pow(w - 3.0, 3) * (w + 1.0) / (std::pow(w + 3.0, 3) * (w - 1.0));
}

// Euler top right-hand side written out directly.
inline std::array<Complex, 3> top(Complex s, const std::array<Complex, 3>& w) {
    return {w[1] * w[2] / s, w[0] * w[2] / (s * (s - 1.0)), w[0] * w[1] / (1.0 - s)};
}

} // namespace oracle
