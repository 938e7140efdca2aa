#include "frobkit/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "frobkit/errors.hpp"

namespace frobkit {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    while (coeffs_.size() > 1 && coeffs_.back() == Complex{0.0})
        coeffs_.pop_back();
    if (coeffs_.empty())
        coeffs_.push_back(Complex{0.0});
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
    Polynomial p{Complex{1.0}};
    for (Complex r : roots)
        p = p * Polynomial{-r, Complex{1.0}};
    return p;
}

Complex Polynomial::operator()(Complex z) const {
    Complex acc{0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() == 1)
        return Polynomial{};
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (Complex c : coeffs_)
        m = std::max(m, std::abs(c));
    return m;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] = a[k] + b[k];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + Complex{-1.0} * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(Complex c, const Polynomial& p) {
    std::vector<Complex> out = p.coeffs_;
    for (Complex& x : out)
        x *= c;
    return Polynomial(std::move(out));
}

namespace {

// Newton step that is only kept when it lowers the residual.
Complex polish(const Polynomial& p, const Polynomial& dp, Complex r) {
    const Complex d = dp(r);
    if (std::abs(d) == 0.0)
        return r;
    const Complex next = r - p(r) / d;
    return std::abs(p(next)) <= std::abs(p(r)) ? next : r;
}

std::vector<Complex> quadratic_roots(Complex a, Complex b, Complex c) {
    const Complex disc = std::sqrt(b * b - 4.0 * a * c);
    const Complex s = std::abs(b + disc) >= std::abs(b - disc) ? disc : -disc;
    const Complex q = -0.5 * (b + s);
    if (std::abs(q) == 0.0)
        return {Complex{0.0}, Complex{0.0}};
    return {q / a, c / q};
}

std::vector<Complex> cardano_roots(const Polynomial& p) {
    const Complex lead = p.leading();
    const Complex b = p[2] / lead, c = p[1] / lead, d = p[0] / lead;
    const Complex pp = c - b * b / 3.0;
    const Complex qq = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const Complex sq = std::sqrt(qq * qq / 4.0 + pp * pp * pp / 27.0);
    Complex c3 = -qq / 2.0 + sq;
    if (std::abs(-qq / 2.0 - sq) > std::abs(c3))
        c3 = -qq / 2.0 - sq;
    const Complex shift = -b / 3.0;
    if (std::abs(c3) == 0.0)
        return {shift, shift, shift};
    const Complex cr = std::pow(c3, 1.0 / 3.0);
    const Complex unit = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    std::vector<Complex> roots;
    Complex w{1.0};
    for (int k = 0; k < 3; ++k) {
        const Complex ck = cr * w;
        roots.push_back(ck - pp / (3.0 * ck) + shift);
        w *= unit;
    }
    return roots;
}

std::vector<Complex> durand_kerner(const Polynomial& p, double tol, double& best_change) {
    const std::size_t n = p.degree();
    const Complex lead = p.leading();
    double radius = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        radius = std::max(radius, std::abs(p[k] / lead));
    radius += 1.0;

    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k)
        z[k] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4);

    constexpr int max_iterations = 2000;
    best_change = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iterations; ++it) {
        double change = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            Complex denom = lead;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k)
                    denom *= (z[k] - z[j]);
            if (std::abs(denom) == 0.0)
                denom = Complex{std::numeric_limits<double>::epsilon()};
            const Complex step = p(z[k]) / denom;
            z[k] -= step;
            change = std::max(change, std::abs(step));
        }
        best_change = std::min(best_change, change);
        double scale = 1.0;
        for (Complex r : z)
            scale = std::max(scale, std::abs(r));
        if (change <= 1e-3 * tol * scale)
            break;
    }
    return z;
}

} // namespace

std::vector<Complex> roots_all(const Polynomial& p, double tol) {
    if (p.degree() == 0)
        throw UnsupportedError("roots_all: polynomial of degree 0 has no roots to find");
    if (!(tol > 0.0))
        throw UnsupportedError("roots_all: tolerance must be positive");

    const Polynomial dp = p.derivative();
    std::vector<Complex> roots;
    double best_change = 0.0;
    switch (p.degree()) {
    case 1:
        roots = {-p[0] / p[1]};
        break;
    case 2:
        roots = quadratic_roots(p[2], p[1], p[0]);
        break;
    case 3:
        roots = cardano_roots(p);
        break;
    default:
        roots = durand_kerner(p, tol, best_change);
        break;
    }
    for (Complex& r : roots)
        r = polish(p, dp, r);

    const double bound = tol * (1.0 + p.max_abs_coeff());
    double worst = 0.0;
    for (Complex r : roots)
        worst = std::max(worst, std::abs(p(r)));
    if (worst > bound)
        throw ConvergenceError("roots_all: residual bound not met", worst);

    order_roots(roots);
    return roots;
}

void order_roots(std::vector<Complex>& roots) {
    double scale = 1.0;
    for (Complex r : roots)
        scale = std::max(scale, std::abs(r));
    const double tie = 1e-9 * scale;

    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) { return a.real() > b.real(); });
    std::size_t start = 0;
    while (start < roots.size()) {
        std::size_t end = start + 1;
        while (end < roots.size() && roots[start].real() - roots[end].real() <= tie)
            ++end;
        std::sort(roots.begin() + static_cast<std::ptrdiff_t>(start), roots.begin() + static_cast<std::ptrdiff_t>(end),
                  [](Complex a, Complex b) { return a.imag() < b.imag(); });
        start = end;
    }
}

Complex residue_at_simple_zero(Complex numerator_value, Complex second_derivative_value, double tol) {
    if (std::abs(second_derivative_value) <= tol)
        throw DegenerateError("coalescing-critical-points", "W'' vanishes at a critical point");
    return numerator_value / second_derivative_value;
}

double relative_separation(std::span<const Complex> values) {
    double scale = 1.0;
    for (Complex v : values)
        scale = std::max(scale, std::abs(v));
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            sep = std::min(sep, std::abs(values[i] - values[j]));
    return sep / scale;
}

void require_separated(std::span<const Complex> values, double rel_tol, const char* kind) {
    if (relative_separation(values) < rel_tol)
        throw DegenerateError(kind, "values closer than " + std::to_string(rel_tol) + " relative");
}

std::vector<std::size_t> alignment(std::span<const Complex> values, std::span<const Complex> reference) {
    const std::size_t n = reference.size();
    struct Pair {
        double distance;
        std::size_t ref, val;
    };
    std::vector<Pair> pairs;
    pairs.reserve(n * values.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < values.size(); ++j)
            pairs.push_back({std::abs(reference[i] - values[j]), i, j});
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.distance < b.distance; });

    std::vector<std::size_t> map(n, values.size());
    std::vector<bool> used(values.size(), false);
    for (const Pair& pr : pairs) {
        if (map[pr.ref] != values.size() || used[pr.val])
            continue;
        map[pr.ref] = pr.val;
        used[pr.val] = true;
    }
    return map;
}

std::vector<Complex> align_to_reference(std::span<const Complex> values, std::span<const Complex> reference) {
    const auto map = alignment(values, reference);
    std::vector<Complex> out(reference.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = values[map[i]];
    return out;
}

Complex sqrt_near(Complex z, Complex reference) {
    const Complex r = std::sqrt(z);
    return std::abs(r - reference) <= std::abs(r + reference) ? r : -r;
}

Complex central_difference(const ScalarFunction& f, Complex t, double h) {
    // Use the representable step so the spacing itself carries no rounding error.
    const Complex tp = t + h, tm = t - h;
    return (f(tp) - f(tm)) / (tp - tm);
}

std::vector<Complex> contour_derivative(const std::function<std::vector<Complex>(Complex)>& f, Complex t,
                                        int order, double radius, int points) {
    std::vector<Complex> acc;
    for (int j = 0; j < points; ++j) {
        const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * j / points);
        const std::vector<Complex> fj = f(t + radius * w);
        if (acc.empty())
            acc.assign(fj.size(), Complex{0.0});
        const Complex weight = std::pow(w, -order);
        for (std::size_t k = 0; k < fj.size(); ++k)
            acc[k] += fj[k] * weight;
    }
    double factorial = 1.0;
    for (int k = 2; k <= order; ++k)
        factorial *= k;
    const double scale = factorial / (points * std::pow(radius, order));
    for (Complex& a : acc)
        a *= scale;
    return acc;
}

Complex contour_derivative(const ScalarFunction& f, Complex t, int order, double radius, int points) {
    return contour_derivative([&](Complex z) { return std::vector<Complex>{f(z)}; }, t, order, radius, points)[0];
}

const std::array<std::array<int, 3>, 6>& permutations3() {
    static const std::array<std::array<int, 3>, 6> perms{{
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
    }};
    return perms;
}

int permutation_sign(const std::array<int, 3>& perm) {
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (perm[i] > perm[j])
                ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

} // namespace frobkit
