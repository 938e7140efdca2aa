#include "frobkit/frobenius.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frobkit/errors.hpp"

namespace frobkit {

// ---- RationalPotential ------------------------------------------------------

Complex RationalPotential::value(Complex z) const {
    Complex w = std::pow(z, n + 1) / static_cast<double>(n + 1);
    for (int k = n - 1; k >= 0; --k)
        w += a[k] * std::pow(z, k);
    const Complex inv = 1.0 / (z - pole);
    Complex p = inv;
    for (int j = 1; j <= m; ++j) {
        w += v[j - 1] * p / static_cast<double>(j);
        p *= inv;
    }
    return w;
}

Complex RationalPotential::derivative(Complex z) const {
    Complex w = std::pow(z, n);
    for (int k = 1; k < n; ++k)
        w += static_cast<double>(k) * a[k] * std::pow(z, k - 1);
    const Complex inv = 1.0 / (z - pole);
    Complex p = inv * inv;
    for (int j = 1; j <= m; ++j) {
        w -= v[j - 1] * p;
        p *= inv;
    }
    return w;
}

Complex RationalPotential::second_derivative(Complex z) const {
    Complex w = n >= 1 ? static_cast<double>(n) * std::pow(z, n - 1) : Complex{0.0};
    for (int k = 2; k < n; ++k)
        w += static_cast<double>(k * (k - 1)) * a[k] * std::pow(z, k - 2);
    const Complex inv = 1.0 / (z - pole);
    Complex p = inv * inv * inv;
    for (int j = 1; j <= m; ++j) {
        w += static_cast<double>(j + 1) * v[j - 1] * p;
        p *= inv;
    }
    return w;
}

Polynomial RationalPotential::critical_numerator() const {
    // P'(z) with P the polynomial part.
    std::vector<Complex> dp(static_cast<std::size_t>(n) + 1);
    dp[n] = 1.0;
    for (int k = 1; k < n; ++k)
        dp[k - 1] = static_cast<double>(k) * a[k];
    const Polynomial shift{-pole, Complex{1.0}};

    std::vector<Polynomial> shift_pow{Polynomial{Complex{1.0}}};
    for (int k = 1; k <= m + 1; ++k)
        shift_pow.push_back(shift_pow.back() * shift);

    Polynomial num = Polynomial(dp) * shift_pow[m + 1];
    for (int j = 1; j <= m; ++j)
        num = num - v[j - 1] * shift_pow[m - j];
    return num;
}

std::vector<Complex> RationalPotential::critical_points() const {
    auto roots = roots_all(critical_numerator());
    require_separated(roots, 1e-8, "coalescing-critical-points");
    return roots;
}

// ---- build_potential ----------------------------------------------------------

namespace {

using Series = std::vector<Complex>; // truncated power series, fixed length

Series series_mul(const Series& a, const Series& b) {
    Series c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j)
            c[i + j] += a[i] * b[j];
    return c;
}

Series series_inverse(const Series& a) {
    Series inv(a.size());
    inv[0] = 1.0 / a[0];
    for (std::size_t k = 1; k < a.size(); ++k) {
        Complex acc{0.0};
        for (std::size_t j = 1; j <= k; ++j)
            acc += a[j] * inv[k - j];
        inv[k] = -acc / a[0];
    }
    return inv;
}

Series series_pow(const Series& a, int e) {
    Series r(a.size());
    r[0] = 1.0;
    for (int i = 0; i < e; ++i)
        r = series_mul(r, a);
    return r;
}

// Polynomial-part coefficients of w^{n+1}/(n+1) where z = w + sum_g xt_g w^{-g}.
// Works with phi = w / z as a series in 1/z.
std::vector<Complex> reverse_polynomial_sector(int n, std::span<const Complex> xt) {
    const std::size_t order = static_cast<std::size_t>(n) + 2;
    Series phi(order);
    phi[0] = 1.0;
    for (int iter = 0; iter < n + 2; ++iter) {
        const Series inv = series_inverse(phi);
        Series next(order);
        next[0] = 1.0;
        Series inv_pow = inv;
        for (int g = 1; g <= n; ++g) {
            for (std::size_t k = 0; k + g + 1 < order; ++k)
                next[k + g + 1] -= xt[g - 1] * inv_pow[k];
            inv_pow = series_mul(inv_pow, inv);
        }
        phi = next;
    }
    const Series w_pow = series_pow(phi, n + 1);
    std::vector<Complex> a(n);
    for (int k = 0; k < n; ++k)
        a[k] = w_pow[n + 1 - k] / static_cast<double>(n + 1);
    return a;
}

} // namespace

namespace {

RationalPotential assemble_potential(int n, int m, const FlatPoint& p) {
    RationalPotential W;
    W.n = n;
    W.m = m;
    W.pole = p.x[m];

    // v_j = [w^m] (sum_{alpha=1}^m x_alpha w^{m+1-alpha})^j, i.e. the sum over
    // alpha_1 + ... + alpha_j = (j-1) m + j of x_{alpha_1} ... x_{alpha_j}.
    std::vector<Complex> base(static_cast<std::size_t>(m) + 1);
    for (int alpha = 1; alpha <= m; ++alpha)
        base[m + 1 - alpha] = p.x[alpha - 1];
    std::vector<Complex> power(static_cast<std::size_t>(m) + 1);
    power[0] = 1.0;
    W.v.resize(m);
    for (int j = 1; j <= m; ++j) {
        power = series_mul(power, base);
        W.v[j - 1] = power[m];
    }

    W.a = reverse_polynomial_sector(n, p.xt);
    return W;
}

void validate_shape(int n, int m, const FlatPoint& p) {
    if (n < 0 || m < 1)
        throw std::invalid_argument("build_potential: need n >= 0 and m >= 1");
    if (n > kMaxPolynomialOrder)
        throw UnsupportedError("build_potential: series reversion implemented for n <= " +
                               std::to_string(kMaxPolynomialOrder));
    if (p.x.size() != static_cast<std::size_t>(m + 1) || p.xt.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("build_potential: flat point has wrong number of coordinates");
}

} // namespace

RationalPotential build_potential(int n, int m, const FlatPoint& p) {
    validate_shape(n, m, p);
    if (p.x[m - 1] == Complex{0.0})
        throw DegenerateError("pole-order", "x_m = 0 lowers the order of the pole");
    return assemble_potential(n, m, p);
}

Complex TangentField::evaluate(const RationalPotential& W, Complex z) const {
    Complex t{0.0};
    Complex zk{1.0};
    for (std::size_t k = 0; k < da.size(); ++k) {
        t += da[k] * zk;
        zk *= z;
    }
    const Complex inv = 1.0 / (z - W.pole);
    Complex p = inv;
    for (std::size_t j = 1; j <= dv.size(); ++j) {
        t += dv[j - 1] * p / static_cast<double>(j);
        t += dpole * W.v[j - 1] * p * inv;
        p *= inv;
    }
    return t;
}

// ---- Chart --------------------------------------------------------------------

Chart::Chart(std::string name, int n, int m, std::vector<CoordSlot> slots)
    : name_(std::move(name)), n_(n), m_(m), slots_(std::move(slots)) {
    if (slots_.size() != static_cast<std::size_t>(n + m + 1))
        throw std::invalid_argument("Chart: need n + m + 1 coordinates");
    const double delta = 1.0 / (n + 1);
    for (const CoordSlot& s : slots_) {
        if (s.kind == CoordKind::X)
            degrees_.push_back(delta + static_cast<double>(m - s.index) / m);
        else
            degrees_.push_back(delta * (s.index + 2));
    }
    auto find = [&](CoordKind kind, int index) {
        for (std::size_t i = 0; i < slots_.size(); ++i)
            if (slots_[i].kind == kind && slots_[i].index == index)
                return i;
        throw std::invalid_argument("Chart: missing coordinate");
    };
    if (n >= 1) {
        unit_ = find(CoordKind::Xt, n - 1);
        dual_ = find(CoordKind::Xt, 0);
    } else {
        unit_ = find(CoordKind::X, m);
        dual_ = find(CoordKind::X, 0);
    }
    dF_ = 2.0 * degrees_[unit_] + degrees_[dual_];
}

Chart Chart::standard(int n, int m) {
    std::vector<CoordSlot> slots;
    for (int i = 0; i <= m; ++i)
        slots.push_back({CoordKind::X, i, 1.0, "x" + std::to_string(i + 1)});
    for (int i = 0; i < n; ++i)
        slots.push_back({CoordKind::Xt, i, 1.0, "xt" + std::to_string(i + 1)});
    return Chart("custom:" + std::to_string(n) + "," + std::to_string(m), n, m, std::move(slots));
}

Chart Chart::nm11() {
    return Chart("nm11", 1, 1,
                 {{CoordKind::Xt, 0, -1.0, "x1"}, {CoordKind::X, 0, 1.0, "x2"}, {CoordKind::X, 1, 1.0, "x3"}});
}

Chart Chart::nm02() {
    return Chart("nm02", 0, 2,
                 {{CoordKind::X, 0, 1.0, "x1"}, {CoordKind::X, 1, 1.0, "x2"}, {CoordKind::X, 2, 1.0, "x3"}});
}

Chart Chart::from_model_id(const std::string& id) {
    if (id == "nm11")
        return nm11();
    if (id == "nm02")
        return nm02();
    const std::string prefix = "custom:";
    if (id.rfind(prefix, 0) == 0) {
        const std::string rest = id.substr(prefix.size());
        const auto comma = rest.find(',');
        if (comma != std::string::npos) {
            try {
                std::size_t used_n = 0, used_m = 0;
                const int n = std::stoi(rest.substr(0, comma), &used_n);
                const int m = std::stoi(rest.substr(comma + 1), &used_m);
                if (used_n == comma && used_m == rest.size() - comma - 1 && n >= 0 && m >= 1)
                    return standard(n, m);
            } catch (const std::logic_error&) {
            }
        }
    }
    throw std::invalid_argument("unknown model '" + id + "' (expected nm11, nm02 or custom:n,m)");
}

FlatPoint Chart::flat_point(std::span<const Complex> coords) const {
    if (coords.size() != slots_.size())
        throw std::invalid_argument("model " + name_ + " expects " + std::to_string(slots_.size()) + " coordinates");
    FlatPoint p;
    p.x.resize(static_cast<std::size_t>(m_) + 1);
    p.xt.resize(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        const CoordSlot& s = slots_[i];
        (s.kind == CoordKind::X ? p.x : p.xt)[s.index] = s.sign * coords[i];
    }
    for (const CoordSlot& s : slots_)
        if (s.kind == CoordKind::X)
            p.degrees.push_back(degrees_[&s - slots_.data()]);
    for (const CoordSlot& s : slots_)
        if (s.kind == CoordKind::Xt)
            p.degrees.push_back(degrees_[&s - slots_.data()]);
    p.dF = dF_;
    return p;
}

RationalPotential Chart::potential(std::span<const Complex> coords) const {
    return build_potential(n_, m_, flat_point(coords));
}

std::vector<TangentField> Chart::tangent_fields(std::span<const Complex> coords) const {
    validate_shape(n_, m_, flat_point(coords));
    // Coefficients are polynomials of degree <= max(m, n + 1) in each coordinate,
    // so the trapezoidal contour rule with more nodes than that is exact.
    const int points = 2 * std::max(m_, n_ + 1) + 4;
    std::vector<TangentField> fields;
    std::vector<Complex> shifted(coords.begin(), coords.end());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const double radius = std::max(1.0, std::abs(coords[i]));
        auto coefficients = [&](Complex t) {
            shifted[i] = t;
            const RationalPotential W = assemble_potential(n_, m_, flat_point(shifted));
            std::vector<Complex> out(W.a.begin(), W.a.end());
            out.insert(out.end(), W.v.begin(), W.v.end());
            out.push_back(W.pole);
            return out;
        };
        const auto d = contour_derivative(coefficients, coords[i], 1, radius, points);
        shifted[i] = coords[i];

        TangentField f;
        f.da.assign(d.begin(), d.begin() + n_);
        f.dv.assign(d.begin() + n_, d.begin() + n_ + m_);
        f.dpole = d.back();
        fields.push_back(std::move(f));
    }
    return fields;
}

ComplexMatrix Chart::expected_metric() const {
    const auto dim = static_cast<Eigen::Index>(slots_.size());
    ComplexMatrix eta = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) {
            const CoordSlot& a = slots_[i];
            const CoordSlot& b = slots_[j];
            if (a.kind != b.kind)
                continue;
            const int target = a.kind == CoordKind::X ? m_ : n_ - 1; // zero-based index sum
            if (a.index + b.index == target)
                eta(i, j) = a.sign * b.sign;
        }
    return eta;
}

// ---- metric, structure constants, WDVV ----------------------------------------

namespace {

struct ResidueData {
    std::vector<Complex> inv_second;             // 1 / W''(alpha_i)
    std::vector<std::vector<Complex>> tangents; // tangents[a][i] = dW_a(alpha_i)
};

ResidueData residue_data(const Chart& chart, std::span<const Complex> coords) {
    const RationalPotential W = chart.potential(coords);
    const auto alphas = W.critical_points();
    const auto fields = chart.tangent_fields(coords);
    ResidueData d;
    for (Complex al : alphas)
        d.inv_second.push_back(residue_at_simple_zero(1.0, W.second_derivative(al)));
    for (const TangentField& f : fields) {
        std::vector<Complex> vals;
        for (Complex al : alphas)
            vals.push_back(f.evaluate(W, al));
        d.tangents.push_back(std::move(vals));
    }
    return d;
}

} // namespace

ComplexMatrix flat_metric(const Chart& chart, std::span<const Complex> coords) {
    const ResidueData d = residue_data(chart, coords);
    const auto dim = static_cast<Eigen::Index>(d.tangents.size());
    ComplexMatrix eta(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index b = 0; b < dim; ++b) {
            Complex s{0.0};
            for (std::size_t i = 0; i < d.inv_second.size(); ++i)
                s += d.tangents[a][i] * d.tangents[b][i] * d.inv_second[i];
            eta(a, b) = s;
        }
    return eta;
}

Tensor3 structure_constants(const Chart& chart, std::span<const Complex> coords) {
    const ResidueData d = residue_data(chart, coords);
    const std::size_t dim = d.tangents.size();
    Tensor3 c(dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            for (std::size_t g = 0; g < dim; ++g) {
                Complex s{0.0};
                for (std::size_t i = 0; i < d.inv_second.size(); ++i)
                    s += d.tangents[a][i] * d.tangents[b][i] * d.tangents[g][i] * d.inv_second[i];
                c(a, b, g) = s;
            }
    return c;
}

double wdvv_residual(const Tensor3& c, const ComplexMatrix& eta_inv) {
    const std::size_t dim = c.dimension();
    if (static_cast<std::size_t>(eta_inv.rows()) != dim || static_cast<std::size_t>(eta_inv.cols()) != dim)
        throw std::invalid_argument("wdvv_residual: dimension mismatch");
    // raised[a][b][g] = c_{abd} eta^{dg}
    Tensor3 raised(dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            for (std::size_t g = 0; g < dim; ++g) {
                Complex s{0.0};
                for (std::size_t d = 0; d < dim; ++d)
                    s += c(a, b, d) * eta_inv(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(g));
                raised(a, b, g) = s;
            }
    double worst = 0.0;
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            for (std::size_t s = 0; s < dim; ++s)
                for (std::size_t r = 0; r < dim; ++r) {
                    Complex lhs{0.0}, rhs{0.0};
                    for (std::size_t g = 0; g < dim; ++g) {
                        lhs += raised(a, b, g) * c(g, s, r);
                        rhs += raised(a, s, g) * c(g, b, r);
                    }
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
    return worst;
}

double symmetry_defect(const Tensor3& c) {
    const std::size_t dim = c.dimension();
    double worst = 0.0;
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            for (std::size_t g = 0; g < dim; ++g) {
                const Complex x = c(a, b, g);
                for (Complex y : {c(a, g, b), c(b, a, g), c(b, g, a), c(g, a, b), c(g, b, a)})
                    worst = std::max(worst, std::abs(x - y));
            }
    return worst;
}

} // namespace frobkit
