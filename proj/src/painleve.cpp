#include "frobkit/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "frobkit/errors.hpp"

namespace frobkit {

Complex pvi_rhs(Complex s, Complex y, Complex dy) {
    const Complex bracket = 1.0 / 8.0 - s / (8.0 * y * y) + (s - 1.0) / (8.0 * (y - 1.0) * (y - 1.0)) +
                            3.0 * s * (s - 1.0) / (8.0 * (y - s) * (y - s));
    return 0.5 * (1.0 / y + 1.0 / (y - 1.0) + 1.0 / (y - s)) * dy * dy -
           (1.0 / s + 1.0 / (s - 1.0) + 1.0 / (y - s)) * dy +
           y * (y - 1.0) * (y - s) / (s * s * (s - 1.0) * (s - 1.0)) * bracket;
}

Complex pvi_residual(const PainleveSample& p) {
    constexpr double radius = 1e-3;
    if (std::abs(p.s) < radius || std::abs(p.s - 1.0) < radius)
        throw DegenerateError("pvi-pole", "s too close to 0 or 1");
    if (std::abs(p.y) < radius || std::abs(p.y - 1.0) < radius || std::abs(p.y - p.s) < radius)
        throw DegenerateError("pvi-pole", "y too close to 0, 1 or s");
    return p.d2y - pvi_rhs(p.s, p.y, p.dy);
}

HitchinKind parse_hitchin_kind(const std::string& name) {
    if (name == "k3")
        return HitchinKind::K3X;
    if (name == "k6")
        return HitchinKind::K6X;
    if (name == "k3-omega")
        return HitchinKind::K3Omega;
    if (name == "k6-omega")
        return HitchinKind::K6Omega;
    throw std::invalid_argument("unknown solution '" + name + "' (expected k3, k6, k3-omega or k6-omega)");
}

std::string to_string(HitchinKind kind) {
    switch (kind) {
    case HitchinKind::K3X:
        return "k3";
    case HitchinKind::K6X:
        return "k6";
    case HitchinKind::K3Omega:
        return "k3-omega";
    case HitchinKind::K6Omega:
        return "k6-omega";
    }
    return "?";
}

namespace {

struct Excluded {
    Complex value;
    const char* name;
};

const std::vector<Excluded>& excluded(HitchinKind kind) {
    const Complex cube_root = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const Complex root3i{0.0, std::sqrt(3.0)};
    static const std::vector<Excluded> x_form{
        {0.0, "x=0"}, {-2.0, "x=-2"}, {-0.5, "x=-1/2"}, {1.0, "x=1"},
        {cube_root, "x^2+x+1=0"}, {std::conj(cube_root), "x^2+x+1=0"},
    };
    static const std::vector<Excluded> omega_form{
        {0.0, "omega=0"}, {1.0, "omega=1"}, {-1.0, "omega=-1"}, {3.0, "omega=3"},
        {-3.0, "omega=-3"}, {root3i, "omega^2=-3"}, {-root3i, "omega^2=-3"},
    };
    return kind == HitchinKind::K3X || kind == HitchinKind::K6X ? x_form : omega_form;
}

} // namespace

double hitchin_singularity_distance(HitchinKind kind, Complex t) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& e : excluded(kind))
        d = std::min(d, std::abs(t - e.value));
    return d;
}

HitchinPoint hitchin_solution(HitchinKind kind, Complex t) {
    for (const auto& e : excluded(kind))
        if (std::abs(t - e.value) <= 1e-8 * std::max(1.0, std::abs(t)))
            throw DegenerateError("hitchin-degenerate", e.name);
    switch (kind) {
    case HitchinKind::K3X:
        return {t * t * (t + 2.0) / (t * t + t + 1.0), t * t * t * (t + 2.0) / (2.0 * t + 1.0)};
    case HitchinKind::K6X:
        return {t * (t * t + t + 1.0) / (2.0 * t + 1.0), t * t * t * (t + 2.0) / (2.0 * t + 1.0)};
    case HitchinKind::K3Omega:
    case HitchinKind::K6Omega: {
        const Complex w = t;
        const Complex s = std::pow(w - 3.0, 3) * (w + 1.0) / (std::pow(w + 3.0, 3) * (w - 1.0));
        const Complex y = kind == HitchinKind::K3Omega
                              ? (w - 3.0) * (w - 3.0) * (w + 1.0) / ((w + 3.0) * (w * w + 3.0))
                              : (w - 3.0) * (w * w + 3.0) / ((w - 1.0) * (w + 3.0) * (w + 3.0));
        return {y, s};
    }
    }
    throw std::invalid_argument("hitchin_solution: bad kind");
}

PainleveSample parametric_sample(const std::function<Complex(Complex)>& y, const std::function<Complex(Complex)>& s,
                                 Complex t, double radius) {
    auto both = [&](Complex z) { return std::vector<Complex>{y(z), s(z)}; };
    const auto d1 = contour_derivative(both, t, 1, radius, 32);
    const auto d2 = contour_derivative(both, t, 2, radius, 32);
    if (std::abs(d1[1]) < 1e-14)
        throw DegenerateError("stationary-s", "ds/dt vanishes");
    PainleveSample p;
    p.y = y(t);
    p.s = s(t);
    p.dy = d1[0] / d1[1];
    p.d2y = (d2[0] - p.dy * d2[1]) / (d1[1] * d1[1]);
    return p;
}

PainleveSample hitchin_sample(HitchinKind kind, Complex t) {
    hitchin_solution(kind, t);
    const double radius = std::min(1e-2 * std::max(1.0, std::abs(t)), 0.25 * hitchin_singularity_distance(kind, t));
    return parametric_sample([kind](Complex z) { return hitchin_solution(kind, z).y; },
                             [kind](Complex z) { return hitchin_solution(kind, z).s; }, t, radius);
}

Complex auxiliary_v(const PainleveSample& p) {
    const Complex y = p.y, s = p.s;
    return 0.5 * (p.dy * s * (s - 1.0) / (y * (y - 1.0) * (y - s)) + 1.0 / (2.0 * y) + 1.0 / (2.0 * (y - 1.0)) -
                  1.0 / (2.0 * (y - s)));
}

std::array<Complex, 3> omega_sq_from_y(const PainleveSample& p) {
    const Complex y = p.y, s = p.s;
    const Complex v = p.v ? *p.v : auxiliary_v(p);
    const Complex a = v - 1.0 / (2.0 * y), b = v - 1.0 / (2.0 * (y - 1.0)), c = v - 1.0 / (2.0 * (y - s));
    return {
        -(y - s) * y * y * (y - 1.0) / s * c * b,
        (y - s) * (y - s) * y * (y - 1.0) / (s * (1.0 - s)) * b * a,
        -(y - s) * y * (y - 1.0) * (y - 1.0) / (1.0 - s) * a * c,
    };
}

ReportList omtoy_check(const OmtoyCurve& curve, std::span<const Complex> grid, double match_tolerance,
                       double sum_tolerance, bool perm_search, const std::string& model) {
    if (grid.empty())
        throw std::invalid_argument("omtoy_check: empty grid");
    std::vector<std::array<Complex, 3>> rhs, target;
    double sum_worst = 0.0;
    for (Complex t : grid) {
        const double radius = 1e-3 * std::max(1.0, std::abs(t));
        const PainleveSample p = parametric_sample(curve.y, curve.s, t, radius);
        const auto r = omega_sq_from_y(p);
        rhs.push_back(r);
        target.push_back(curve.omega_sq(t));
        sum_worst = std::max(sum_worst, std::abs(r[0] + r[1] + r[2] + 0.25));
    }

    const auto& perms = permutations3();
    const std::size_t count = perm_search ? perms.size() : 1;
    std::vector<double> residuals;
    for (std::size_t k = 0; k < count; ++k) {
        double worst = 0.0;
        for (std::size_t g = 0; g < grid.size(); ++g)
            for (int c = 0; c < 3; ++c)
                worst = std::max(worst, std::abs(rhs[g][c] - target[g][perms[k][c]]));
        residuals.push_back(worst);
    }
    const double best = *std::min_element(residuals.begin(), residuals.end());
    // Residuals far below the tolerance are rounding noise and count as ties.
    const double cutoff = std::max(2.0 * best, 1e-2 * match_tolerance);
    std::size_t chosen = 0;
    while (residuals[chosen] > cutoff)
        ++chosen;

    const std::vector<LabeledValue> point{{"t_first", grid.front()}, {"t_last", grid.back()}};
    ReportList out;
    auto match = VerificationReport::make("omtoy_match", model, point, residuals[chosen], match_tolerance);
    const auto& p = perms[chosen];
    match.convention = "perm=(" + std::to_string(p[0] + 1) + "," + std::to_string(p[1] + 1) + "," +
                       std::to_string(p[2] + 1) + ")";
    match.metadata["best_residual"] = format_number(best);
    out.push_back(std::move(match));
    out.push_back(VerificationReport::make("omtoy_sum", model, point, sum_worst, sum_tolerance));
    return out;
}

} // namespace frobkit
