#include "frobkit/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "frobkit/canonical.hpp"
#include "frobkit/errors.hpp"

namespace frobkit {

namespace {

void reject_near(Complex t, Complex bad, const char* name) {
    if (std::abs(t - bad) <= 1e-8 * std::max(1.0, std::abs(t)))
        throw DegenerateError("omega-degenerate", name);
}

std::array<Complex, 3> printed_omega_sq(Complex w) {
    return {-0.25 * (w * w - 1.0) / (w * w - 9.0), 0.25 * (w + 1.0) / (w * (w - 3.0)),
            -0.25 * (w - 1.0) / (w * (w + 3.0))};
}

Complex printed_s(Complex w) { return std::pow(w - 3.0, 3) * (w + 1.0) / (std::pow(w + 3.0, 3) * (w - 1.0)); }

} // namespace

Nm11Data nm11_closed_forms(Complex w, Complex x3, Complex x1) {
    reject_near(w, 0.0, "omega=0");
    reject_near(w, 1.0, "omega=1");
    reject_near(w, -1.0, "omega=-1");
    reject_near(w, 3.0, "omega=3");
    reject_near(w, -3.0, "omega=-3");
    reject_near(w * w, -3.0, "omega^2=-3");
    if (x3 == Complex{0.0})
        throw DegenerateError("omega-degenerate", "x3=0");

    Nm11Data d;
    d.omega_param = w;
    d.x1 = x1;
    d.x3 = x3;
    const Complex w2 = w * w;
    d.q = 4.0 * (w2 - 1.0) * (w2 - 1.0) / std::pow(w2 + 3.0, 3);
    d.x2 = d.q * x3 * x3 * x3;
    d.a = {4.0 / (w2 + 3.0), (w + 1.0) * (w + 1.0) / (w2 + 3.0), (w - 1.0) * (w - 1.0) / (w2 + 3.0)};
    d.s_printed = printed_s(w);
    d.omega_sq = printed_omega_sq(w);
    for (int k = 0; k < 3; ++k) {
        const Complex a = d.a[k];
        d.lame_sq[k] = (a - 1.0) / (3.0 * a - 1.0);
        d.omega_sq_roots[k] = -0.25 * d.lame_sq[k];
        d.u[k] = x3 * x3 * (0.5 * a * a + d.q / (a - 1.0)) + x1;
    }
    d.log_tau = nm11_log_tau(d.x2, x3);
    return d;
}

Complex nm11_s_from_roots(const Nm11Data& d) { return (d.u[1] - d.u[0]) / (d.u[2] - d.u[0]); }

Complex nm11_log_tau(Complex x2, Complex x3) {
    if (x3 == Complex{0.0})
        throw DegenerateError("tau-branch-point", "x3=0");
    const Complex q = x2 / (x3 * x3 * x3);
    if (std::abs(q) < 1e-14 || std::abs(27.0 * q - 4.0) < 1e-12)
        throw DegenerateError("tau-branch-point", "q=0 or q=4/27");
    return 0.25 * std::log(x3 * x3) + std::log(q * q * q * (27.0 * q - 4.0)) / 24.0;
}

std::vector<Complex> nm11_log_tau_gradient(std::span<const Complex> x) {
    if (x.size() != 3)
        throw std::invalid_argument("nm11_log_tau_gradient: expected 3 coordinates");
    const Complex x2 = x[1], x3 = x[2];
    const Complex q = x2 / (x3 * x3 * x3);
    const Complex dq = (3.0 / q + 27.0 / (27.0 * q - 4.0)) / 24.0; // d/dq of the second term
    return {Complex{0.0}, dq / (x3 * x3 * x3), 0.5 / x3 - dq * 3.0 * q / x3};
}

Complex nm11_log_tau_omega(Complex w, Complex x3) {
    const Complex w2 = w * w;
    const Complex du = 8.0 * x3 * x3 * w * w2 / ((w2 + 3.0) * (w2 + 3.0));
    const Complex big = std::pow(w - 1.0, 6) * std::pow(w + 1.0, 6) * std::pow(w - 3.0, 2) * std::pow(w + 3.0, 2) *
                        std::pow(w, -16);
    return 0.25 * std::log(du) + std::log(big) / 24.0;
}

TopCurve nm11_top_curve() {
    TopCurve c;
    c.s = printed_s;
    c.omega = printed_omega_sq;
    c.squares = true;
    return c;
}

ClosedFormFrame nm11_point_forms(std::span<const Complex> x) {
    if (x.size() != 3)
        throw std::invalid_argument("nm11_point_forms: expected 3 coordinates");
    const Complex x1 = x[0], x2 = x[1], x3 = x[2];
    const Complex q = x2 / (x3 * x3 * x3);
    const auto a = roots_all(Polynomial{-q, Complex{1.0}, Complex{-2.0}, Complex{1.0}});
    ClosedFormFrame f;
    for (Complex ak : a)
        f.alphas.push_back(x3 * ak);
    order_roots(f.alphas);
    for (Complex al : f.alphas) {
        const Complex ak = al / x3;
        f.u.push_back(x3 * x3 * (0.5 * ak * ak + q / (ak - 1.0)) + x1);
        f.lame_sq.push_back((ak - 1.0) / (3.0 * ak - 1.0));
        f.omega_sq.push_back(-0.25 * f.lame_sq.back());
    }
    return f;
}

Nm02Data nm02_closed_forms(Complex x1, Complex x2, Complex x3, std::span<const Complex> reference_f) {
    if (x1 == Complex{0.0} || x2 == Complex{0.0})
        throw DegenerateError("coalescing-critical-points", "x1=0 or x2=0");
    auto f = roots_all(Polynomial{-x2 * x2, -x1, Complex{0.0}, Complex{1.0}});
    require_separated(f, 1e-8, "coalescing-critical-points");
    if (!reference_f.empty())
        f = align_to_reference(f, reference_f);

    Nm02Data d;
    d.x1 = x1;
    d.x2 = x2;
    d.x3 = x3;
    const Complex sq = std::sqrt(x1);
    d.r = x2 * x2 / (x1 * sq);
    for (int k = 0; k < 3; ++k) {
        const Complex fk = f[k];
        const Complex den = 3.0 * fk * fk - x1;
        d.f[k] = fk;
        d.g[k] = fk / sq;
        d.alphas[k] = x3 + fk;
        d.u[k] = x3 + 1.5 * fk + 0.5 * x1 / fk;
        d.lame_sq[k] = fk * fk * fk / den;
        d.lame_sq_tilde[k] = fk * fk / den;
        d.omega_sq_tilde[k] = -d.lame_sq_tilde[k] / 16.0;
        const Complex g = d.g[k], r = d.r;
        const Complex poly = 8.0 * std::pow(g, 4) - 4.0 * g * g + r * r / (g * g);
        d.omega_sq[k] = r / 4.0 * (3.0 * g * g - 4.0) / ((g - 3.0 * r) * std::pow(3.0 * g * g - 1.0, 5)) * poly * poly;
    }
    return d;
}

Complex nm02_beta_tilde_sq(const Nm02Data& d, int i, int j) {
    if (i == j || i < 0 || j < 0 || i > 2 || j > 2)
        throw std::invalid_argument("nm02_beta_tilde_sq: need distinct indices in 0..2");
    const int k = 3 - i - j;
    auto D = [&](int l) { return 3.0 * d.f[l] * d.f[l] - d.x1; };
    const Complex x2sq = d.x2 * d.x2;
    return x2sq * x2sq / 4.0 * D(k) * D(k) / std::pow(D(i) * D(j), 3);
}

ReportList nm02_omega_checks(Complex x1, Complex x2, Complex x3, const Nm02CheckOptions& options) {
    const Nm02Data d = nm02_closed_forms(x1, x2, x3);
    const std::vector<LabeledValue> point{{"x1", x1}, {"x2", x2}, {"x3", x3}};
    ReportList out;

    Complex so{0.0}, st{0.0}, sh{0.0};
    for (int k = 0; k < 3; ++k) {
        so += d.omega_sq[k];
        st += d.omega_sq_tilde[k];
        sh += d.lame_sq_tilde[k];
    }
    out.push_back(VerificationReport::make("nm02_omega_sum", "nm02", point, std::abs(so + 0.25), options.sum_tolerance));
    out.push_back(
        VerificationReport::make("nm02_omega_tilde_sum", "nm02", point, std::abs(st + 1.0 / 16.0), options.sum_tolerance));
    out.push_back(
        VerificationReport::make("nm02_lame_tilde_sum", "nm02", point, std::abs(sh - 1.0), options.sum_tolerance));

    // Curves in t = x2 with x1, x3 fixed; labels follow the roots at the centre.
    const std::vector<Complex> ref(d.f.begin(), d.f.end());
    auto at = [=](Complex t) { return nm02_closed_forms(x1, t, x3, ref); };
    auto s_of = [=](Complex t) {
        const auto e = at(t);
        return (e.u[1] - e.u[0]) / (e.u[2] - e.u[0]);
    };
    std::vector<Complex> grid;
    for (int k = 0; k < 7; ++k)
        grid.push_back(x2 * (1.0 + 0.05 * (k - 3) / 3.0));
    ParametricOptions popt;
    popt.perm_search = options.perm_search;
    popt.contour_radius = 1e-3 * std::abs(x2);

    TopCurve plain{s_of, [=](Complex t) { return at(t).omega_sq; }, true};
    auto r1 = parametric_residual(plain, grid, options.top_tolerance, popt, "nm02");
    r1.check_name = "nm02_top_omega";
    r1.point = point;
    out.push_back(std::move(r1));
    TopCurve tilde{s_of, [=](Complex t) { return at(t).omega_sq_tilde; }, true};
    auto r2 = parametric_residual(tilde, grid, options.top_tolerance, popt, "nm02");
    r2.check_name = "nm02_top_omega_tilde";
    r2.point = point;
    out.push_back(std::move(r2));

    const Chart chart = Chart::nm02();
    const std::vector<Complex> coords{x1, x2, x3};
    RotationOptions ropt;
    ropt.contour = true;
    ropt.lame_coordinate = 2;
    ropt.reference_alphas.assign(d.alphas.begin(), d.alphas.end());
    const auto rc = rotation_coefficients(chart, coords, ropt);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const Complex b = rc.beta(i, j);
            worst = std::max(worst, std::abs(b * b - nm02_beta_tilde_sq(d, i, j)));
        }
    out.push_back(VerificationReport::make("nm02_beta_tilde", "nm02", point, worst, options.beta_tolerance));
    return out;
}

std::vector<std::vector<Complex>> random_points(const std::string& model_id, int count, std::uint64_t seed) {
    if (count < 0)
        throw std::invalid_argument("random_points: negative count");
    const Chart chart = Chart::from_model_id(model_id);
    std::vector<std::pair<double, double>> box(chart.dimension(), {0.5, 2.0});
    if (model_id == "nm11")
        box = {{-1.0, 1.0}, {0.5, 3.0}, {0.5, 2.0}};
    else if (model_id == "nm02")
        box = {{0.5, 2.0}, {0.3, 1.5}, {-1.0, 1.0}};

    std::mt19937_64 rng(seed);
    std::vector<std::vector<Complex>> out;
    for (int attempts = 0; static_cast<int>(out.size()) < count; ++attempts) {
        if (attempts > 100 * (count + 1))
            throw ConvergenceError("random_points: too few regular samples", 0.0);
        std::vector<Complex> x;
        for (const auto& [lo, hi] : box)
            x.emplace_back(std::uniform_real_distribution<double>(lo, hi)(rng));
        try {
            const CanonicalFrame f = canonical_frame(chart, x);
            if (relative_separation(f.alphas) < 1e-2 || relative_separation(f.u) < 1e-2)
                continue;
        } catch (const NumericalError&) {
            continue;
        }
        out.push_back(std::move(x));
    }
    return out;
}

} // namespace frobkit
