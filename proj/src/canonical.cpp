#include "frobkit/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "frobkit/errors.hpp"

namespace frobkit {

namespace {

double max_abs(std::span<const Complex> v) {
    double m = 0.0;
    for (Complex z : v)
        m = std::max(m, std::abs(z));
    return m;
}

std::vector<Complex> lame_values(const CanonicalFrame& frame, const std::optional<std::size_t>& coordinate) {
    if (!coordinate)
        return frame.lame_sq;
    const ComplexMatrix inv = frame.inverse_jacobian();
    if (*coordinate >= static_cast<std::size_t>(inv.rows()))
        throw std::invalid_argument("lame coordinate index out of range");
    std::vector<Complex> out(frame.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = inv(static_cast<Eigen::Index>(*coordinate), static_cast<Eigen::Index>(i));
    return out;
}

double min_gap(std::span<const Complex> u) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j)
            gap = std::min(gap, std::abs(u[i] - u[j]));
    return gap;
}

} // namespace

ComplexMatrix CanonicalFrame::inverse_jacobian() const { return jac.partialPivLu().inverse(); }

CanonicalFrame canonical_frame(const Chart& chart, std::span<const Complex> coords, std::span<const Complex> reference) {
    const RationalPotential W = chart.potential(coords);
    CanonicalFrame f;
    f.coords.assign(coords.begin(), coords.end());
    f.alphas = W.critical_points();
    if (!reference.empty()) {
        if (reference.size() != f.alphas.size())
            throw std::invalid_argument("canonical_frame: reference labelling has wrong size");
        f.alphas = align_to_reference(f.alphas, reference);
    }
    const std::size_t N = f.alphas.size();
    for (Complex a : f.alphas)
        f.u.push_back(W.value(a));
    require_separated(f.u, 1e-8, "coalescing-canonical-coordinates");

    const auto fields = chart.tangent_fields(coords);
    f.jac.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(fields.size()));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t a = 0; a < fields.size(); ++a)
            f.jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = fields[a].evaluate(W, f.alphas[i]);
    if (f.jac.rows() != f.jac.cols() || f.jac.partialPivLu().rcond() < 1e-13)
        throw DegenerateError("singular-jacobian", "du/dx is not invertible at this point");

    for (std::size_t i = 0; i < N; ++i) {
        Complex den{1.0};
        for (std::size_t j = 0; j < N; ++j)
            if (j != i)
                den *= f.alphas[i] - f.alphas[j];
        f.lame_sq.push_back(std::pow(f.alphas[i] - W.pole, W.m + 1) / den);
    }
    return f;
}

std::vector<Complex> invert_chart(const Chart& chart, std::span<const Complex> u_target, std::span<const Complex> seed,
                                  std::span<const Complex> reference) {
    std::vector<Complex> x(seed.begin(), seed.end());
    std::vector<Complex> ref(reference.begin(), reference.end());
    const auto n = static_cast<Eigen::Index>(x.size());
    double best = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; ++it) {
        const CanonicalFrame f = canonical_frame(chart, x, ref);
        ComplexVector r(n);
        for (Eigen::Index i = 0; i < n; ++i)
            r(i) = f.u[static_cast<std::size_t>(i)] - u_target[static_cast<std::size_t>(i)];
        best = std::min(best, r.cwiseAbs().maxCoeff());
        const ComplexVector dx = f.jac.partialPivLu().solve(r);
        for (Eigen::Index a = 0; a < n; ++a)
            x[static_cast<std::size_t>(a)] -= dx(a);
        ref = f.alphas;
        if (dx.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, max_abs(x)))
            return x;
    }
    throw ConvergenceError("invert_chart: Newton iteration did not converge", best);
}

RotationCoefficients rotation_coefficients(const Chart& chart, std::span<const Complex> coords,
                                           const RotationOptions& options) {
    if (!(options.h_step > 0.0))
        throw std::invalid_argument("rotation_coefficients: h_step must be positive");
    const CanonicalFrame f0 = canonical_frame(chart, coords, options.reference_alphas);
    const std::size_t N = f0.size();
    const auto n = static_cast<Eigen::Index>(N);

    RotationCoefficients rc;
    rc.lame_sq = lame_values(f0, options.lame_coordinate);
    for (std::size_t i = 0; i < N; ++i)
        rc.h.push_back(options.reference_h.empty() ? std::sqrt(rc.lame_sq[i])
                                                   : sqrt_near(rc.lame_sq[i], options.reference_h[i]));

    // d[i][j] = d(h_i²)/du_j
    ComplexMatrix d(n, n);
    std::vector<Complex> shifted = f0.u;
    auto lame_at = [&](std::size_t j, Complex uj) {
        shifted[j] = uj;
        const auto x = invert_chart(chart, shifted, coords, f0.alphas);
        shifted[j] = f0.u[j];
        return lame_values(canonical_frame(chart, x, f0.alphas), options.lame_coordinate);
    };
    const double gap = min_gap(f0.u);
    for (std::size_t j = 0; j < N; ++j) {
        std::vector<Complex> col;
        if (options.contour) {
            const double radius = std::min(1e-2 * std::max(1.0, std::abs(f0.u[j])), 0.1 * gap);
            col = contour_derivative([&](Complex t) { return lame_at(j, t); }, f0.u[j], 1, radius, 16);
        } else {
            const double step = options.h_step * std::max(1.0, std::abs(f0.u[j]));
            const Complex up = f0.u[j] + step, um = f0.u[j] - step;
            const auto hp = lame_at(j, up), hm = lame_at(j, um);
            for (std::size_t i = 0; i < N; ++i)
                col.push_back((hp[i] - hm[i]) / (up - um));
        }
        for (std::size_t i = 0; i < N; ++i)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    }

    ComplexMatrix raw = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j)
                raw(i, j) = d(i, j) / (2.0 * rc.h[static_cast<std::size_t>(i)] * rc.h[static_cast<std::size_t>(j)]);

    // Sign gauge h_i -> sigma_i h_i, first minimiser in binary order (all '+' first).
    double best = std::numeric_limits<double>::infinity();
    unsigned best_mask = 0;
    for (unsigned mask = 0; mask < (1u << N); ++mask) {
        double defect = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const double si = (mask >> i) & 1u ? -1.0 : 1.0;
                const double sj = (mask >> j) & 1u ? -1.0 : 1.0;
                defect = std::max(defect, std::abs(si * sj * (raw(i, j) - raw(j, i))));
            }
        if (defect < best) {
            best = defect;
            best_mask = mask;
        }
    }
    for (std::size_t i = 0; i < N; ++i) {
        const bool flip = (best_mask >> i) & 1u;
        rc.gauge.push_back(flip ? '-' : '+');
        if (flip)
            rc.h[i] = -rc.h[i];
    }
    rc.beta = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double si = (best_mask >> i) & 1u ? -1.0 : 1.0;
            const double sj = (best_mask >> j) & 1u ? -1.0 : 1.0;
            if (i != j)
                rc.beta(i, j) = 0.5 * si * sj * (raw(i, j) + raw(j, i));
        }
    rc.symmetry_defect = best;
    const double scale = rc.beta.cwiseAbs().maxCoeff();
    if (scale > 0.0 && best > 1e-4 * scale)
        throw NumericalError("branch-inconsistency",
                             "rotation coefficients not symmetric (defect " + format_number(best) + ")");
    return rc;
}

ComplexMatrix v_matrix(const CanonicalFrame& frame) {
    const auto n = static_cast<Eigen::Index>(frame.size());
    if (frame.beta.rows() != n)
        throw std::invalid_argument("v_matrix: frame has no rotation coefficients");
    ComplexMatrix V(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            V(i, j) = (frame.u[static_cast<std::size_t>(j)] - frame.u[static_cast<std::size_t>(i)]) * frame.beta(i, j);
    return V;
}

CanonicalFrame full_frame(const Chart& chart, std::span<const Complex> coords, const RotationOptions& options) {
    CanonicalFrame f = canonical_frame(chart, coords, options.reference_alphas);
    const RotationCoefficients rc = rotation_coefficients(chart, coords, options);
    f.beta = rc.beta;
    f.lame_sq = rc.lame_sq;
    f.vmat = v_matrix(f);
    if (f.size() == 3) {
        const auto spec = omega_and_spectrum(f);
        f.omega.assign(spec.omega.begin(), spec.omega.end());
    }
    return f;
}

OmegaSpectrum omega_and_spectrum(const CanonicalFrame& frame) {
    if (frame.size() != 3)
        throw UnsupportedError("omega_and_spectrum: only defined for N = 3");
    const ComplexMatrix V = v_matrix(frame);
    OmegaSpectrum out;
    out.omega = {V(1, 2), V(2, 0), V(0, 1)};
    out.r_squared = -(out.omega[0] * out.omega[0] + out.omega[1] * out.omega[1] + out.omega[2] * out.omega[2]);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(V, false);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("omega_and_spectrum: eigenvalue iteration failed", 0.0);
    for (Eigen::Index i = 0; i < 3; ++i)
        out.eigenvalues.push_back(solver.eigenvalues()(i));
    return out;
}

double r_squared_from_degrees(const Chart& chart) {
    const double shift = (chart.prepotential_degree() - 3.0) / 2.0;
    double sum = 0.0;
    for (double d : chart.degrees()) {
        const double mu = 1.0 - d + shift;
        sum += mu * mu;
    }
    return 0.5 * sum;
}

ReportList darboux_egoroff_residuals(const Chart& chart, std::span<const Complex> coords,
                                     const DarbouxEgoroffTolerances& tol) {
    const CanonicalFrame f0 = canonical_frame(chart, coords);
    const RotationCoefficients rc0 = rotation_coefficients(chart, coords);
    const std::size_t N = f0.size();
    const auto n = static_cast<Eigen::Index>(N);

    const double radius = std::min(1e-2 * std::max(1.0, max_abs(f0.u)), 0.1 * min_gap(f0.u));

    // beta (N² entries), h² (N), h (N) at canonical coordinates u.
    auto sample = [&](std::span<const Complex> u) {
        const auto x = invert_chart(chart, u, coords, f0.alphas);
        RotationOptions opt;
        opt.reference_h = rc0.h;
        opt.reference_alphas = f0.alphas;
        const RotationCoefficients rc = rotation_coefficients(chart, x, opt);
        std::vector<Complex> out;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                out.push_back(rc.beta(i, j));
        out.insert(out.end(), rc.lame_sq.begin(), rc.lame_sq.end());
        out.insert(out.end(), rc.h.begin(), rc.h.end());
        return out;
    };
    auto directional = [&](const std::vector<Complex>& dir) {
        const double t_radius = radius / max_abs(dir);
        std::vector<Complex> u(N);
        return contour_derivative(
            [&](Complex t) {
                for (std::size_t k = 0; k < N; ++k)
                    u[k] = f0.u[k] + t * dir[k];
                return sample(u);
            },
            Complex{0.0}, 1, t_radius, 16);
    };
    auto beta_of = [&](const std::vector<Complex>& v, std::size_t i, std::size_t j) { return v[i * N + j]; };
    const std::size_t lame_offset = N * N, h_offset = N * N + N;

    const std::vector<Complex> base = [&] {
        std::vector<Complex> b;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                b.push_back(rc0.beta(i, j));
        return b;
    }();

    double closure = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        std::vector<Complex> dir(N, Complex{0.0});
        dir[j] = 1.0;
        const auto dj = directional(dir);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k)
                if (i != j && j != k && i != k)
                    closure = std::max(closure, std::abs(beta_of(dj, i, k) - beta_of(base, i, j) * beta_of(base, j, k)));
    }

    const auto dI = directional(std::vector<Complex>(N, Complex{1.0}));
    const auto dE = directional(f0.u);

    const ComplexMatrix eta_inv = chart.expected_metric().inverse();
    double weight = 0.0;
    for (std::size_t a = 0; a < chart.dimension(); ++a)
        weight += chart.degrees()[a] *
                  eta_inv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(chart.unit_index())).real();
    const double homogeneity = weight - 1.0;

    double i_beta = 0.0, e_beta = 0.0, i_h = 0.0, e_h = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j)
            if (i != j) {
                i_beta = std::max(i_beta, std::abs(beta_of(dI, i, j)));
                e_beta = std::max(e_beta, std::abs(beta_of(dE, i, j) + beta_of(base, i, j)));
            }
        i_h = std::max(i_h, std::abs(dI[h_offset + i]));
        e_h = std::max(e_h, std::abs(dE[lame_offset + i] - homogeneity * rc0.lame_sq[i]));
    }

    const auto point = label_point(coords);
    ReportList out;
    auto add = [&](const char* name, double residual, double tolerance) -> VerificationReport& {
        out.push_back(VerificationReport::make(name, chart.name(), point, residual, tolerance));
        return out.back();
    };
    add("beta_symmetry", rc0.symmetry_defect, tol.symmetry).metadata["gauge"] = rc0.gauge;
    add("darboux_egoroff_closure", closure, tol.closure).metadata["contour_radius"] = format_number(radius);
    add("identity_action_beta", i_beta, tol.identity_action);
    add("euler_action_beta", e_beta, tol.euler_action);
    add("identity_action_lame", i_h, tol.lame_identity);
    add("lame_homogeneity", e_h, tol.lame_homogeneity).metadata["homogeneity"] = format_number(homogeneity);
    return out;
}

std::vector<Complex> tau_gradient(const CanonicalFrame& frame) {
    const std::size_t N = frame.size();
    if (static_cast<std::size_t>(frame.beta.rows()) != N)
        throw std::invalid_argument("tau_gradient: frame has no rotation coefficients");
    std::vector<Complex> g(N);
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = 0; i < N; ++i) {
            const Complex b = frame.beta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            g[j] += b * b * (frame.u[i] - frame.u[j]);
        }
    return g;
}

ReportList tau_gradient_check(const Chart& chart, const CanonicalFrame& frame, const GradientFunction& closed_gradient,
                              double gradient_tolerance, double action_tolerance) {
    const auto a = tau_gradient(frame);
    const double r2 = r_squared_from_degrees(chart);
    Complex sum{0.0}, weighted{0.0};
    for (std::size_t j = 0; j < a.size(); ++j) {
        sum += a[j];
        weighted += frame.u[j] * a[j];
    }
    const auto point = label_point(frame.coords);
    ReportList out;
    out.push_back(VerificationReport::make("tau_identity_action", chart.name(), point, std::abs(sum), action_tolerance));
    auto e = VerificationReport::make("tau_euler_action", chart.name(), point, std::abs(weighted - r2), action_tolerance);
    e.metadata["R2"] = format_number(r2);
    out.push_back(std::move(e));

    if (closed_gradient) {
        const auto G = closed_gradient(frame.coords);
        const ComplexMatrix inv = frame.inverse_jacobian();
        double worst = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            Complex b{0.0};
            for (std::size_t al = 0; al < G.size(); ++al)
                b += G[al] * inv(static_cast<Eigen::Index>(al), static_cast<Eigen::Index>(j));
            worst = std::max(worst, std::abs(a[j] - b));
        }
        out.push_back(VerificationReport::make("tau_gradient_identity", chart.name(), point, worst, gradient_tolerance));
    }
    return out;
}

} // namespace frobkit
