#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "frobkit/algebra.hpp"
#include "frobkit/eulertop.hpp"
#include "frobkit/report.hpp"

namespace frobkit {

/// n = m = 1 model W = z²/2 + x1 + x2/(z - x3) on the omega-parametrised family
/// x2 = q x3³, q = 4(omega² - 1)² / (omega² + 3)³.
struct Nm11Data {
    Complex omega_param;
    Complex x1, x2, x3;
    Complex q;
    std::array<Complex, 3> a;            // alpha_i / x3
    Complex s_printed;                   // (omega-3)³(omega+1) / ((omega+3)³(omega-1))
    std::array<Complex, 3> omega_sq;     // the three displayed expressions, in display order
    std::array<Complex, 3> omega_sq_roots; // -(1/4)(a_k - 1)/(3a_k - 1), labelled like a
    std::array<Complex, 3> lame_sq;      // (a_k - 1)/(3a_k - 1)
    std::array<Complex, 3> u;            // W(alpha_k)
    Complex log_tau;
};

/// Throws DegenerateError for omega in {0, ±1, ±3} or omega² = -3.
Nm11Data nm11_closed_forms(Complex omega, Complex x3 = 1.0, Complex x1 = 0.0);

/// Omega-free s for the root labelling of Nm11Data::a: (u2 - u1)/(u3 - u1).
Complex nm11_s_from_roots(const Nm11Data& d);

/// log tau = (1/4) log x3² + (1/24) log(q³(27q - 4)), q = x2 / x3³ (principal logs).
/// Throws DegenerateError("tau-branch-point") for q = 0 or q = 4/27.
Complex nm11_log_tau(Complex x2, Complex x3);

/// Gradient of nm11_log_tau in chart coordinates (x1, x2, x3); the x1 entry is 0.
std::vector<Complex> nm11_log_tau_gradient(std::span<const Complex> x);

/// (1/4) log(u2 - u3) + (1/24) log((omega-1)^6 (omega+1)^6 (omega-3)² (omega+3)² omega^-16),
/// u2 - u3 = 8 x3² omega³ / (omega² + 3)².
Complex nm11_log_tau_omega(Complex omega, Complex x3 = 1.0);

/// The omega_k² family of the displayed closed forms as an Euler-top curve in omega.
TopCurve nm11_top_curve();

/// Closed-form data at an arbitrary nm11 point: a_k from a(a-1)² = x2/x3³.
struct ClosedFormFrame {
    std::vector<Complex> alphas;
    std::vector<Complex> u;
    std::vector<Complex> lame_sq;
    std::vector<Complex> omega_sq;
};
ClosedFormFrame nm11_point_forms(std::span<const Complex> x);

/// n = 0, m = 2 model W = z + x1/(z - x3) + x2²/(2(z - x3)²).
struct Nm02Data {
    Complex x1, x2, x3;
    Complex r;                 // x2² / x1^{3/2}
    std::array<Complex, 3> f;  // roots of f³ - x1 f - x2²
    std::array<Complex, 3> g;  // f / sqrt(x1)
    std::array<Complex, 3> u;
    std::array<Complex, 3> alphas;
    std::array<Complex, 3> lame_sq;       // f³/(3f² - x1)
    std::array<Complex, 3> lame_sq_tilde; // f²/(3f² - x1)
    std::array<Complex, 3> omega_sq;
    std::array<Complex, 3> omega_sq_tilde; // -(1/16) lame_sq_tilde
};

/// Roots f are in root order, or labelled like `reference_f` when given.
/// Throws DegenerateError("coalescing-critical-points") for a repeated f.
Nm02Data nm02_closed_forms(Complex x1, Complex x2, Complex x3, std::span<const Complex> reference_f = {});

/// tilde beta_ij = (x2²/2)(3f_k² - x1) / ((3f_i² - x1)^{3/2} (3f_j² - x1)^{3/2}), squared.
Complex nm02_beta_tilde_sq(const Nm02Data& d, int i, int j);

struct Nm02CheckOptions {
    double sum_tolerance = 1e-9;
    double top_tolerance = 1e-6;
    double beta_tolerance = 1e-5;
    bool perm_search = true;
};

/// |sum omega² + 1/4|, |sum tilde omega² + 1/16|, |sum tilde h² - 1|, Euler-top residuals of
/// both curves as x2 varies (s from u), and tilde beta² against the generic pipeline
/// with h² = dx3/du.
ReportList nm02_omega_checks(Complex x1, Complex x2, Complex x3, const Nm02CheckOptions& options = {});

/// `count` real points of the model's chart drawn with std::mt19937_64(seed), keeping only
/// points whose critical points and canonical coordinates are separated by at least 1e-2
/// (relative). nm11: x1 in [-1, 1], x2 in [0.5, 3], x3 in [0.5, 2]; nm02: x1 in [0.5, 2],
/// x2 in [0.3, 1.5], x3 in [-1, 1]; other charts: every coordinate in [0.5, 2].
std::vector<std::vector<Complex>> random_points(const std::string& model_id, int count, std::uint64_t seed);

} // namespace frobkit
