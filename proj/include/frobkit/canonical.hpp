#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frobkit/frobenius.hpp"
#include "frobkit/report.hpp"

namespace frobkit {

/// Darboux-Egoroff data at one point of a chart. beta, omega and vmat stay empty
/// until rotation_coefficients() / omega_and_spectrum() fill them.
struct CanonicalFrame {
    std::vector<Complex> coords;
    std::vector<Complex> alphas;
    std::vector<Complex> u;
    ComplexMatrix jac; // jac(i, a) = du_i / dt_a
    std::vector<Complex> lame_sq;
    ComplexMatrix beta;
    std::vector<Complex> omega;
    ComplexMatrix vmat;

    std::size_t size() const noexcept { return alphas.size(); }
    /// dt_a / du_i, i.e. jac^{-1}.
    ComplexMatrix inverse_jacobian() const;
};

/// Critical points, canonical coordinates u_i = W(alpha_i), Jacobian and
/// h_i² = (alpha_i - pole)^{m+1} / prod_{j != i} (alpha_i - alpha_j).
/// With `reference` non-empty, critical points are labelled to match it instead of
/// using the default root order. Throws DegenerateError for coalescing alpha or u
/// ("coalescing-canonical-coordinates") and for a singular Jacobian ("singular-jacobian").
CanonicalFrame canonical_frame(const Chart& chart, std::span<const Complex> coords,
                               std::span<const Complex> reference = {});

/// Chart coordinates whose canonical coordinates (labelled like `reference`) equal
/// `u_target`, by Newton iteration from `seed`. Step tolerance 1e-12 relative, at most
/// 50 iterations; throws ConvergenceError otherwise.
std::vector<Complex> invert_chart(const Chart& chart, std::span<const Complex> u_target,
                                  std::span<const Complex> seed, std::span<const Complex> reference);

struct RotationOptions {
    double h_step = 1e-6;
    /// Differentiate in u with the 16-node contour rule (radius min(1e-2 max(1, |u|),
    /// 0.1 min |u_i - u_j|)) instead of central differences with h_step.
    bool contour = false;
    /// Use h_i² = d t_c / du_i for this chart coordinate instead of the dual of the unit.
    std::optional<std::size_t> lame_coordinate;
    /// Branch of h_i = sqrt(h_i²) closest to these values (principal root when empty).
    std::vector<Complex> reference_h;
    /// Label critical points like these (default root order when empty).
    std::vector<Complex> reference_alphas;
};

struct RotationCoefficients {
    ComplexMatrix beta;
    std::vector<Complex> lame_sq;
    std::vector<Complex> h;
    double symmetry_defect = 0.0; // max |beta_ij - beta_ji|
    std::string gauge;            // chosen signs of h_i, e.g. "++-"
};

/// beta_ij = (1/h_j) dh_i/du_j = d_j(h_i²) / (2 h_i h_j), off-diagonal, by central
/// differences in u with step h_step max(1, |u|); x(u) from invert_chart. The returned
/// matrix is the symmetrised one; the raw defect is reported. Throws
/// NumericalError("branch-inconsistency") when the defect exceeds 1e-4 max|beta|.
RotationCoefficients rotation_coefficients(const Chart& chart, std::span<const Complex> coords,
                                           const RotationOptions& options = {});

inline RotationOptions contour_rotation() {
    RotationOptions o;
    o.contour = true;
    return o;
}

/// Frame with beta (and, for N = 3, omega and V) filled in. Uses the contour rule
/// unless `options` says otherwise.
CanonicalFrame full_frame(const Chart& chart, std::span<const Complex> coords,
                          const RotationOptions& options = contour_rotation());

struct DarbouxEgoroffTolerances {
    double symmetry = 1e-6;
    double closure = 1e-5;
    double identity_action = 1e-5;
    double euler_action = 1e-5;
    double lame_identity = 1e-6;
    double lame_homogeneity = 1e-5;
};

/// Symmetry of beta, closure d_j beta_ik = beta_ij beta_jk, I(beta) = 0, E(beta) = -beta,
/// I(h_i) = 0 and E(h_i²) = (sum_a d_a eta^{a,e} - 1) h_i² (e the unit coordinate).
/// Outer u-derivatives use the contour rule on a circle of radius
/// min(1e-2 max(1, |u|), 0.1 min |u_i - u_j|).
ReportList darboux_egoroff_residuals(const Chart& chart, std::span<const Complex> coords,
                                     const DarbouxEgoroffTolerances& tol = {});

struct OmegaSpectrum {
    std::array<Complex, 3> omega;    // omega_k = (u_j - u_i) beta_ij, (i, j, k) cyclic
    std::vector<Complex> eigenvalues; // of V, in Eigen's order
    Complex r_squared;                // -sum omega_k²
};

/// Requires frame.beta; N != 3 throws UnsupportedError.
OmegaSpectrum omega_and_spectrum(const CanonicalFrame& frame);

/// V_ij = (u_j - u_i) beta_ij.
ComplexMatrix v_matrix(const CanonicalFrame& frame);

/// R² = (1/2) sum mu_a² with mu_a = 1 - d_a + (d_F - 3)/2.
double r_squared_from_degrees(const Chart& chart);

using GradientFunction = std::function<std::vector<Complex>(std::span<const Complex>)>;

/// d_j log tau = sum_i beta_ij² (u_i - u_j). Reports I(log tau) = 0, E(log tau) = R²
/// (R² from the degrees) and, when `closed_gradient` (in chart coordinates) is given,
/// agreement with the chain rule through jac^{-1}.
ReportList tau_gradient_check(const Chart& chart, const CanonicalFrame& frame, const GradientFunction& closed_gradient,
                              double gradient_tolerance = 1e-6, double action_tolerance = 1e-8);

/// d_j log tau from the rotation coefficients.
std::vector<Complex> tau_gradient(const CanonicalFrame& frame);

} // namespace frobkit
