#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "frobkit/algebra.hpp"
#include "frobkit/report.hpp"

namespace frobkit {

struct PainleveSample {
    Complex s;
    Complex y;
    Complex dy;  // dy/ds
    Complex d2y; // d²y/ds²
    std::optional<Complex> v;
};

/// Right-hand side of PVI with bracket 1/8 - s/(8y²) + (s-1)/(8(y-1)²) + 3s(s-1)/(8(y-s)²).
Complex pvi_rhs(Complex s, Complex y, Complex dy);

/// d2y - pvi_rhs. Throws DegenerateError("pvi-pole") when s is within 1e-3 of {0, 1}
/// or y within 1e-3 of {0, 1, s}.
Complex pvi_residual(const PainleveSample& sample);

enum class HitchinKind { K3X, K6X, K3Omega, K6Omega };

/// "k3", "k6", "k3-omega", "k6-omega".
HitchinKind parse_hitchin_kind(const std::string& name);
std::string to_string(HitchinKind kind);

struct HitchinPoint {
    Complex y;
    Complex s;
};

/// k3: y = x²(x+2)/(x²+x+1); k6: y = x(x²+x+1)/(2x+1); both s = x³(x+2)/(2x+1).
/// The omega forms use x = (omega - 3)/(omega + 3). Throws DegenerateError naming the
/// excluded parameter value when t is within 1e-8 max(1, |t|) of one.
HitchinPoint hitchin_solution(HitchinKind kind, Complex t);

/// Distance from t to the nearest excluded parameter value of `kind`.
double hitchin_singularity_distance(HitchinKind kind, Complex t);

/// s, y and the s-derivatives of a parametric curve at t by the chain rule; t-derivatives
/// from the 32-node contour rule of radius `radius`.
PainleveSample parametric_sample(const std::function<Complex(Complex)>& y, const std::function<Complex(Complex)>& s,
                                 Complex t, double radius);

/// parametric_sample for a Hitchin solution with radius
/// min(1e-2 max(1, |t|), 0.25 hitchin_singularity_distance).
PainleveSample hitchin_sample(HitchinKind kind, Complex t);

/// Auxiliary variable v of a sample, from dy/ds = y(y-1)(y-s)/(s(s-1)) (2v - 1/(2y) - 1/(2(y-1)) + 1/(2(y-s))).
Complex auxiliary_v(const PainleveSample& sample);

/// The three omega_k² expressions in (y, v, s).
std::array<Complex, 3> omega_sq_from_y(const PainleveSample& sample);

struct OmtoyCurve {
    std::function<Complex(Complex)> y;
    std::function<Complex(Complex)> s;
    std::function<std::array<Complex, 3>(Complex)> omega_sq;
};

/// Matches omega_sq_from_y against the curve's omega_k² over the six relabellings
/// (report "omtoy_match", with convention) and checks their sum is -1/4 ("omtoy_sum").
ReportList omtoy_check(const OmtoyCurve& curve, std::span<const Complex> grid, double match_tolerance = 1e-5,
                       double sum_tolerance = 1e-6, bool perm_search = true, const std::string& model = "");

} // namespace frobkit
