#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>

#include "frobkit/algebra.hpp"
#include "frobkit/report.hpp"

namespace frobkit {

struct EulerTopState {
    Complex s;
    std::array<Complex, 3> omega;

    Complex casimir() const { return omega[0] * omega[0] + omega[1] * omega[1] + omega[2] * omega[2]; }
};

/// (w2 w3 / s, w1 w3 / (s (s - 1)), w1 w2 / (1 - s)).
/// Throws DegenerateError("top-singularity") when |s| or |s - 1| is at most `tol`.
std::array<Complex, 3> top_rhs(const EulerTopState& state, double tol = 1e-12);

struct Rk4Result {
    EulerTopState state;
    double casimir_drift = 0.0;    // |C(end) - C(start)|
    double drift_constant = 0.0;   // drift / (path length / steps)^4
};

/// Classical RK4 along the straight segment from initial.s to s_end.
/// Throws DegenerateError("path-near-singularity") if the segment passes within 0.05
/// of s = 0 or s = 1.
Rk4Result integrate_rk4(const EulerTopState& initial, Complex s_end, int steps);

/// Distance from the segment [a, b] to the point p.
double segment_distance(Complex a, Complex b, Complex p);

/// A one-parameter family t -> (s(t), omega(t)). With `squares` set, omega() returns
/// omega_k² and the curve is continued from principal roots along the grid.
struct TopCurve {
    std::function<Complex(Complex)> s;
    std::function<std::array<Complex, 3>(Complex)> omega;
    bool squares = false;
};

struct ParametricOptions {
    double step = 1e-5;      // central-difference step, times max(1, |t|)
    double contour_radius = 0.0; // > 0: use the contour rule with this radius instead
    int contour_points = 16;
    bool perm_search = true;
};

/// Max over the grid of |d omega'/ds' - top_rhs(s', omega')| for the best relabelling:
/// u'_c = u_{pi(c)}, omega'_c = sgn(pi) omega_{pi(c)}, s' the matching Moebius image of s.
/// Square-given curves also try both classes of the product sign omega_1 omega_2 omega_3.
/// The convention is the first, in (permutation, sign) lexicographic order, whose
/// residual is within max(2 best, 1e-2 tolerance). Needs at least 5 grid points.
VerificationReport parametric_residual(const TopCurve& curve, std::span<const Complex> grid, double tolerance,
                                       const ParametricOptions& options = {}, const std::string& model = "");

} // namespace frobkit
