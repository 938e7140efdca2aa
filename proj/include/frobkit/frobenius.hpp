#pragma once

#include <span>
#include <string>
#include <vector>

#include "frobkit/algebra.hpp"
#include "frobkit/report.hpp"

namespace frobkit {

/// W(z) = z^{n+1}/(n+1) + sum_k a_k z^k + sum_j v_j / (j (z - pole)^j).
struct RationalPotential {
    int n = 0;
    int m = 1;
    std::vector<Complex> a; // a_0 .. a_{n-1}
    std::vector<Complex> v; // v_1 .. v_m
    Complex pole{0.0};

    Complex value(Complex z) const;
    Complex derivative(Complex z) const;
    Complex second_derivative(Complex z) const;

    /// (z - pole)^{m+1} W'(z): monic of degree n + m + 1.
    Polynomial critical_numerator() const;

    /// Zeros of W' in the order of order_roots(). Throws DegenerateError when two of
    /// them coalesce (relative distance below 1e-8).
    std::vector<Complex> critical_points() const;
};

/// Flat coordinates x_1..x_{m+1} (pole sector) and x̃_1..x̃_n (polynomial sector),
/// with the Euler degrees of each coordinate (x first, then x̃) and of the prepotential.
struct FlatPoint {
    std::vector<Complex> x;
    std::vector<Complex> xt;
    std::vector<double> degrees;
    double dF = 0.0;
};

/// Largest polynomial order n for which build_potential inverts the x̃ series.
inline constexpr int kMaxPolynomialOrder = 2;

RationalPotential build_potential(int n, int m, const FlatPoint& p);

/// Coefficient-space derivative of W along one coordinate direction.
struct TangentField {
    std::vector<Complex> da;
    std::vector<Complex> dv;
    Complex dpole{0.0};

    /// dW/dt at z for the potential W the field was taken at.
    Complex evaluate(const RationalPotential& W, Complex z) const;
};

enum class CoordKind { X, Xt };

struct CoordSlot {
    CoordKind kind;
    int index;   // zero-based within its sector
    double sign; // chart coordinate = sign * flat coordinate
    std::string name;
};

/// An ordering (and sign convention) of the flat coordinates of the (n, m) family.
/// Model points are given in chart coordinates: for nm11 that is
/// (x1, x2, x3) = (-x̃_1, x_1, x_2), matching W = z²/2 + x1 + x2/(z - x3).
class Chart {
public:
    Chart(std::string name, int n, int m, std::vector<CoordSlot> slots);

    /// x_1..x_{m+1} followed by x̃_1..x̃_n.
    static Chart standard(int n, int m);
    static Chart nm11();
    static Chart nm02();
    /// "nm11", "nm02" or "custom:n,m". Throws std::invalid_argument otherwise.
    static Chart from_model_id(const std::string& id);

    const std::string& name() const noexcept { return name_; }
    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    std::size_t dimension() const noexcept { return slots_.size(); }
    const std::vector<CoordSlot>& slots() const noexcept { return slots_; }

    FlatPoint flat_point(std::span<const Complex> coords) const;
    RationalPotential potential(std::span<const Complex> coords) const;

    /// dW/dt_alpha for every chart coordinate (Cauchy contour rule, exact for the polynomial coefficients).
    std::vector<TangentField> tangent_fields(std::span<const Complex> coords) const;

    /// Euler degrees d_alpha of the chart coordinates and the prepotential degree d_F.
    const std::vector<double>& degrees() const noexcept { return degrees_; }
    double prepotential_degree() const noexcept { return dF_; }

    /// Chart index of the unit direction e (I = sum_i d/du_i = d/dt_e).
    std::size_t unit_index() const noexcept { return unit_; }
    /// Chart index paired with the unit by the flat metric; h_i² = d t_dual / d u_i.
    std::size_t dual_index() const noexcept { return dual_; }

    /// The constant metric the residue pairing must reproduce in this chart.
    ComplexMatrix expected_metric() const;

private:
    std::string name_;
    int n_, m_;
    std::vector<CoordSlot> slots_;
    std::vector<double> degrees_;
    double dF_ = 0.0;
    std::size_t unit_ = 0, dual_ = 0;
};

/// Symmetric rank-3 tensor stored densely.
class Tensor3 {
public:
    explicit Tensor3(std::size_t dim = 0) : dim_(dim), data_(dim * dim * dim) {}
    std::size_t dimension() const noexcept { return dim_; }
    Complex& operator()(std::size_t a, std::size_t b, std::size_t c) { return data_[(a * dim_ + b) * dim_ + c]; }
    Complex operator()(std::size_t a, std::size_t b, std::size_t c) const { return data_[(a * dim_ + b) * dim_ + c]; }

private:
    std::size_t dim_;
    std::vector<Complex> data_;
};

/// eta_{ab} = sum over critical points of dW_a dW_b / W''.
ComplexMatrix flat_metric(const Chart& chart, std::span<const Complex> coords);

/// c_{abc} = sum over critical points of dW_a dW_b dW_c / W''.
Tensor3 structure_constants(const Chart& chart, std::span<const Complex> coords);

/// max over (a, b, s, r) of |c_{abd} eta^{dg} c_{gsr} - c_{asd} eta^{dg} c_{gbr}|.
double wdvv_residual(const Tensor3& c, const ComplexMatrix& eta_inv);

/// Largest deviation of c from full index symmetry.
double symmetry_defect(const Tensor3& c);

/// Closed-form prepotential of one of the shipped models, in chart coordinates.
class Prepotential {
public:
    static Prepotential for_model(const std::string& model_id);

    const std::string& model() const noexcept { return model_; }
    Complex value(std::span<const Complex> x) const;
    std::vector<Complex> gradient(std::span<const Complex> x) const;

private:
    explicit Prepotential(std::string model) : model_(std::move(model)) {}
    std::string model_;
};

/// Mixed third derivative d³f/dx_a dx_b dx_c by the 8-point central stencil with step h.
Complex third_derivative_fd(const std::function<Complex(std::span<const Complex>)>& f, std::span<const Complex> x,
                            std::size_t a, std::size_t b, std::size_t c, double h);

/// Mixed third derivative from samples on the torus |y_d - x_d| = radius over the distinct
/// directions d among (a, b, c), `points` nodes per circle (multivariate Cauchy rule).
Complex third_derivative_contour(const std::function<Complex(std::span<const Complex>)>& f, std::span<const Complex> x,
                                 std::size_t a, std::size_t b, std::size_t c, double radius, int points = 16);

/// Third derivatives of F (contour rule) against the residue structure
/// constants, and the quasi-homogeneity defect: third derivatives of E(F) - d_F F.
/// Requires real positive x2 (principal logarithm). Throws DegenerateError("log-branch").
ReportList prepotential_checks(const std::string& model_id, std::span<const Complex> coords,
                               double fd_tolerance = 1e-6, double quasi_tolerance = 1e-7);

} // namespace frobkit
