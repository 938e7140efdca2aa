#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace frobkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Dense polynomial with complex coefficients, lowest degree first.
/// Trailing (exactly) zero coefficients are trimmed on construction; the zero
/// polynomial is stored as the single coefficient 0 and has degree 0.
class Polynomial {
public:
    Polynomial() : coeffs_{Complex{0.0}} {}
    explicit Polynomial(std::vector<Complex> coeffs);
    Polynomial(std::initializer_list<Complex> coeffs) : Polynomial(std::vector<Complex>(coeffs)) {}

    /// Monic polynomial with the given roots.
    static Polynomial from_roots(std::span<const Complex> roots);

    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
    Complex leading() const noexcept { return coeffs_.back(); }
    Complex operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Complex{0.0}; }

    Complex operator()(Complex z) const;
    Polynomial derivative() const;
    double max_abs_coeff() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Complex c, const Polynomial& p);

private:
    std::vector<Complex> coeffs_;
};

/// All roots of p, with multiplicity. Cubics use Cardano's formula followed by a
/// Newton polish step; other degrees use Durand-Kerner iteration.
/// Every root satisfies |p(r)| <= tol * (1 + max|coeff|); the result is ordered by
/// order_roots(). Throws UnsupportedError for degree 0 and ConvergenceError when the
/// iteration cap is reached without meeting the residual bound.
std::vector<Complex> roots_all(const Polynomial& p, double tol = 1e-12);

/// Deterministic ordering: descending real part, ties (within 1e-9 * scale) broken by
/// ascending imaginary part.
void order_roots(std::vector<Complex>& roots);

/// Residue of N/W' at a simple zero alpha of W': N(alpha) / W''(alpha).
/// Throws DegenerateError("coalescing-critical-points") when |W''| <= tol.
Complex residue_at_simple_zero(Complex numerator_value, Complex second_derivative_value, double tol = 1e-12);

/// Smallest pairwise distance relative to max(1, max|value|).
double relative_separation(std::span<const Complex> values);

/// Throws DegenerateError(kind) if two values are closer than rel_tol * max(1, max|value|).
void require_separated(std::span<const Complex> values, double rel_tol, const char* kind);

/// Permutation of `values` that best matches `reference` (greedy nearest pairing).
/// result[i] is the value assigned to reference[i].
std::vector<Complex> align_to_reference(std::span<const Complex> values, std::span<const Complex> reference);

/// Index map used by align_to_reference: result[i] = index into values for reference[i].
std::vector<std::size_t> alignment(std::span<const Complex> values, std::span<const Complex> reference);

/// Square root continued from `reference`: the root of z closest to reference.
Complex sqrt_near(Complex z, Complex reference);

using ScalarFunction = std::function<Complex(Complex)>;

/// Two-point central difference (f(t+h) - f(t-h)) / (2h) along `direction`.
Complex central_difference(const ScalarFunction& f, Complex t, double h);

/// k-th derivative of a function holomorphic near t, from `points` samples on the
/// circle |z - t| = radius (trapezoidal Cauchy integral). For points = 2 and order 1
/// this is the ordinary central difference; more points cancel higher-order error.
Complex contour_derivative(const ScalarFunction& f, Complex t, int order, double radius, int points = 16);

/// Vector-valued variant: differentiates every component of f at once.
std::vector<Complex> contour_derivative(const std::function<std::vector<Complex>(Complex)>& f, Complex t,
                                        int order, double radius, int points = 16);

/// The six permutations of {0,1,2} in lexicographic order.
const std::array<std::array<int, 3>, 6>& permutations3();

/// Sign (+1 / -1) of a permutation of {0,1,2}.
int permutation_sign(const std::array<int, 3>& perm);

} // namespace frobkit
