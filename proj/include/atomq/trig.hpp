#pragma once

// Trigonometric polynomials sum_k c_k exp(i p_k x) under the Cesaro (window
// mean) inner product, their identification with atomic vectors, and finite
// window quadrature that approximates the mean numerically.

#include "atomq/atoms.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace atomq {

/// Same representation and invariants as AtomicVector: a term (p, c) stands
/// for c * exp(i p x).
class TrigPolynomial {
public:
    TrigPolynomial() = default;
    static TrigPolynomial make(std::span<const std::pair<double, Complex>> terms);
    static TrigPolynomial make(std::initializer_list<std::pair<double, Complex>> terms);
    static TrigPolynomial exponential(double p) { return make({{p, Complex{1.0, 0.0}}}); }

    std::span<const Atom> terms() const noexcept { return coeffs_.atoms(); }
    std::size_t size() const noexcept { return coeffs_.size(); }

    Complex operator()(double x) const;

    friend bool operator==(const TrigPolynomial&, const TrigPolynomial&) = default;

private:
    friend TrigPolynomial inverse_fourier(const AtomicVector&);
    friend AtomicVector fourier(const TrigPolynomial&);
    explicit TrigPolynomial(AtomicVector coeffs) : coeffs_(std::move(coeffs)) {}

    AtomicVector coeffs_;
};

struct CesaroQuadratureConfig {
    double window = 1.0e3;  // X: the mean is taken over [-X, X]
    std::size_t steps = 0;  // trapezoid nodes; 0 selects default_steps()

    static constexpr std::size_t kMinDefaultSteps = 65;

    /// ceil(40 X max_gap / 2pi) + 1, at least kMinDefaultSteps: about 20
    /// nodes per oscillation period.
    static std::size_t default_steps(double window, double max_gap);
    void validate() const;
};

/// Exact Cesaro inner product: exponentials with distinct frequencies are
/// orthonormal, so only shared frequencies contribute.
Complex cesaro_inner_analytic(const TrigPolynomial& u, const TrigPolynomial& v);

/// (1/2X) * integral over [-X, X] of conj(u(t)) v(t), composite trapezoid.
Complex cesaro_inner_numeric(const TrigPolynomial& u, const TrigPolynomial& v,
                             CesaroQuadratureConfig cfg);

AtomicVector fourier(const TrigPolynomial& u);
TrigPolynomial inverse_fourier(const AtomicVector& u);

/// Finite-window value of the squared gap ||M_{t+s} f_p - M_t f_p||^2, i.e.
/// the window mean of |exp(i s x) - 1|^2. Does not depend on p or t.
double modulation_gap_numeric(double s, double p, CesaroQuadratureConfig cfg);

/// Argument shift on trig polynomials: (S_h u)(x) = u(x + h), so
/// exp(i p x) picks up the eigenvalue exp(i p h).
TrigPolynomial shift_trig(double h, const TrigPolynomial& u);

TrigPolynomial add(const TrigPolynomial& u, const TrigPolynomial& v);
TrigPolynomial scale(Complex alpha, const TrigPolynomial& u);

/// Norm induced by the Cesaro inner product.
double cesaro_norm(const TrigPolynomial& u);

} // namespace atomq
