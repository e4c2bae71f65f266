#pragma once

// Operators on atomic vectors: argument shifts S_h u(x) = u(x + h),
// modulations M_a u(x) = exp(i a x) u(x), multiplication by bounded
// functions, and the algebra of finite sums  sum_j c_j M_{f_j} S_{a_j}.

#include "atomq/atoms.hpp"
#include "atomq/trig.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace atomq {

// Shapes with known structure. Averaged-state evaluation uses them to pick
// closed forms; anything else is evaluated through the callable.
namespace shape {
struct Constant {
    Complex value;
};
/// value * 1_{[lo, hi]}(x)
struct Interval {
    double lo;
    double hi;
    Complex value{1.0, 0.0};
};
/// amplitude * exp(i k x)
struct Exponential {
    double k;
    Complex amplitude{1.0, 0.0};
};
/// Non-zero only on a finite set of points (exact frequency match).
struct PointSet {
    std::map<double, Complex> values;
};
} // namespace shape

using FunctionShape =
    std::variant<std::monostate, shape::Constant, shape::Interval, shape::Exponential, shape::PointSet>;

/// Bounded complex function on the reals with a tag. The tag identifies the
/// function for normal-form merging; two functions with the same tag are
/// assumed to be the same function.
class BoundedFunction {
public:
    using Eval = std::function<Complex(double)>;

    BoundedFunction(std::string id, Eval eval, double bound);
    BoundedFunction(std::string id, Eval eval, double bound, FunctionShape shape);

    static BoundedFunction constant(Complex value);
    static BoundedFunction one() { return constant(1.0); }
    static BoundedFunction indicator(double lo, double hi);
    static BoundedFunction exponential(double k);
    static BoundedFunction point_set(std::map<double, Complex> values, std::string id = {});

    const std::string& id() const noexcept { return id_; }
    double bound() const noexcept { return bound_; }
    const FunctionShape& shape() const noexcept { return shape_; }
    Complex operator()(double x) const { return eval_(x); }

    /// x -> f(x + h)
    BoundedFunction shifted(double h) const;
    BoundedFunction conjugated() const;
    BoundedFunction scaled(Complex alpha) const;
    friend BoundedFunction operator*(const BoundedFunction& f, const BoundedFunction& g);

    /// Checks |f(x)| <= bound on the given probe points.
    bool respects_bound(std::span<const double> probes) const;

private:
    std::string id_;
    Eval eval_;
    double bound_;
    FunctionShape shape_;
};

/// Finite sum of weighted point masses: the operator  sum_j w_j S_{a_j}.
struct AtomicMeasure {
    std::vector<std::pair<double, Complex>> atoms;  // (location, weight)

    void validate() const;
    double total_variation() const;
};

/// One normal-form term  coef * M_f * S_shift.
struct AlgebraTerm {
    Complex coef{1.0, 0.0};
    BoundedFunction f = BoundedFunction::one();
    double shift = 0.0;
};

class AlgebraElement {
public:
    AlgebraElement() = default;
    /// Merges terms with equal (function id, shift) and drops zero coefficients.
    explicit AlgebraElement(std::vector<AlgebraTerm> terms);

    static AlgebraElement identity();
    static AlgebraElement shift(double h);
    static AlgebraElement modulation(double a);
    static AlgebraElement multiplication(BoundedFunction f);
    static AlgebraElement convolution(const AtomicMeasure& m);

    std::span<const AlgebraTerm> terms() const noexcept { return terms_; }

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator*(Complex alpha, const AlgebraElement& a);

private:
    std::vector<AlgebraTerm> terms_;
};

/// Each atom (p, c) moves to (p - h, c).
AtomicVector apply_shift(double h, const AtomicVector& u);
/// Each atom (p, c) becomes (p, exp(i a p) c).
AtomicVector apply_mod(double a, const AtomicVector& u);
AtomicVector apply_mult(const BoundedFunction& f, const AtomicVector& u);
AtomicVector apply_element(const AlgebraElement& A, const AtomicVector& u);

/// ||S_h M_a u - exp(i a h) M_a S_h u|| / ||u||
double weyl_residual(double h, double a, const AtomicVector& u);

/// Product A*B in normal form, using  S_h M_f = M_{f(. + h)} S_h.
AlgebraElement compose(const AlgebraElement& A, const AlgebraElement& B);
/// (c M_f S_a)^* = conj(c) S_{-a} M_{conj f} = conj(c) M_{conj f(. - a)} S_{-a}
AlgebraElement adjoint(const AlgebraElement& A);

/// Generator of the shift group on trig polynomials: (p, c) -> (p, i h p c).
TrigPolynomial generator_apply(double h, const TrigPolynomial& u);

} // namespace atomq
