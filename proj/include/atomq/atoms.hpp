#pragma once

// Finite-support vectors in the space of square-summable functions on the
// real line with counting measure. Each basis vector is the indicator of a
// single point p ("atom"), and distinct atoms are orthonormal.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace atomq {

using Complex = std::complex<double>;

struct Atom {
    double p = 0.0;
    Complex c{};

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Immutable sparse vector, atoms sorted by strictly increasing frequency.
///
/// Frequencies are compared with exact floating-point equality. Shifting the
/// same atom set twice by the same amount yields bit-identical frequencies, so
/// overlaps between shifted copies are detected exactly, while independently
/// drawn continuous shifts almost never collide.
class AtomicVector {
public:
    AtomicVector() = default;

    /// Builds a vector from arbitrary (frequency, amplitude) pairs. Duplicate
    /// frequencies are merged by adding amplitudes and zero amplitudes are
    /// dropped. With `merge_tolerance` set, frequencies closer than the
    /// tolerance to the previous kept frequency are merged into it; this is
    /// only meant for ingesting user data.
    static AtomicVector make(std::span<const std::pair<double, Complex>> pairs,
                             std::optional<double> merge_tolerance = std::nullopt);
    static AtomicVector make(std::initializer_list<std::pair<double, Complex>> pairs);

    static AtomicVector unit(double p) { return make({{p, Complex{1.0, 0.0}}}); }

    /// Wraps atoms that already satisfy the invariants (sorted, distinct,
    /// non-zero). Used by operators that preserve order; unchecked.
    static AtomicVector from_sorted_unchecked(std::vector<Atom> atoms);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }

    /// Amplitude at frequency p (zero when p is not in the support).
    Complex at(double p) const;

    friend bool operator==(const AtomicVector&, const AtomicVector&) = default;

private:
    explicit AtomicVector(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

    std::vector<Atom> atoms_;
};

/// Conjugate-linear in the first argument.
Complex inner(const AtomicVector& u, const AtomicVector& v);
double norm(const AtomicVector& u);
double norm_squared(const AtomicVector& u);
AtomicVector add(const AtomicVector& u, const AtomicVector& v);
AtomicVector subtract(const AtomicVector& u, const AtomicVector& v);
AtomicVector scale(Complex alpha, const AtomicVector& u);

std::string serialize(const AtomicVector& u);
AtomicVector deserialize(std::string_view text);

} // namespace atomq
