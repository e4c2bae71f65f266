#include "atomq/atoms.hpp"

#include "atomq/errors.hpp"
#include "atomq/json_io.hpp"

#include <algorithm>
#include <cmath>

namespace atomq {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// -0.0 and +0.0 compare equal but print differently; keep one representative.
double canonical(double p) { return p == 0.0 ? 0.0 : p; }

std::vector<Atom> merge_sorted(std::vector<Atom> atoms, std::optional<double> tolerance) {
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.p < b.p; });
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const Atom& a : atoms) {
        const bool same = !out.empty() &&
                          (tolerance ? a.p - out.back().p <= *tolerance : a.p == out.back().p);
        if (same) {
            out.back().c += a.c;
        } else {
            out.push_back(a);
        }
    }
    std::erase_if(out, [](const Atom& a) { return a.c == Complex{}; });
    return out;
}

} // namespace

AtomicVector AtomicVector::make(std::span<const std::pair<double, Complex>> pairs,
                                std::optional<double> merge_tolerance) {
    if (merge_tolerance && !(*merge_tolerance >= 0.0 && std::isfinite(*merge_tolerance))) {
        throw ValidationError("merge tolerance must be finite and non-negative");
    }
    std::vector<Atom> atoms;
    atoms.reserve(pairs.size());
    for (const auto& [p, c] : pairs) {
        if (!std::isfinite(p)) throw ValidationError("atom frequency is not finite");
        if (!finite(c)) throw ValidationError("atom amplitude is not finite");
        atoms.push_back({canonical(p), c});
    }
    return AtomicVector(merge_sorted(std::move(atoms), merge_tolerance));
}

AtomicVector AtomicVector::make(std::initializer_list<std::pair<double, Complex>> pairs) {
    return make(std::span<const std::pair<double, Complex>>(pairs.begin(), pairs.size()));
}

AtomicVector AtomicVector::from_sorted_unchecked(std::vector<Atom> atoms) {
    for (Atom& a : atoms) a.p = canonical(a.p);
    return AtomicVector(std::move(atoms));
}

Complex AtomicVector::at(double p) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), p,
                               [](const Atom& a, double x) { return a.p < x; });
    return (it != atoms_.end() && it->p == p) ? it->c : Complex{};
}

Complex inner(const AtomicVector& u, const AtomicVector& v) {
    Complex sum{};
    auto a = u.atoms().begin(), ae = u.atoms().end();
    auto b = v.atoms().begin(), be = v.atoms().end();
    while (a != ae && b != be) {
        if (a->p < b->p) {
            ++a;
        } else if (b->p < a->p) {
            ++b;
        } else {
            sum += std::conj(a->c) * b->c;
            ++a;
            ++b;
        }
    }
    return sum;
}

double norm_squared(const AtomicVector& u) {
    double s = 0.0;
    for (const Atom& a : u.atoms()) s += std::norm(a.c);
    return s;
}

double norm(const AtomicVector& u) { return std::sqrt(norm_squared(u)); }

AtomicVector add(const AtomicVector& u, const AtomicVector& v) {
    std::vector<Atom> out;
    out.reserve(u.size() + v.size());
    auto a = u.atoms().begin(), ae = u.atoms().end();
    auto b = v.atoms().begin(), be = v.atoms().end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->p < b->p)) {
            out.push_back(*a++);
        } else if (a == ae || b->p < a->p) {
            out.push_back(*b++);
        } else {
            const Complex c = a->c + b->c;
            if (c != Complex{}) out.push_back({a->p, c});
            ++a;
            ++b;
        }
    }
    return AtomicVector::from_sorted_unchecked(std::move(out));
}

AtomicVector scale(Complex alpha, const AtomicVector& u) {
    if (alpha == Complex{}) return {};
    std::vector<Atom> out;
    out.reserve(u.size());
    for (const Atom& a : u.atoms()) {
        const Complex c = alpha * a.c;
        if (c != Complex{}) out.push_back({a.p, c});
    }
    return AtomicVector::from_sorted_unchecked(std::move(out));
}

AtomicVector subtract(const AtomicVector& u, const AtomicVector& v) {
    return add(u, scale(-1.0, v));
}

std::string serialize(const AtomicVector& u) { return io::to_json(u).dump(); }

AtomicVector deserialize(std::string_view text) {
    return io::vector_from_json(io::parse(text));
}

} // namespace atomq
