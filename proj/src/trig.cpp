#include "atomq/trig.hpp"

#include "atomq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace atomq {

TrigPolynomial TrigPolynomial::make(std::span<const std::pair<double, Complex>> terms) {
    return TrigPolynomial(AtomicVector::make(terms));
}

TrigPolynomial TrigPolynomial::make(std::initializer_list<std::pair<double, Complex>> terms) {
    return TrigPolynomial(AtomicVector::make(terms));
}

Complex TrigPolynomial::operator()(double x) const {
    Complex sum{};
    for (const Atom& t : terms()) sum += t.c * std::polar(1.0, t.p * x);
    return sum;
}

std::size_t CesaroQuadratureConfig::default_steps(double window, double max_gap) {
    const double wanted = std::ceil(40.0 * window * max_gap / (2.0 * std::numbers::pi));
    // Windows shorter than one period still get enough nodes to resolve the curvature.
    return std::max<std::size_t>(kMinDefaultSteps, static_cast<std::size_t>(wanted) + 1);
}

void CesaroQuadratureConfig::validate() const {
    if (!(window > 0.0) || !std::isfinite(window)) {
        throw ValidationError("Cesaro window must be finite and positive");
    }
    if (steps == 1) throw ValidationError("Cesaro quadrature needs at least 2 nodes");
}

Complex cesaro_inner_analytic(const TrigPolynomial& u, const TrigPolynomial& v) {
    return inner(fourier(u), fourier(v));
}

namespace {

// Largest |p - q| over all frequency pairs that can appear in the integrand.
double max_gap(std::span<const Atom> a, std::span<const Atom> b) {
    if (a.empty() || b.empty()) return 0.0;
    const double lo = std::min(a.front().p, b.front().p);
    const double hi = std::max(a.back().p, b.back().p);
    return hi - lo;
}

template <class F>
Complex trapezoid_mean(F&& integrand, double window, std::size_t nodes) {
    const double h = 2.0 * window / static_cast<double>(nodes - 1);
    Complex sum = 0.5 * (integrand(-window) + integrand(window));
    for (std::size_t k = 1; k + 1 < nodes; ++k) {
        sum += integrand(-window + static_cast<double>(k) * h);
    }
    return sum * h / (2.0 * window);
}

} // namespace

Complex cesaro_inner_numeric(const TrigPolynomial& u, const TrigPolynomial& v,
                             CesaroQuadratureConfig cfg) {
    cfg.validate();
    const std::size_t nodes =
        cfg.steps ? cfg.steps
                  : CesaroQuadratureConfig::default_steps(cfg.window, max_gap(u.terms(), v.terms()));
    return trapezoid_mean([&](double t) { return std::conj(u(t)) * v(t); }, cfg.window, nodes);
}

AtomicVector fourier(const TrigPolynomial& u) { return u.coeffs_; }

TrigPolynomial inverse_fourier(const AtomicVector& u) { return TrigPolynomial(u); }

double modulation_gap_numeric(double s, double /*p*/, CesaroQuadratureConfig cfg) {
    if (s == 0.0) throw DomainError("modulation gap needs s != 0");
    cfg.validate();
    const std::size_t nodes =
        cfg.steps ? cfg.steps : CesaroQuadratureConfig::default_steps(cfg.window, std::abs(s));
    const Complex mean = trapezoid_mean(
        [s](double x) { return Complex{std::norm(std::polar(1.0, s * x) - 1.0), 0.0}; },
        cfg.window, nodes);
    return mean.real();
}

TrigPolynomial shift_trig(double h, const TrigPolynomial& u) {
    std::vector<std::pair<double, Complex>> out;
    out.reserve(u.size());
    for (const Atom& t : u.terms()) out.emplace_back(t.p, t.c * std::polar(1.0, t.p * h));
    return TrigPolynomial::make(out);
}

TrigPolynomial add(const TrigPolynomial& u, const TrigPolynomial& v) {
    return inverse_fourier(add(fourier(u), fourier(v)));
}

TrigPolynomial scale(Complex alpha, const TrigPolynomial& u) {
    return inverse_fourier(scale(alpha, fourier(u)));
}

double cesaro_norm(const TrigPolynomial& u) { return norm(fourier(u)); }

} // namespace atomq
