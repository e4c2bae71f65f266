#include "atomq/algebra.hpp"

#include "atomq/errors.hpp"
#include "atomq/format.hpp"

#include <algorithm>
#include <cmath>

namespace atomq {

namespace {

std::string complex_tag(Complex z) { return "(" + fmt::num(z.real()) + "," + fmt::num(z.imag()) + ")"; }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

} // namespace

BoundedFunction::BoundedFunction(std::string id, Eval eval, double bound)
    : BoundedFunction(std::move(id), std::move(eval), bound, std::monostate{}) {}

BoundedFunction::BoundedFunction(std::string id, Eval eval, double bound, FunctionShape shape)
    : id_(std::move(id)), eval_(std::move(eval)), bound_(bound), shape_(std::move(shape)) {
    if (!eval_) throw ValidationError("bounded function '" + id_ + "' has no callable");
    if (!(bound_ >= 0.0) || !std::isfinite(bound_)) {
        throw ValidationError("bounded function '" + id_ + "' needs a finite non-negative bound");
    }
}

BoundedFunction BoundedFunction::constant(Complex value) {
    return {"const" + complex_tag(value), [value](double) { return value; }, std::abs(value),
            shape::Constant{value}};
}

namespace {

BoundedFunction make_interval(double lo, double hi, Complex value);
BoundedFunction make_exponential(double k, Complex amplitude);
BoundedFunction make_point_set(std::map<double, Complex> values, std::string id);

} // namespace

BoundedFunction BoundedFunction::indicator(double lo, double hi) { return make_interval(lo, hi, 1.0); }

BoundedFunction BoundedFunction::exponential(double k) { return make_exponential(k, 1.0); }

BoundedFunction BoundedFunction::point_set(std::map<double, Complex> values, std::string id) {
    return make_point_set(std::move(values), std::move(id));
}

namespace {

BoundedFunction make_interval(double lo, double hi, Complex value) {
    if (!(lo <= hi)) throw ValidationError("indicator needs lo <= hi");
    if (value == Complex{}) return BoundedFunction::constant(0.0);
    std::string id = "1[" + fmt::num(lo) + "," + fmt::num(hi) + "]";
    if (value != Complex{1.0, 0.0}) id = complex_tag(value) + "*" + id;
    return {std::move(id), [lo, hi, value](double x) { return (lo <= x && x <= hi) ? value : Complex{}; },
            std::abs(value), shape::Interval{lo, hi, value}};
}

BoundedFunction make_exponential(double k, Complex amplitude) {
    if (k == 0.0) return BoundedFunction::constant(amplitude);
    std::string id = "exp(" + fmt::num(k) + ")";
    if (amplitude != Complex{1.0, 0.0}) id = complex_tag(amplitude) + "*" + id;
    return {std::move(id), [k, amplitude](double x) { return amplitude * std::polar(1.0, k * x); },
            std::abs(amplitude), shape::Exponential{k, amplitude}};
}

BoundedFunction make_point_set(std::map<double, Complex> values, std::string id) {
    std::erase_if(values, [](const auto& kv) { return kv.second == Complex{}; });
    double bound = 0.0;
    for (const auto& [x, v] : values) {
        if (!std::isfinite(x) || !std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw ValidationError("point-set function has non-finite entries");
        }
        bound = std::max(bound, std::abs(v));
    }
    if (id.empty()) {
        id = "pts{";
        for (const auto& [x, v] : values) id += fmt::num(x) + ":" + complex_tag(v) + ";";
        id += "}";
    }
    auto table = std::make_shared<const std::map<double, Complex>>(values);
    return {std::move(id),
            [table](double x) {
                auto it = table->find(x);
                return it == table->end() ? Complex{} : it->second;
            },
            bound, shape::PointSet{std::move(values)}};
}

} // namespace

BoundedFunction BoundedFunction::shifted(double h) const {
    if (h == 0.0) return *this;
    return std::visit(
        overloaded{
            [&](const shape::Constant&) { return *this; },
            [&](const shape::Interval& s) { return make_interval(s.lo - h, s.hi - h, s.value); },
            [&](const shape::Exponential& s) {
                return make_exponential(s.k, s.amplitude * std::polar(1.0, s.k * h));
            },
            [&](const auto&) {
                Eval base = eval_;
                return BoundedFunction("shift(" + id_ + "," + fmt::num(h) + ")",
                                       [base, h](double x) { return base(x + h); }, bound_);
            },
        },
        shape_);
}

BoundedFunction BoundedFunction::conjugated() const {
    return std::visit(
        overloaded{
            [&](const shape::Constant& s) { return constant(std::conj(s.value)); },
            [&](const shape::Interval& s) { return make_interval(s.lo, s.hi, std::conj(s.value)); },
            [&](const shape::Exponential& s) { return make_exponential(-s.k, std::conj(s.amplitude)); },
            [&](const shape::PointSet& s) {
                std::map<double, Complex> values;
                for (const auto& [x, v] : s.values) values.emplace(x, std::conj(v));
                return make_point_set(std::move(values), {});
            },
            [&](std::monostate) {
                Eval base = eval_;
                return BoundedFunction("conj(" + id_ + ")", [base](double x) { return std::conj(base(x)); },
                                       bound_);
            },
        },
        shape_);
}

BoundedFunction BoundedFunction::scaled(Complex alpha) const {
    if (alpha == Complex{1.0, 0.0}) return *this;
    return std::visit(
        overloaded{
            [&](const shape::Constant& s) { return constant(alpha * s.value); },
            [&](const shape::Interval& s) { return make_interval(s.lo, s.hi, alpha * s.value); },
            [&](const shape::Exponential& s) { return make_exponential(s.k, alpha * s.amplitude); },
            [&](const shape::PointSet& s) {
                std::map<double, Complex> values;
                for (const auto& [x, v] : s.values) values.emplace(x, alpha * v);
                return make_point_set(std::move(values), {});
            },
            [&](std::monostate) {
                Eval base = eval_;
                return BoundedFunction(complex_tag(alpha) + "*" + id_,
                                       [base, alpha](double x) { return alpha * base(x); },
                                       std::abs(alpha) * bound_);
            },
        },
        shape_);
}

BoundedFunction operator*(const BoundedFunction& f, const BoundedFunction& g) {
    if (const auto* c = std::get_if<shape::Constant>(&f.shape())) return g.scaled(c->value);
    if (const auto* c = std::get_if<shape::Constant>(&g.shape())) return f.scaled(c->value);

    const auto* ef = std::get_if<shape::Exponential>(&f.shape());
    const auto* eg = std::get_if<shape::Exponential>(&g.shape());
    if (ef && eg) return make_exponential(ef->k + eg->k, ef->amplitude * eg->amplitude);

    const auto* jf = std::get_if<shape::Interval>(&f.shape());
    const auto* jg = std::get_if<shape::Interval>(&g.shape());
    if (jf && jg) {
        const double lo = std::max(jf->lo, jg->lo);
        const double hi = std::min(jf->hi, jg->hi);
        if (lo > hi) return BoundedFunction::constant(0.0);
        return make_interval(lo, hi, jf->value * jg->value);
    }

    const auto* pf = std::get_if<shape::PointSet>(&f.shape());
    const auto* pg = std::get_if<shape::PointSet>(&g.shape());
    if (pf || pg) {
        const auto& points = pf ? pf->values : pg->values;
        const BoundedFunction& other = pf ? g : f;
        std::map<double, Complex> values;
        for (const auto& [x, v] : points) values.emplace(x, v * other(x));
        return make_point_set(std::move(values), {});
    }

    BoundedFunction::Eval a = f.eval_;
    BoundedFunction::Eval b = g.eval_;
    return BoundedFunction("(" + f.id() + ")*(" + g.id() + ")",
                           [a, b](double x) { return a(x) * b(x); }, f.bound() * g.bound());
}

bool BoundedFunction::respects_bound(std::span<const double> probes) const {
    const double slack = bound_ * 1e-12;
    return std::all_of(probes.begin(), probes.end(),
                       [&](double x) { return std::abs(eval_(x)) <= bound_ + slack; });
}

void AtomicMeasure::validate() const {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& [a, w] = atoms[i];
        if (!std::isfinite(a) || !std::isfinite(w.real()) || !std::isfinite(w.imag())) {
            throw ValidationError("atomic measure has non-finite entries");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (atoms[j].first == a) throw ValidationError("atomic measure locations must be distinct");
        }
    }
}

double AtomicMeasure::total_variation() const {
    double tv = 0.0;
    for (const auto& [a, w] : atoms) tv += std::abs(w);
    return tv;
}

AlgebraElement::AlgebraElement(std::vector<AlgebraTerm> terms) {
    for (AlgebraTerm& t : terms) {
        if (!std::isfinite(t.shift)) throw ValidationError("shift must be finite");
        if (t.shift == 0.0) t.shift = 0.0;
        auto it = std::find_if(terms_.begin(), terms_.end(), [&](const AlgebraTerm& s) {
            return s.shift == t.shift && s.f.id() == t.f.id();
        });
        if (it == terms_.end()) {
            terms_.push_back(std::move(t));
        } else {
            it->coef += t.coef;
        }
    }
    std::erase_if(terms_, [](const AlgebraTerm& t) { return t.coef == Complex{}; });
}

AlgebraElement AlgebraElement::identity() { return AlgebraElement({AlgebraTerm{}}); }

AlgebraElement AlgebraElement::shift(double h) {
    return AlgebraElement({AlgebraTerm{1.0, BoundedFunction::one(), h}});
}

AlgebraElement AlgebraElement::modulation(double a) {
    return AlgebraElement({AlgebraTerm{1.0, BoundedFunction::exponential(a), 0.0}});
}

AlgebraElement AlgebraElement::multiplication(BoundedFunction f) {
    return AlgebraElement({AlgebraTerm{1.0, std::move(f), 0.0}});
}

AlgebraElement AlgebraElement::convolution(const AtomicMeasure& m) {
    m.validate();
    std::vector<AlgebraTerm> terms;
    for (const auto& [a, w] : m.atoms) terms.push_back({w, BoundedFunction::one(), a});
    return AlgebraElement(std::move(terms));
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    std::vector<AlgebraTerm> terms(a.terms_.begin(), a.terms_.end());
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return AlgebraElement(std::move(terms));
}

AlgebraElement operator*(Complex alpha, const AlgebraElement& a) {
    std::vector<AlgebraTerm> terms(a.terms_.begin(), a.terms_.end());
    for (AlgebraTerm& t : terms) t.coef *= alpha;
    return AlgebraElement(std::move(terms));
}

AtomicVector apply_shift(double h, const AtomicVector& u) {
    std::vector<Atom> out(u.atoms().begin(), u.atoms().end());
    bool collided = false;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].p -= h;
        if (k > 0 && out[k].p == out[k - 1].p) collided = true;
    }
    if (!collided) return AtomicVector::from_sorted_unchecked(std::move(out));
    // Huge shifts can round neighbouring frequencies onto each other.
    std::vector<std::pair<double, Complex>> pairs;
    for (const Atom& a : out) pairs.emplace_back(a.p, a.c);
    return AtomicVector::make(pairs);
}

AtomicVector apply_mod(double a, const AtomicVector& u) {
    std::vector<Atom> out;
    out.reserve(u.size());
    for (const Atom& at : u.atoms()) out.push_back({at.p, std::polar(1.0, a * at.p) * at.c});
    return AtomicVector::from_sorted_unchecked(std::move(out));
}

AtomicVector apply_mult(const BoundedFunction& f, const AtomicVector& u) {
    std::vector<std::pair<double, Complex>> pairs;
    pairs.reserve(u.size());
    for (const Atom& at : u.atoms()) pairs.emplace_back(at.p, f(at.p) * at.c);
    return AtomicVector::make(pairs);
}

AtomicVector apply_element(const AlgebraElement& A, const AtomicVector& u) {
    std::vector<std::pair<double, Complex>> pairs;
    for (const AlgebraTerm& t : A.terms()) {
        const AtomicVector moved = apply_shift(t.shift, u);
        for (const Atom& at : moved.atoms()) {
            pairs.emplace_back(at.p, t.coef * t.f(at.p) * at.c);
        }
    }
    return AtomicVector::make(pairs);
}

double weyl_residual(double h, double a, const AtomicVector& u) {
    const double n = norm(u);
    if (n == 0.0) throw DomainError("Weyl residual needs a non-zero vector");
    const AtomicVector lhs = apply_shift(h, apply_mod(a, u));
    const AtomicVector rhs = scale(std::polar(1.0, a * h), apply_mod(a, apply_shift(h, u)));
    return norm(subtract(lhs, rhs)) / n;
}

AlgebraElement compose(const AlgebraElement& A, const AlgebraElement& B) {
    std::vector<AlgebraTerm> terms;
    terms.reserve(A.terms().size() * B.terms().size());
    for (const AlgebraTerm& s : A.terms()) {
        for (const AlgebraTerm& t : B.terms()) {
            terms.push_back({s.coef * t.coef, s.f * t.f.shifted(s.shift), s.shift + t.shift});
        }
    }
    return AlgebraElement(std::move(terms));
}

AlgebraElement adjoint(const AlgebraElement& A) {
    std::vector<AlgebraTerm> terms;
    terms.reserve(A.terms().size());
    for (const AlgebraTerm& t : A.terms()) {
        terms.push_back({std::conj(t.coef), t.f.conjugated().shifted(-t.shift), -t.shift});
    }
    return AlgebraElement(std::move(terms));
}

TrigPolynomial generator_apply(double h, const TrigPolynomial& u) {
    std::vector<std::pair<double, Complex>> out;
    out.reserve(u.size());
    for (const Atom& t : u.terms()) out.emplace_back(t.p, Complex{0.0, h * t.p} * t.c);
    return TrigPolynomial::make(out);
}

} // namespace atomq
