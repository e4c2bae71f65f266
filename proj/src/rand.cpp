#include "atomq/rand.hpp"

#include "atomq/errors.hpp"
#include "atomq/format.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace atomq {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + " must be finite");
}

// sin(z)/z without cancellation near 0.
double sinc(double z) {
    if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// P(lo <= Z <= hi) for standard normal Z, using the tail that avoids cancellation.
double normal_interval(double lo, double hi) {
    if (lo >= 0.0) return 0.5 * (std::erfc(lo / std::numbers::sqrt2) - std::erfc(hi / std::numbers::sqrt2));
    if (hi <= 0.0) return 0.5 * (std::erfc(-hi / std::numbers::sqrt2) - std::erfc(-lo / std::numbers::sqrt2));
    return 1.0 - standard_normal_cdf(lo) - (1.0 - standard_normal_cdf(hi));
}

constexpr unsigned kMaxDepth = 15;
constexpr double kQuadTolerance = 1e-13;

template <class F>
Complex integrate(F&& f, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    const double re = gauss_kronrod<double, 61>::integrate(
        [&](double x) { return f(x).real(); }, a, b, kMaxDepth, kQuadTolerance);
    const double im = gauss_kronrod<double, 61>::integrate(
        [&](double x) { return f(x).imag(); }, a, b, kMaxDepth, kQuadTolerance);
    return {re, im};
}

} // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(finalize(seed ^ finalize(stream + 0x632BE59BD9B4E019ULL))) {}

SeededRng SeededRng::split(std::uint64_t index) const {
    return SeededRng(seed_, finalize(stream_ * kGolden + index + 1));
}

std::uint64_t SeededRng::next_u64() { return finalize(key_ + (++counter_) * kGolden); }

double SeededRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double SeededRng::uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double SeededRng::normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
}

Distribution Distribution::gaussian(double variance) {
    require_finite(variance, "Gaussian variance");
    if (!(variance > 0.0)) throw ValidationError("Gaussian variance must be positive");
    return Distribution(law::Gaussian{variance});
}

Distribution Distribution::cauchy(double scale) {
    require_finite(scale, "Cauchy scale");
    if (!(scale > 0.0)) throw ValidationError("Cauchy scale must be positive");
    return Distribution(law::Cauchy{scale});
}

Distribution Distribution::rademacher() { return Distribution(law::Rademacher{}); }

Distribution Distribution::uniform(double a, double b) {
    require_finite(a, "uniform lower end");
    require_finite(b, "uniform upper end");
    if (!(a < b)) throw ValidationError("uniform law needs a < b");
    return Distribution(law::Uniform{a, b});
}

Distribution Distribution::point_mass(double a) {
    require_finite(a, "point mass location");
    return Distribution(law::PointMass{a});
}

Distribution Distribution::mixture(std::vector<std::pair<double, Distribution>> components) {
    if (components.empty()) throw ValidationError("mixture needs at least one component");
    double total = 0.0;
    law::Mixture m;
    for (auto& [w, d] : components) {
        require_finite(w, "mixture weight");
        if (w < 0.0) throw ValidationError("mixture weights must be non-negative");
        total += w;
        m.components.push_back({w, std::make_shared<const Distribution>(std::move(d))});
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("mixture weights must sum to 1");
    return Distribution(std::move(m));
}

std::string Distribution::name() const {
    return std::visit(
        overloaded{
            [](const law::Gaussian& g) { return "gaussian(D=" + fmt::num(g.variance) + ")"; },
            [](const law::Cauchy& c) { return "cauchy(gamma=" + fmt::num(c.scale) + ")"; },
            [](const law::Rademacher&) { return std::string("rademacher"); },
            [](const law::Uniform& u) { return "uniform(" + fmt::num(u.a) + "," + fmt::num(u.b) + ")"; },
            [](const law::PointMass& p) { return "point(" + fmt::num(p.a) + ")"; },
            [](const law::Mixture& m) {
                std::string s = "mixture[";
                for (const auto& c : m.components) s += fmt::num(c.weight) + ":" + c.law->name() + ";";
                return s + "]";
            },
        },
        kind_);
}

Complex Distribution::chi(double x) const {
    return std::visit(
        overloaded{
            [x](const law::Gaussian& g) { return Complex{std::exp(-0.5 * g.variance * x * x), 0.0}; },
            [x](const law::Cauchy& c) { return Complex{std::exp(-c.scale * std::abs(x)), 0.0}; },
            [x](const law::Rademacher&) { return Complex{std::cos(x), 0.0}; },
            [x](const law::Uniform& u) {
                const double half_width = 0.5 * (u.b - u.a);
                return std::polar(sinc(x * half_width), x * 0.5 * (u.a + u.b));
            },
            [x](const law::PointMass& p) { return std::polar(1.0, p.a * x); },
            [x](const law::Mixture& m) {
                Complex s{};
                for (const auto& c : m.components) s += c.weight * c.law->chi(x);
                return s;
            },
        },
        kind_);
}

Complex Distribution::chi_power(double x, double n) const {
    if (const auto* g = std::get_if<law::Gaussian>(&kind_)) return {std::exp(-0.5 * n * g->variance * x * x), 0.0};
    if (const auto* c = std::get_if<law::Cauchy>(&kind_)) return {std::exp(-n * c->scale * std::abs(x)), 0.0};
    if (const auto* p = std::get_if<law::PointMass>(&kind_)) return std::polar(1.0, n * p->a * x);
    const Complex z = chi(x);
    if (z == Complex{}) return {};
    if (z.imag() == 0.0 && z.real() > 0.0) return {std::exp(n * std::log(z.real())), 0.0};
    return std::exp(n * std::log(z));
}

bool Distribution::has_discrete_part() const { return discrete_mass() > 0.0; }

std::optional<double> Distribution::mean() const {
    return std::visit(
        overloaded{
            [](const law::Gaussian&) -> std::optional<double> { return 0.0; },
            [](const law::Cauchy&) -> std::optional<double> { return std::nullopt; },
            [](const law::Rademacher&) -> std::optional<double> { return 0.0; },
            [](const law::Uniform& u) -> std::optional<double> { return 0.5 * (u.a + u.b); },
            [](const law::PointMass& p) -> std::optional<double> { return p.a; },
            [](const law::Mixture& m) -> std::optional<double> {
                double s = 0.0;
                for (const auto& c : m.components) {
                    if (c.weight == 0.0) continue;
                    auto mu = c.law->mean();
                    if (!mu) return std::nullopt;
                    s += c.weight * *mu;
                }
                return s;
            },
        },
        kind_);
}

std::optional<double> Distribution::variance() const {
    return std::visit(
        overloaded{
            [](const law::Gaussian& g) -> std::optional<double> { return g.variance; },
            [](const law::Cauchy&) -> std::optional<double> { return std::nullopt; },
            [](const law::Rademacher&) -> std::optional<double> { return 1.0; },
            [](const law::Uniform& u) -> std::optional<double> { return (u.b - u.a) * (u.b - u.a) / 12.0; },
            [](const law::PointMass&) -> std::optional<double> { return 0.0; },
            [this](const law::Mixture& m) -> std::optional<double> {
                double second = 0.0;
                for (const auto& c : m.components) {
                    if (c.weight == 0.0) continue;
                    auto mu = c.law->mean();
                    auto var = c.law->variance();
                    if (!mu || !var) return std::nullopt;
                    second += c.weight * (*var + *mu * *mu);
                }
                const double mu = *mean();
                return second - mu * mu;
            },
        },
        kind_);
}

std::vector<std::pair<double, double>> Distribution::discrete_atoms() const {
    std::vector<std::pair<double, double>> atoms;
    std::visit(overloaded{
                   [&](const law::Rademacher&) { atoms = {{-1.0, 0.5}, {1.0, 0.5}}; },
                   [&](const law::PointMass& p) { atoms = {{p.a, 1.0}}; },
                   [&](const law::Mixture& m) {
                       for (const auto& c : m.components) {
                           if (c.weight == 0.0) continue;
                           for (auto [x, w] : c.law->discrete_atoms()) atoms.emplace_back(x, c.weight * w);
                       }
                   },
                   [](const auto&) {},
               },
               kind_);
    // Merge repeated locations so each atom appears once.
    std::stable_sort(atoms.begin(), atoms.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& [x, w] : atoms) {
        if (!merged.empty() && merged.back().first == x) {
            merged.back().second += w;
        } else {
            merged.emplace_back(x, w);
        }
    }
    return merged;
}

double Distribution::discrete_mass() const {
    double m = 0.0;
    for (const auto& [x, w] : discrete_atoms()) m += w;
    return m;
}

namespace {

void collect_continuous(const Distribution& d, double weight, std::vector<std::pair<double, Distribution>>& out) {
    std::visit(overloaded{
                   [&](const law::Mixture& m) {
                       for (const auto& c : m.components) {
                           if (c.weight > 0.0) collect_continuous(*c.law, weight * c.weight, out);
                       }
                   },
                   [&](const law::Rademacher&) {},
                   [&](const law::PointMass&) {},
                   [&](const auto&) { out.emplace_back(weight, d); },
               },
               d.kind());
}

} // namespace

std::optional<Distribution> Distribution::continuous_part() const {
    std::vector<std::pair<double, Distribution>> parts;
    collect_continuous(*this, 1.0, parts);
    if (parts.empty()) return std::nullopt;
    if (parts.size() == 1 && parts.front().first == 1.0) return parts.front().second;
    double total = 0.0;
    for (const auto& [w, d] : parts) total += w;
    for (auto& [w, d] : parts) w /= total;
    return mixture(std::move(parts));
}

std::optional<Distribution> Distribution::discrete_part() const {
    const auto atoms = discrete_atoms();
    if (atoms.empty()) return std::nullopt;
    if (atoms.size() == 1) return point_mass(atoms.front().first);
    double total = 0.0;
    for (const auto& [x, w] : atoms) total += w;
    std::vector<std::pair<double, Distribution>> parts;
    for (const auto& [x, w] : atoms) parts.emplace_back(w / total, point_mass(x));
    return mixture(std::move(parts));
}

double Distribution::interval_probability(double lo, double hi) const {
    if (lo > hi) return 0.0;
    return std::visit(
        overloaded{
            [&](const law::Gaussian& g) {
                const double s = std::sqrt(g.variance);
                return normal_interval(lo / s, hi / s);
            },
            [&](const law::Cauchy& c) {
                return (std::atan(hi / c.scale) - std::atan(lo / c.scale)) / std::numbers::pi;
            },
            [&](const law::Rademacher&) {
                return 0.5 * static_cast<double>((lo <= -1.0 && -1.0 <= hi) + (lo <= 1.0 && 1.0 <= hi));
            },
            [&](const law::Uniform& u) {
                const double a = std::max(lo, u.a);
                const double b = std::min(hi, u.b);
                return b > a ? (b - a) / (u.b - u.a) : 0.0;
            },
            [&](const law::PointMass& p) { return (lo <= p.a && p.a <= hi) ? 1.0 : 0.0; },
            [&](const law::Mixture& m) {
                double s = 0.0;
                for (const auto& c : m.components) s += c.weight * c.law->interval_probability(lo, hi);
                return s;
            },
        },
        kind_);
}

Complex Distribution::expect(const std::function<Complex(double)>& h) const {
    return std::visit(
        overloaded{
            [&](const law::Gaussian& g) {
                const double s = std::sqrt(g.variance);
                const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
                // Standardised: E h(s Z), Z ~ N(0,1), truncated at 8 standard deviations.
                return integrate([&](double z) { return h(s * z) * (norm * std::exp(-0.5 * z * z)); }, -8.0, 8.0);
            },
            [&](const law::Cauchy& c) {
                // xi = scale * tan(theta), theta uniform on (-pi/2, pi/2).
                const double half = 0.5 * std::numbers::pi;
                return integrate([&](double th) { return h(c.scale * std::tan(th)); }, -half, half) /
                       std::numbers::pi;
            },
            [&](const law::Rademacher&) { return 0.5 * (h(-1.0) + h(1.0)); },
            [&](const law::Uniform& u) { return integrate(h, u.a, u.b) / (u.b - u.a); },
            [&](const law::PointMass& p) { return h(p.a); },
            [&](const law::Mixture& m) {
                Complex s{};
                for (const auto& c : m.components) {
                    if (c.weight > 0.0) s += c.weight * c.law->expect(h);
                }
                return s;
            },
        },
        kind_);
}

double Distribution::sample(SeededRng& rng) const {
    return std::visit(
        overloaded{
            [&](const law::Gaussian& g) { return std::sqrt(g.variance) * rng.normal(); },
            [&](const law::Cauchy& c) { return c.scale * std::tan(std::numbers::pi * (rng.uniform_open() - 0.5)); },
            [&](const law::Rademacher&) { return (rng.next_u64() >> 63) ? 1.0 : -1.0; },
            [&](const law::Uniform& u) { return u.a + (u.b - u.a) * rng.uniform(); },
            [&](const law::PointMass& p) { return p.a; },
            [&](const law::Mixture& m) {
                const double r = rng.uniform();
                double acc = 0.0;
                for (const auto& c : m.components) {
                    acc += c.weight;
                    if (r < acc) return c.law->sample(rng);
                }
                // r landed in the rounding gap at the top; use the last weighted component.
                auto last = std::find_if(m.components.rbegin(), m.components.rend(),
                                         [](const law::Component& c) { return c.weight > 0.0; });
                return last->law->sample(rng);
            },
        },
        kind_);
}

ConvolutionFamily::ConvolutionFamily(Kind kind, double rate) : kind_(kind), rate_(rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ValidationError("family rate must be finite and positive");
}

Distribution ConvolutionFamily::at(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("family parameter t must be finite and >= 0");
    if (t == 0.0) return Distribution::point_mass(0.0);
    return kind_ == Kind::Gaussian ? Distribution::gaussian(rate_ * t) : Distribution::cauchy(rate_ * t);
}

namespace {

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time t must be finite and >= 0");
}

template <class F>
AtomicVector map_amplitudes(const AtomicVector& u, F&& factor) {
    std::vector<Atom> out;
    out.reserve(u.size());
    for (const Atom& a : u.atoms()) {
        const Complex c = factor(a.p) * a.c;
        if (c != Complex{}) out.push_back({a.p, c});
    }
    return AtomicVector::from_sorted_unchecked(std::move(out));
}

} // namespace

AtomicVector averaged_mod_apply(const Distribution& d, double t, const AtomicVector& u) {
    require_time(t);
    const double r = std::sqrt(t);
    return map_amplitudes(u, [&](double p) { return d.chi(r * p); });
}

AtomicVector random_walk_apply(const Distribution& d, double t, std::size_t n, SeededRng& rng,
                               const AtomicVector& u) {
    require_time(t);
    if (n == 0) throw DomainError("random walk needs n >= 1");
    const double step = std::sqrt(t / static_cast<double>(n));
    std::vector<Atom> atoms(u.atoms().begin(), u.atoms().end());
    for (std::size_t k = 0; k < n; ++k) {
        const double a = step * d.sample(rng);
        for (Atom& at : atoms) at.c = std::polar(1.0, a * at.p) * at.c;
    }
    return AtomicVector::from_sorted_unchecked(std::move(atoms));
}

AtomicVector expected_walk_apply(const Distribution& d, double t, std::size_t n, const AtomicVector& u) {
    require_time(t);
    if (n == 0) throw DomainError("expected walk needs n >= 1");
    const double step = std::sqrt(t / static_cast<double>(n));
    const double power = static_cast<double>(n);
    return map_amplitudes(u, [&](double p) { return d.chi_power(step * p, power); });
}

AtomicVector chernoff_limit_apply(double variance, double t, const AtomicVector& u) {
    if (!(variance > 0.0)) throw DomainError("Chernoff limit needs a positive variance");
    require_time(t);
    return map_amplitudes(u, [&](double p) { return Complex{std::exp(-0.5 * t * variance * p * p), 0.0}; });
}

double chernoff_error(const Distribution& d, double t, std::size_t n, std::span<const double> probes) {
    require_time(t);
    if (n == 0) throw DomainError("Chernoff error needs n >= 1");
    const auto var = d.variance();
    const auto mu = d.mean();
    if (!var || !mu) throw DomainError("Chernoff convergence needs a law with finite variance (got " + d.name() + ")");
    if (std::abs(*mu) > 1e-12) throw DomainError("Chernoff convergence needs a centred law (got " + d.name() + ")");
    if (!(*var > 0.0)) throw DomainError("Chernoff convergence needs a positive variance (got " + d.name() + ")");
    const double step = std::sqrt(t / static_cast<double>(n));
    double worst = 0.0;
    for (double x : probes) {
        const Complex approx = d.chi_power(step * x, static_cast<double>(n));
        const double limit = std::exp(-0.5 * t * *var * x * x);
        worst = std::max(worst, std::abs(approx - limit));
    }
    return worst;
}

MeanEstimate ComplexAccumulator::estimate() const {
    MeanEstimate e;
    e.samples = n_;
    if (n_ == 0) return e;
    const double n = static_cast<double>(n_);
    e.mean = sum_ / n;
    if (n_ > 1) {
        const double var = std::max(0.0, (sum_sq_ - n * std::norm(e.mean)) / (n - 1.0));
        e.std_error = std::sqrt(var / n);
    }
    return e;
}

} // namespace atomq
