#pragma once

// Probability laws given by their characteristic functions, a reproducible
// splittable RNG, random modulation walks U_n(t) and their averages.

#include "atomq/atoms.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace atomq {

/// Counter-based generator. Draw k of stream s under seed S is
/// splitmix64_finalize(key(S, s) + (k + 1) * 0x9E3779B97F4A7C15), with
/// key(S, s) = splitmix64_finalize(S ^ splitmix64_finalize(s + 0x632BE59BD9B4E019)).
/// Streams are addressed by index, so a Monte Carlo run partitioned into
/// chunks gives the same numbers however the chunks are scheduled.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    /// Independent generator for sub-stream `index` of this stream.
    SeededRng split(std::uint64_t index) const;

    std::uint64_t next_u64();
    /// Uniform on [0, 1), 53 random bits.
    double uniform();
    /// Uniform on (0, 1).
    double uniform_open();
    /// Standard normal via Box-Muller (one output per two uniforms).
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

class Distribution;

namespace law {
struct Gaussian {
    double variance;
};
struct Cauchy {
    double scale;
};
struct Rademacher {};
struct Uniform {
    double a;
    double b;
};
struct PointMass {
    double a;
};
struct Component {
    double weight;
    std::shared_ptr<const Distribution> law;
};
struct Mixture {
    std::vector<Component> components;
};
} // namespace law

/// Law of a real random variable. All variants except Uniform and PointMass
/// are centred.
class Distribution {
public:
    using Kind = std::variant<law::Gaussian, law::Cauchy, law::Rademacher, law::Uniform, law::PointMass,
                              law::Mixture>;

    static Distribution gaussian(double variance);
    static Distribution cauchy(double scale);
    static Distribution rademacher();
    static Distribution uniform(double a, double b);
    static Distribution point_mass(double a);
    static Distribution mixture(std::vector<std::pair<double, Distribution>> components);

    const Kind& kind() const noexcept { return kind_; }
    std::string name() const;

    /// E exp(i x xi)
    Complex chi(double x) const;
    /// chi(x)^n, evaluated as exp(n log chi) with closed-form logarithms
    /// where the law has them.
    Complex chi_power(double x, double n) const;

    bool has_discrete_part() const;
    std::optional<double> mean() const;
    std::optional<double> variance() const;

    /// Point masses (location, probability); empty for continuous laws.
    std::vector<std::pair<double, double>> discrete_atoms() const;
    double discrete_mass() const;
    /// Conditional law given the continuous component (nullopt when the
    /// continuous mass is zero).
    std::optional<Distribution> continuous_part() const;
    /// Conditional law given the discrete component.
    std::optional<Distribution> discrete_part() const;

    /// P(lo <= xi <= hi)
    double interval_probability(double lo, double hi) const;

    /// E h(xi): exact sums over atoms, adaptive Gauss-Kronrod over densities.
    Complex expect(const std::function<Complex(double)>& h) const;

    double sample(SeededRng& rng) const;

private:
    explicit Distribution(Kind kind) : kind_(std::move(kind)) {}

    Kind kind_;
};

/// One-parameter family xi_t with xi_s + xi_t distributed as xi_{s+t}.
class ConvolutionFamily {
public:
    enum class Kind { Gaussian, Cauchy };

    ConvolutionFamily(Kind kind, double rate);
    static ConvolutionFamily gaussian(double rate = 1.0) { return {Kind::Gaussian, rate}; }
    static ConvolutionFamily cauchy(double rate = 1.0) { return {Kind::Cauchy, rate}; }

    Kind kind() const noexcept { return kind_; }
    double rate() const noexcept { return rate_; }

    /// Gaussian: N(0, rate t); Cauchy: scale rate t; t = 0 gives the point mass at 0.
    Distribution at(double t) const;

private:
    Kind kind_;
    double rate_;
};

/// Atom (p, c) -> (p, chi(sqrt(t) p) c): the average of M_{sqrt(t) xi}.
AtomicVector averaged_mod_apply(const Distribution& d, double t, const AtomicVector& u);

/// M_{sqrt(t/n) xi_n} ... M_{sqrt(t/n) xi_1} u for one draw of xi_1..xi_n.
AtomicVector random_walk_apply(const Distribution& d, double t, std::size_t n, SeededRng& rng,
                               const AtomicVector& u);

/// E U_n(t) u = (F(t/n))^n u: atom (p, c) -> (p, chi(sqrt(t/n) p)^n c).
AtomicVector expected_walk_apply(const Distribution& d, double t, std::size_t n, const AtomicVector& u);

/// Limit multiplier exp(-t D p^2 / 2).
AtomicVector chernoff_limit_apply(double variance, double t, const AtomicVector& u);

/// sup over probes x of |chi(sqrt(t/n) x)^n - exp(-t D x^2 / 2)|, D the
/// variance of d. Requires mean zero and finite positive variance.
double chernoff_error(const Distribution& d, double t, std::size_t n, std::span<const double> probes);

/// Runs fn(chunk_index, begin, end) for the fixed partition of [0, total)
/// into chunks of `chunk_size` items and returns the per-chunk results in
/// chunk order. The thread count only affects scheduling.
template <class Result, class Fn>
std::vector<Result> run_partitioned(std::size_t total, std::size_t chunk_size, unsigned threads, Fn fn) {
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t chunks = (total + chunk_size - 1) / chunk_size;
    std::vector<Result> results(chunks);
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t c = first; c < chunks; c += stride) {
            const std::size_t begin = c * chunk_size;
            const std::size_t end = std::min(total, begin + chunk_size);
            results[c] = fn(c, begin, end);
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, chunks));
    if (workers == 1) {
        work(0, 1);
        return results;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    pool.clear();
    return results;
}

/// Mean and standard error accumulated over samples.
struct MeanEstimate {
    Complex mean{};
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Streaming accumulator; merge() combines partial sums in a fixed order.
class ComplexAccumulator {
public:
    void add(Complex x) {
        sum_ += x;
        sum_sq_ += std::norm(x);
        ++n_;
    }
    void merge(const ComplexAccumulator& other) {
        sum_ += other.sum_;
        sum_sq_ += other.sum_sq_;
        n_ += other.n_;
    }
    MeanEstimate estimate() const;

private:
    Complex sum_{};
    double sum_sq_ = 0.0;
    std::size_t n_ = 0;
};

} // namespace atomq
