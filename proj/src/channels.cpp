#include "atomq/channels.hpp"

#include "atomq/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace atomq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_weights(const std::vector<double>& weights, const char* what) {
    if (weights.empty()) throw ValidationError(std::string(what) + " needs at least one component");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError(std::string(what) + " weights must be >= 0");
        total += w;
    }
    if (std::abs(total - 1.0) > kStateTolerance) throw ValidationError(std::string(what) + " weights must sum to 1");
}

std::size_t index_of(const std::vector<double>& support, double p) {
    auto it = std::lower_bound(support.begin(), support.end(), p);
    return (it != support.end() && *it == p) ? static_cast<std::size_t>(it - support.begin()) : support.size();
}

} // namespace

PureState PureState::make(AtomicVector u) {
    if (std::abs(norm(u) - 1.0) > kStateTolerance) throw ValidationError("pure state vector must have unit norm");
    return PureState{std::move(u)};
}

PureState PureState::normalized(const AtomicVector& u) {
    const double n = norm(u);
    if (n == 0.0) throw ValidationError("cannot normalise the zero vector");
    return PureState{scale(1.0 / n, u)};
}

double hermiticity_defect(const Eigen::MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

NormalState NormalState::make(std::vector<double> support, Eigen::MatrixXcd matrix) {
    const auto m = static_cast<Eigen::Index>(support.size());
    if (matrix.rows() != m || matrix.cols() != m) throw ValidationError("density matrix size must match the support");
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (!std::isfinite(support[k])) throw ValidationError("support frequencies must be finite");
        if (k > 0 && !(support[k - 1] < support[k])) {
            throw ValidationError("support frequencies must be strictly increasing");
        }
        if (support[k] == 0.0) support[k] = 0.0;
    }
    if (!matrix.allFinite()) throw ValidationError("density matrix has non-finite entries");
    if (hermiticity_defect(matrix) > kStateTolerance) throw ValidationError("density matrix is not Hermitian");
    if (std::abs(matrix.trace() - Complex{1.0, 0.0}) > kStateTolerance) {
        throw ValidationError("density matrix must have unit trace");
    }
    if (min_eigenvalue(matrix) < -kPsdTolerance) throw ValidationError("density matrix is not positive semidefinite");
    return NormalState{std::move(support), std::move(matrix)};
}

NormalState NormalState::from_pure(const PureState& s) {
    const auto atoms = s.u.atoms();
    std::vector<double> support;
    Eigen::VectorXcd c(static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        support.push_back(atoms[k].p);
        c(static_cast<Eigen::Index>(k)) = atoms[k].c;
    }
    return NormalState{std::move(support), c * c.adjoint()};
}

std::vector<std::pair<double, PureState>> NormalState::spectral_ensemble() const {
    const Eigen::MatrixXcd h = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    std::vector<std::pair<double, PureState>> out;
    double total = 0.0;
    for (Eigen::Index i = solver.eigenvalues().size() - 1; i >= 0; --i) {
        const double lambda = solver.eigenvalues()(i);
        if (!(lambda > 0.0)) continue;
        std::vector<std::pair<double, Complex>> pairs;
        for (Eigen::Index j = 0; j < solver.eigenvectors().rows(); ++j) {
            pairs.emplace_back(support[static_cast<std::size_t>(j)], solver.eigenvectors()(j, i));
        }
        out.emplace_back(lambda, PureState::normalized(AtomicVector::make(pairs)));
        total += lambda;
    }
    for (auto& [w, s] : out) w /= total;
    return out;
}

MixedState MixedState::make(std::vector<std::pair<double, PureState>> components) {
    std::vector<double> weights;
    for (const auto& [w, s] : components) weights.push_back(w);
    check_weights(weights, "mixed state");
    return MixedState{std::move(components)};
}

ConvexState ConvexState::make(std::vector<std::pair<double, State>> components) {
    std::vector<double> weights;
    for (const auto& [w, s] : components) weights.push_back(w);
    check_weights(weights, "convex combination");
    ConvexState out;
    for (auto& [w, s] : components) out.components.push_back({w, std::make_shared<const State>(std::move(s))});
    return out;
}

bool AveragedState::is_singular() const {
    return std::any_of(smoothing.begin(), smoothing.end(),
                       [](const Distribution& d) { return !d.has_discrete_part(); });
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Complex evaluate_normal(const NormalState& s, const AlgebraElement& A) {
    // tr(rho M_f S_a) = sum over (j, k) with p_k == p_j - a of rho_jk f(p_k)
    Complex total{};
    for (const AlgebraTerm& t : A.terms()) {
        Complex sum{};
        for (std::size_t j = 0; j < s.support.size(); ++j) {
            const double target = s.support[j] - t.shift;
            const std::size_t k = index_of(s.support, target);
            if (k == s.support.size()) continue;
            sum += s.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * t.f(s.support[k]);
        }
        total += t.coef * sum;
    }
    return total;
}

} // namespace

Complex evaluate(const BaseState& s, const AlgebraElement& A) {
    return std::visit(overloaded{
                          [&](const PureState& p) { return inner(p.u, apply_element(A, p.u)); },
                          [&](const NormalState& n) { return evaluate_normal(n, A); },
                          [&](const MixedState& m) {
                              Complex sum{};
                              for (const auto& [w, p] : m.components) sum += w * inner(p.u, apply_element(A, p.u));
                              return sum;
                          },
                      },
                      s);
}

namespace {

AlgebraElement smoothed_element(const AlgebraElement& A, std::span<const Distribution> laws,
                                ExpectationMethod method) {
    std::vector<AlgebraTerm> terms;
    terms.reserve(A.terms().size());
    for (const AlgebraTerm& t : A.terms()) terms.push_back({t.coef, smoothed_function(t.f, laws, method), t.shift});
    return AlgebraElement(std::move(terms));
}

} // namespace

Complex evaluate(const State& s, const AlgebraElement& A) {
    return std::visit(overloaded{
                          [&](const PureState& p) { return evaluate(BaseState{p}, A); },
                          [&](const NormalState& n) { return evaluate_normal(n, A); },
                          [&](const MixedState& m) { return evaluate(BaseState{m}, A); },
                          [&](const AveragedState& a) {
                              return evaluate(a.base, smoothed_element(A, a.smoothing, ExpectationMethod::Auto));
                          },
                          [&](const ConvexState& c) {
                              Complex sum{};
                              for (const auto& comp : c.components) sum += comp.weight * evaluate(*comp.state, A);
                              return sum;
                          },
                      },
                      s);
}

// ---------------------------------------------------------------------------
// Shift channel

BaseState channel_T(double h, const BaseState& s) {
    return std::visit(overloaded{
                          [&](const PureState& p) -> BaseState { return PureState{apply_shift(h, p.u)}; },
                          [&](const NormalState& n) -> BaseState {
                              NormalState out = n;
                              for (std::size_t k = 0; k < out.support.size(); ++k) {
                                  out.support[k] -= h;
                                  if (out.support[k] == 0.0) out.support[k] = 0.0;
                                  if (k > 0 && !(out.support[k - 1] < out.support[k])) {
                                      throw DomainError("shift merged two support frequencies of a normal state");
                                  }
                              }
                              return out;
                          },
                          [&](const MixedState& m) -> BaseState {
                              MixedState out = m;
                              for (auto& [w, p] : out.components) p.u = apply_shift(h, p.u);
                              return out;
                          },
                      },
                      s);
}

State channel_T(double h, const State& s) {
    return std::visit(overloaded{
                          [&](const PureState& p) -> State { return std::get<PureState>(channel_T(h, BaseState{p})); },
                          [&](const NormalState& n) -> State {
                              return std::get<NormalState>(channel_T(h, BaseState{n}));
                          },
                          [&](const MixedState& m) -> State {
                              return std::get<MixedState>(channel_T(h, BaseState{m}));
                          },
                          [&](const AveragedState&) -> State {
                              throw UnsupportedError("channel_T is not defined on averaged states; use semigroup_T");
                          },
                          [&](const ConvexState& c) -> State {
                              ConvexState out;
                              for (const auto& comp : c.components) {
                                  out.components.push_back(
                                      {comp.weight, std::make_shared<const State>(channel_T(h, *comp.state))});
                              }
                              return out;
                          },
                      },
                      s);
}

AveragedState averaged_T(const Distribution& d, const BaseState& s) { return AveragedState{s, {d}}; }

State averaged_T(const Distribution& d, const State& s) {
    return std::visit(overloaded{
                          [&](const PureState& p) -> State { return averaged_T(d, BaseState{p}); },
                          [&](const NormalState& n) -> State { return averaged_T(d, BaseState{n}); },
                          [&](const MixedState& m) -> State { return averaged_T(d, BaseState{m}); },
                          [&](const AveragedState& a) -> State {
                              AveragedState out = a;
                              out.smoothing.push_back(d);
                              return out;
                          },
                          [&](const ConvexState& c) -> State {
                              ConvexState out;
                              for (const auto& comp : c.components) {
                                  out.components.push_back(
                                      {comp.weight, std::make_shared<const State>(averaged_T(d, *comp.state))});
                              }
                              return out;
                          },
                      },
                      s);
}

State semigroup_T(const ConvolutionFamily& fam, double t, const State& s) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("semigroup_T needs finite t >= 0");
    return averaged_T(fam.at(t), s);
}

// ---------------------------------------------------------------------------
// Smoothed functions g(x) = E f(x - xi_1 - ... - xi_k)

namespace {

// Atoms of the total shift as ordered tuples of per-law locations.
struct ShiftCombo {
    std::vector<double> shifts;
    double mass;
};

constexpr std::size_t kMaxCombos = 1u << 20;

std::vector<ShiftCombo> discrete_combos(std::span<const Distribution> laws) {
    std::vector<ShiftCombo> combos{{{}, 1.0}};
    for (const Distribution& d : laws) {
        const auto atoms = d.discrete_atoms();
        if (atoms.empty()) return {};
        if (combos.size() * atoms.size() > kMaxCombos) {
            throw UnsupportedError("too many atom combinations in the shift law");
        }
        std::vector<ShiftCombo> next;
        next.reserve(combos.size() * atoms.size());
        for (const ShiftCombo& c : combos) {
            for (const auto& [x, w] : atoms) {
                ShiftCombo n = c;
                n.shifts.push_back(x);
                n.mass *= w;
                next.push_back(std::move(n));
            }
        }
        combos = std::move(next);
    }
    return combos;
}

double apply_shifts(double x, const std::vector<double>& shifts) {
    for (double a : shifts) x -= a;
    return x;
}

std::string smoothed_id(const BoundedFunction& f, std::span<const Distribution> laws, ExpectationMethod method) {
    std::string id = "E[" + f.id() + "|";
    for (const Distribution& d : laws) id += d.name() + ";";
    id += method == ExpectationMethod::Quadrature ? "quad]" : "]";
    return id;
}

std::optional<BoundedFunction> closed_form(const BoundedFunction& f, std::span<const Distribution> laws) {
    return std::visit(
        overloaded{
            [&](const shape::Constant&) -> std::optional<BoundedFunction> { return f; },
            [&](const shape::Exponential& e) -> std::optional<BoundedFunction> {
                // E exp(i k (x - xi)) = exp(i k x) chi(-k)
                Complex factor = e.amplitude;
                for (const Distribution& d : laws) factor *= d.chi(-e.k);
                return BoundedFunction::exponential(e.k).scaled(factor);
            },
            [&](const shape::PointSet&) -> std::optional<BoundedFunction> {
                // Only the atoms of the shift law can hit a finite point set.
                auto combos = std::make_shared<const std::vector<ShiftCombo>>(discrete_combos(laws));
                return BoundedFunction(
                    smoothed_id(f, laws, ExpectationMethod::Auto),
                    [f, combos](double x) {
                        Complex s{};
                        for (const ShiftCombo& c : *combos) s += c.mass * f(apply_shifts(x, c.shifts));
                        return s;
                    },
                    f.bound());
            },
            [&](const shape::Interval& iv) -> std::optional<BoundedFunction> {
                if (laws.size() != 1) return std::nullopt;
                const Distribution d = laws.front();
                const shape::Interval s = iv;
                return BoundedFunction(
                    smoothed_id(f, laws, ExpectationMethod::Auto),
                    [d, s](double x) { return s.value * d.interval_probability(x - s.hi, x - s.lo); }, f.bound());
            },
            [&](std::monostate) -> std::optional<BoundedFunction> { return std::nullopt; },
        },
        f.shape());
}

} // namespace

BoundedFunction smoothed_function(const BoundedFunction& f, std::span<const Distribution> laws,
                                  ExpectationMethod method) {
    if (laws.empty()) return f;
    if (std::holds_alternative<shape::Constant>(f.shape())) return f;
    if (!std::holds_alternative<shape::PointSet>(f.shape())) {
        // A point-mass shift is just a translate of f. Folding it in keeps
        // discontinuous shapes out of the numerical integrals below.
        const auto is_point = [](const Distribution& d) { return std::holds_alternative<law::PointMass>(d.kind()); };
        if (std::any_of(laws.begin(), laws.end(), is_point)) {
            BoundedFunction g = f;
            std::vector<Distribution> rest;
            for (const Distribution& d : laws) {
                if (const auto* pm = std::get_if<law::PointMass>(&d.kind())) {
                    g = g.shifted(-pm->a);
                } else {
                    rest.push_back(d);
                }
            }
            return smoothed_function(g, rest, method);
        }
    }
    if (method == ExpectationMethod::MonteCarlo) {
        throw UnsupportedError("Monte Carlo smoothing yields estimates, not functions; use eval_averaged_on_mult");
    }
    if (method != ExpectationMethod::Quadrature) {
        if (auto g = closed_form(f, laws)) return *g;
        if (method == ExpectationMethod::Analytic) {
            throw UnsupportedError("no closed form for E f(x - xi) with f = " + f.id());
        }
    }
    // Integrate out the first shift, recurse on the rest.
    const Distribution first = laws.front();
    const BoundedFunction rest = smoothed_function(f, laws.subspan(1), method);
    return BoundedFunction(
        smoothed_id(f, laws, method),
        [first, rest](double x) { return first.expect([&](double y) { return rest(x - y); }); }, f.bound());
}

namespace {

template <class SampleValue>
Estimate monte_carlo(const AveragedState& avg, const MonteCarloOptions& mc, SampleValue&& value) {
    if (mc.samples == 0) throw ValidationError("Monte Carlo needs at least one sample");
    const SeededRng root(mc.seed);
    auto partial = run_partitioned<ComplexAccumulator>(
        mc.samples, mc.chunk_size, mc.threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
            SeededRng rng = root.split(chunk);
            ComplexAccumulator acc;
            for (std::size_t i = begin; i < end; ++i) {
                BaseState shifted = avg.base;
                for (const Distribution& d : avg.smoothing) shifted = channel_T(d.sample(rng), shifted);
                acc.add(value(shifted));
            }
            return acc;
        });
    ComplexAccumulator total;
    for (const auto& a : partial) total.merge(a);
    const MeanEstimate e = total.estimate();
    return {e.mean, e.std_error};
}

double projector_base(const BaseState& s, const AtomicVector& v) {
    return std::visit(overloaded{
                          [&](const PureState& p) { return std::norm(inner(p.u, v)); },
                          [&](const NormalState& n) {
                              // <v, rho v>
                              Eigen::VectorXcd vv(static_cast<Eigen::Index>(n.support.size()));
                              for (std::size_t k = 0; k < n.support.size(); ++k) {
                                  vv(static_cast<Eigen::Index>(k)) = v.at(n.support[k]);
                              }
                              return (vv.adjoint() * n.matrix * vv)(0, 0).real();
                          },
                          [&](const MixedState& m) {
                              double sum = 0.0;
                              for (const auto& [w, p] : m.components) sum += w * std::norm(inner(p.u, v));
                              return sum;
                          },
                      },
                      s);
}

BaseState shift_by(const BaseState& s, const std::vector<double>& shifts) {
    BaseState out = s;
    for (double a : shifts) out = channel_T(a, out);
    return out;
}

} // namespace

Estimate eval_averaged_on_mult(const AveragedState& avg, const BoundedFunction& f, ExpectationMethod method,
                               const MonteCarloOptions& mc) {
    const AlgebraElement Mf = AlgebraElement::multiplication(f);
    if (method == ExpectationMethod::MonteCarlo) {
        return monte_carlo(avg, mc, [&](const BaseState& shifted) { return evaluate(shifted, Mf); });
    }
    return {evaluate(avg.base, smoothed_element(Mf, avg.smoothing, method)), 0.0};
}

Complex eval_averaged_on_shift_convolution(const AveragedState& avg, const AtomicMeasure& m) {
    return evaluate(State{avg}, AlgebraElement::convolution(m));
}

Estimate projector_value(const AveragedState& avg, const AtomicVector& v, ExpectationMethod method,
                         const MonteCarloOptions& mc) {
    if (std::abs(norm(v) - 1.0) > kStateTolerance) throw ValidationError("projector needs a unit vector");
    if (method == ExpectationMethod::MonteCarlo) {
        return monte_carlo(avg, mc, [&](const BaseState& shifted) { return Complex{projector_base(shifted, v), 0.0}; });
    }
    double sum = 0.0;
    for (const ShiftCombo& c : discrete_combos(avg.smoothing)) sum += c.mass * projector_base(shift_by(avg.base, c.shifts), v);
    return {Complex{sum, 0.0}, 0.0};
}

double projector_value(const State& s, const AtomicVector& v) {
    return std::visit(overloaded{
                          [&](const PureState& p) { return projector_base(BaseState{p}, v); },
                          [&](const NormalState& n) { return projector_base(BaseState{n}, v); },
                          [&](const MixedState& m) { return projector_base(BaseState{m}, v); },
                          [&](const AveragedState& a) { return projector_value(a, v).value.real(); },
                          [&](const ConvexState& c) {
                              double sum = 0.0;
                              for (const auto& comp : c.components) sum += comp.weight * projector_value(*comp.state, v);
                              return sum;
                          },
                      },
                      s);
}

double normality_witness(const State& s, std::span<const std::vector<double>> family) {
    if (family.empty()) throw ValidationError("normality witness needs a non-empty family");
    double best = 0.0;
    for (const auto& points : family) {
        std::map<double, Complex> values;
        for (double p : points) values[p == 0.0 ? 0.0 : p] = 1.0;
        const auto P = AlgebraElement::multiplication(BoundedFunction::point_set(std::move(values)));
        best = std::max(best, evaluate(s, P).real());
    }
    return best;
}

// ---------------------------------------------------------------------------
// Modulation (dephasing) channel

namespace {

template <class Kernel>
NormalState schur(const NormalState& s, Kernel&& kernel) {
    NormalState out = s;
    const auto m = static_cast<Eigen::Index>(s.support.size());
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = 0; k < m; ++k) {
            if (j == k) continue;
            out.matrix(j, k) *= kernel(s.support[static_cast<std::size_t>(j)] - s.support[static_cast<std::size_t>(k)]);
        }
    }
    return out;
}

} // namespace

NormalState channel_Phi(double h, const NormalState& s) {
    return schur(s, [h](double dp) { return std::polar(1.0, h * dp); });
}

NormalState averaged_Phi(const Distribution& d, const NormalState& s) {
    return schur(s, [&d](double dp) { return d.chi(dp); });
}

NormalState semigroup_Phi(const ConvolutionFamily& fam, double t, const NormalState& s) {
    return averaged_Phi(fam.at(t), s);
}

MatrixEstimate averaged_Phi_monte_carlo(const Distribution& d, const NormalState& s, const MonteCarloOptions& mc) {
    if (mc.samples < 2) throw ValidationError("Monte Carlo needs at least two samples");
    const auto m = static_cast<Eigen::Index>(s.support.size());
    struct Partial {
        Eigen::MatrixXcd sum;
        Eigen::MatrixXd sum_sq;
    };
    const SeededRng root(mc.seed);
    auto partial = run_partitioned<Partial>(
        mc.samples, mc.chunk_size, mc.threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
            SeededRng rng = root.split(chunk);
            Partial p{Eigen::MatrixXcd::Zero(m, m), Eigen::MatrixXd::Zero(m, m)};
            for (std::size_t i = begin; i < end; ++i) {
                const NormalState draw = channel_Phi(d.sample(rng), s);
                p.sum += draw.matrix;
                p.sum_sq += draw.matrix.cwiseAbs2();
            }
            return p;
        });
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(m, m);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(m, m);
    for (const Partial& p : partial) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    const double n = static_cast<double>(mc.samples);
    MatrixEstimate e{sum / n, Eigen::MatrixXd::Zero(m, m)};
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = 0; k < m; ++k) {
            const double var = std::max(0.0, (sum_sq(j, k) - n * std::norm(e.mean(j, k))) / (n - 1.0));
            e.std_error(j, k) = std::sqrt(var / n);
        }
    }
    return e;
}

// ---------------------------------------------------------------------------
// Normal / singular decomposition

namespace {

void append_ensemble(const BaseState& s, double weight, std::vector<std::pair<double, PureState>>& out) {
    std::visit(overloaded{
                   [&](const PureState& p) { out.emplace_back(weight, p); },
                   [&](const NormalState& n) {
                       for (auto& [w, p] : n.spectral_ensemble()) out.emplace_back(weight * w, std::move(p));
                   },
                   [&](const MixedState& m) {
                       for (const auto& [w, p] : m.components) out.emplace_back(weight * w, p);
                   },
               },
               s);
}

struct SplitAccumulator {
    std::vector<std::pair<double, PureState>> normal;
    std::vector<std::pair<double, State>> singular;
};

void split_into(const State& s, double weight, SplitAccumulator& acc) {
    if (weight == 0.0) return;
    std::visit(overloaded{
                   [&](const PureState& p) { append_ensemble(BaseState{p}, weight, acc.normal); },
                   [&](const NormalState& n) { append_ensemble(BaseState{n}, weight, acc.normal); },
                   [&](const MixedState& m) { append_ensemble(BaseState{m}, weight, acc.normal); },
                   [&](const ConvexState& c) {
                       for (const auto& comp : c.components) split_into(*comp.state, weight * comp.weight, acc);
                   },
                   [&](const AveragedState& a) {
                       // Each law is q * (atomic part) + (1 - q) * (continuous part). Expanding the
                       // product over laws, only the all-atomic pattern stays normal.
                       const std::size_t k = a.smoothing.size();
                       if (k > 20) throw UnsupportedError("too many smoothing laws to split");
                       for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
                           double w = weight;
                           std::vector<Distribution> laws;
                           bool all_atomic = true;
                           for (std::size_t i = 0; i < k && w > 0.0; ++i) {
                               const Distribution& d = a.smoothing[i];
                               const double q = d.discrete_mass();
                               if (mask & (std::size_t{1} << i)) {
                                   w *= 1.0 - q;
                                   if (auto c = d.continuous_part()) laws.push_back(*c);
                                   all_atomic = false;
                               } else {
                                   w *= q;
                                   if (auto c = d.discrete_part()) laws.push_back(*c);
                               }
                           }
                           if (!(w > 0.0)) continue;
                           if (all_atomic) {
                               for (const ShiftCombo& c : discrete_combos(laws)) {
                                   append_ensemble(shift_by(a.base, c.shifts), w * c.mass, acc.normal);
                               }
                           } else {
                               acc.singular.emplace_back(w, AveragedState{a.base, std::move(laws)});
                           }
                       }
                   },
               },
               s);
}

} // namespace

StateDecomposition yosida_hewitt_split(const State& s) {
    SplitAccumulator acc;
    split_into(s, 1.0, acc);
    double p = 0.0;
    for (const auto& [w, _] : acc.normal) p += w;
    double q = 0.0;
    for (const auto& [w, _] : acc.singular) q += w;
    if (std::abs(p + q - 1.0) > kStateTolerance) throw ValidationError("state weights must sum to 1");

    StateDecomposition out;
    out.p = p / (p + q);
    if (!acc.normal.empty()) {
        for (auto& [w, _] : acc.normal) w /= p;
        out.normal_part = MixedState{std::move(acc.normal)};
    }
    if (!acc.singular.empty()) {
        ConvexState c;
        for (auto& [w, st] : acc.singular) c.components.push_back({w / q, std::make_shared<const State>(std::move(st))});
        out.singular_part = std::move(c);
    }
    return out;
}

State StateDecomposition::recombined() const {
    ConvexState c;
    if (normal_part) c.components.push_back({p, std::make_shared<const State>(*normal_part)});
    if (singular_part) c.components.push_back({1.0 - p, std::make_shared<const State>(*singular_part)});
    return c;
}

} // namespace atomq
