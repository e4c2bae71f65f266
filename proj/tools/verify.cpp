// The verify command: a fixed registry of named invariant checks. Each check
// returns a residual; it passes when the residual is strictly below its
// tolerance, so a tolerance of 0 always fails.

#include "commands.hpp"

#include "atomq/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace atomq::cli {

namespace {

struct Check {
    std::string name;
    double tolerance;
    std::function<double(SeededRng&, const RunOptions&)> residual;
};

double action_gap(const AtomicVector& a, const AtomicVector& b) { return norm(subtract(a, b)) / (1.0 + norm(a)); }

double relative_norm_change(const AtomicVector& moved, const AtomicVector& u) {
    return std::abs(norm(moved) - norm(u)) / norm(u);
}

std::vector<Distribution> dephase_laws() {
    return {Distribution::gaussian(1.0), Distribution::cauchy(0.5), Distribution::rademacher(),
            Distribution::uniform(-1.0, 2.0)};
}

std::vector<State> random_states(SeededRng& rng) {
    std::vector<State> out;
    out.emplace_back(gen::random_pure(rng));
    out.emplace_back(gen::random_normal(rng, 3));
    out.emplace_back(gen::random_mixed(rng));
    out.emplace_back(AveragedState{gen::random_mixed(rng, 2), {Distribution::gaussian(0.5)}});
    out.emplace_back(AveragedState{gen::random_pure(rng), {Distribution::rademacher(), Distribution::cauchy(1.0)}});
    out.emplace_back(ConvexState::make({{0.25, State{gen::random_pure(rng)}},
                                        {0.75, State{AveragedState{gen::random_pure(rng), {Distribution::uniform(0.0, 1.0)}}}}}));
    return out;
}

double semigroup_T_residual(const ConvolutionFamily& fam, SeededRng& rng) {
    const std::vector<double> grid{0.0, 0.1, 0.5, 1.0, 2.0};
    const std::vector<State> states{default_semigroup_state(), State{gen::random_pure(rng)}};
    const auto probes = default_probes();
    double worst = 0.0;
    for (const State& base : states) {
        for (double t : grid) {
            for (double s : grid) {
                const State two = semigroup_T(fam, t, semigroup_T(fam, s, base));
                const State one = semigroup_T(fam, t + s, base);
                for (const auto& probe : probes) {
                    worst = std::max(worst, std::abs(evaluate(two, probe.second) - evaluate(one, probe.second)));
                }
            }
        }
    }
    return worst;
}

double singularity_residual(SeededRng& rng, ExpectationMethod method, const RunOptions& opts) {
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const BaseState base = trial % 2 ? BaseState{gen::random_pure(rng)} : BaseState{gen::random_mixed(rng, 2)};
        const Distribution d = trial % 4 < 2 ? Distribution::gaussian(0.5 + rng.uniform()) : Distribution::cauchy(0.5 + rng.uniform());
        const AveragedState avg{base, {d}};
        const auto v = PureState::normalized(gen::dyadic_vector(rng, 4, 16)).u;
        const MonteCarloOptions mc{rng.next_u64(), 2000, opts.threads, 512};
        worst = std::max(worst, std::abs(projector_value(avg, v, method, mc).value));
    }
    return worst;
}

const std::vector<Check>& registry() {
    static const std::vector<Check> checks{
        {"weyl_relation", 1e-12,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 500; ++k) {
                 const auto u = gen::random_vector(rng);
                 const double h = -10.0 + 20.0 * rng.uniform();
                 const double a = -10.0 + 20.0 * rng.uniform();
                 worst = std::max(worst, weyl_residual(h, a, u));
             }
             return worst;
         }},
        {"shift_isometry", 1e-14,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 500; ++k) {
                 const auto u = gen::random_vector(rng);
                 worst = std::max(worst, relative_norm_change(apply_shift(-5.0 + 10.0 * rng.uniform(), u), u));
             }
             return worst;
         }},
        {"mod_isometry", 1e-14,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 500; ++k) {
                 const auto u = gen::random_vector(rng);
                 worst = std::max(worst, relative_norm_change(apply_mod(-5.0 + 10.0 * rng.uniform(), u), u));
             }
             return worst;
         }},
        {"fourier_isometry", 1e-15,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 500; ++k) {
                 const auto u = gen::dyadic_vector(rng);
                 const auto v = gen::dyadic_vector(rng);
                 const Complex lhs = cesaro_inner_analytic(inverse_fourier(u), inverse_fourier(v));
                 worst = std::max(worst, std::abs(lhs - inner(u, v)));
             }
             return worst;
         }},
        {"compose_action", 1e-12,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 200; ++k) {
                 const auto A = gen::random_element(rng);
                 const auto B = gen::random_element(rng);
                 const auto u = gen::dyadic_vector(rng);
                 worst = std::max(worst, action_gap(apply_element(compose(A, B), u), apply_element(A, apply_element(B, u))));
             }
             return worst;
         }},
        {"adjoint_duality", 1e-12,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 200; ++k) {
                 const auto A = gen::random_element(rng);
                 const auto u = gen::dyadic_vector(rng);
                 const auto v = gen::dyadic_vector(rng);
                 const Complex lhs = inner(apply_element(A, u), v);
                 const Complex rhs = inner(u, apply_element(adjoint(A), v));
                 worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
             }
             return worst;
         }},
        {"chernoff_gaussian_fixed_point", 1e-14,
         [](SeededRng&, const RunOptions&) {
             const double probes[] = {0.5, 1.0, 2.0, 3.0};
             double worst = 0.0;
             for (std::size_t n : {1, 10, 100, 1000, 10000}) {
                 worst = std::max(worst, chernoff_error(Distribution::gaussian(1.0), 1.0, n, probes));
             }
             return worst;
         }},
        {"chernoff_rademacher_n1000", 5e-4,
         [](SeededRng&, const RunOptions&) {
             const double probes[] = {0.5, 1.0, 2.0, 3.0};
             return chernoff_error(Distribution::rademacher(), 1.0, 1000, probes);
         }},
        {"dephase_psd", 1e-10,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 100; ++k) {
                 const auto rho = gen::random_normal(rng, 1 + k % 6);
                 for (const auto& d : dephase_laws()) worst = std::max(worst, -min_eigenvalue(averaged_Phi(d, rho).matrix));
             }
             return worst;
         }},
        {"dephase_hermitian", 1e-12,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 100; ++k) {
                 const auto rho = gen::random_normal(rng, 1 + k % 6);
                 for (const auto& d : dephase_laws()) worst = std::max(worst, hermiticity_defect(averaged_Phi(d, rho).matrix));
             }
             return worst;
         }},
        {"dephase_trace", 1e-12,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 100; ++k) {
                 const auto rho = gen::random_normal(rng, 1 + k % 6);
                 for (const auto& d : dephase_laws()) {
                     worst = std::max(worst, std::abs(averaged_Phi(d, rho).matrix.trace() - Complex{1.0, 0.0}));
                 }
             }
             return worst;
         }},
        {"dephase_kernel", 1e-12,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 100; ++k) {
                 const auto rho = gen::random_normal(rng, 1 + k % 6);
                 const auto m = static_cast<Eigen::Index>(rho.support.size());
                 for (const auto& d : dephase_laws()) {
                     const auto out = averaged_Phi(d, rho);
                     for (Eigen::Index i = 0; i < m; ++i) {
                         for (Eigen::Index j = 0; j < m; ++j) {
                             const Complex chi = d.chi(rho.support[static_cast<std::size_t>(i)] -
                                                       rho.support[static_cast<std::size_t>(j)]);
                             worst = std::max(worst, std::abs(out.matrix(i, j) - chi * rho.matrix(i, j)));
                         }
                     }
                 }
             }
             return worst;
         }},
        {"semigroup_T_gaussian", 1e-10,
         [](SeededRng& rng, const RunOptions&) { return semigroup_T_residual(ConvolutionFamily::gaussian(1.0), rng); }},
        {"semigroup_T_cauchy", 1e-10,
         [](SeededRng& rng, const RunOptions&) { return semigroup_T_residual(ConvolutionFamily::cauchy(1.0), rng); }},
        {"semigroup_Phi", 1e-12,
         [](SeededRng& rng, const RunOptions&) {
             const std::vector<double> grid{0.0, 0.1, 0.5, 1.0, 2.0};
             double worst = 0.0;
             for (const auto& fam : {ConvolutionFamily::gaussian(1.0), ConvolutionFamily::cauchy(1.0)}) {
                 const auto rho = gen::random_normal(rng, 5);
                 for (double t : grid) {
                     for (double s : grid) {
                         const auto two = semigroup_Phi(fam, t, semigroup_Phi(fam, s, rho));
                         const auto one = semigroup_Phi(fam, t + s, rho);
                         worst = std::max(worst, (two.matrix - one.matrix).cwiseAbs().maxCoeff());
                     }
                 }
             }
             return worst;
         }},
        {"shift_invariance", 1e-15,
         [](SeededRng& rng, const RunOptions&) {
             const std::vector<Distribution> laws{Distribution::gaussian(1.0), Distribution::cauchy(0.5),
                                                  Distribution::rademacher(), Distribution::uniform(-1.0, 1.0)};
             double worst = 0.0;
             for (int k = 0; k < 100; ++k) {
                 const BaseState rho = k % 2 ? BaseState{gen::random_pure(rng)} : BaseState{gen::random_mixed(rng, 2)};
                 const auto& d = laws[static_cast<std::size_t>(k) % laws.size()];
                 const auto S = AlgebraElement::shift(gen::dyadic(rng, 16));
                 worst = std::max(worst, std::abs(evaluate(State{averaged_T(d, rho)}, S) - evaluate(rho, S)));
             }
             return worst;
         }},
        {"singularity_analytic", 1e-15,
         [](SeededRng& rng, const RunOptions& opts) { return singularity_residual(rng, ExpectationMethod::Analytic, opts); }},
        {"singularity_monte_carlo", 1e-15,
         [](SeededRng& rng, const RunOptions& opts) {
             return singularity_residual(rng, ExpectationMethod::MonteCarlo, opts);
         }},
        {"yosida_hewitt_witness", 1e-12,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 20; ++k) {
                 const auto normal = gen::random_pure(rng);
                 std::vector<double> support;
                 for (const Atom& a : normal.u.atoms()) support.push_back(a.p);
                 const State split = ConvexState::make(
                     {{0.3, State{normal}},
                      {0.7, State{AveragedState{gen::random_mixed(rng, 2), {k % 2 ? Distribution::cauchy(1.0) : Distribution::gaussian(1.0)}}}}});
                 const std::vector<std::vector<double>> family{support};
                 worst = std::max(worst, std::abs(normality_witness(split, family) - 0.3));
                 worst = std::max(worst, std::abs(yosida_hewitt_split(split).p - 0.3));
             }
             return worst;
         }},
        {"averaged_mult_cdf", 1e-9,
         [](SeededRng&, const RunOptions&) {
             const AveragedState avg{PureState::make(AtomicVector::unit(0.0)), {Distribution::gaussian(1.0)}};
             const double oracle = 0.5 * std::erf(1.0 / std::sqrt(2.0));
             const auto box = BoundedFunction::indicator(0.0, 1.0);
             return std::max(std::abs(eval_averaged_on_mult(avg, box).value - oracle),
                             std::abs(eval_averaged_on_mult(avg, box, ExpectationMethod::Quadrature).value - oracle));
         }},
        {"unitality", 1e-12,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 20; ++k) {
                 for (const State& s : random_states(rng)) {
                     worst = std::max(worst, std::abs(evaluate(s, AlgebraElement::identity()) - Complex{1.0, 0.0}));
                 }
             }
             return worst;
         }},
        {"positivity", 1e-10,
         [](SeededRng& rng, const RunOptions&) {
             double worst = 0.0;
             for (int k = 0; k < 10; ++k) {
                 for (const State& s : random_states(rng)) {
                     const auto A = gen::random_element(rng, 2);
                     const Complex v = evaluate(s, compose(adjoint(A), A));
                     worst = std::max({worst, -v.real(), std::abs(v.imag()) / (1.0 + std::abs(v))});
                 }
             }
             return worst;
         }},
    };
    return checks;
}

} // namespace

Report run_verify(const Json& config, const RunOptions& opts) {
    ConfigReader cfg(config, {"tolerances"});
    const auto& checks = registry();
    Json defaults = Json::object();
    for (const auto& c : checks) defaults[c.name] = c.tolerance;
    Json overrides = cfg.object("tolerances", Json::object());
    for (const auto& [name, value] : overrides.items()) {
        if (!defaults.contains(name)) throw ConfigError("config key 'tolerances': unknown check '" + name + "'");
        if (!value.is_number() || !(value.get<double>() >= 0.0) || !std::isfinite(value.get<double>())) {
            throw ConfigError("config key 'tolerances." + name + "': expected a non-negative number");
        }
        defaults[name] = value.get<double>();
    }

    Report r;
    r.schema = "verify/1";
    r.command = "verify";
    r.seed = opts.seed;
    r.columns = {"check", "residual", "tolerance", "pass"};
    Json echo = cfg.resolved();
    echo["tolerances"] = defaults;
    r.config = std::move(echo);

    for (std::size_t k = 0; k < checks.size(); ++k) {
        const auto& c = checks[k];
        const double tol = defaults[c.name].get<double>();
        SeededRng rng(opts.seed, 1000 + k);
        const double residual = c.residual(rng, opts);
        const bool ok = residual < tol;
        r.add_row(Json{{"check", c.name}, {"residual", residual}, {"tolerance", tol}, {"pass", ok}});
        if (!ok) r.passed = false;
    }
    return r;
}

} // namespace atomq::cli
