#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atomq/channels.hpp"
#include "atomq/errors.hpp"
#include "atomq/generators.hpp"

#include <cmath>
#include <numbers>

using namespace atomq;
using namespace std::complex_literals;

namespace {

PureState unit_state(double p) { return PureState::make(AtomicVector::unit(p)); }

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

PureState plus_state(double p, double q, Complex phase = 1.0) {
    return PureState::make(AtomicVector::make({{p, kInvSqrt2}, {q, phase * kInvSqrt2}}));
}

/// Probe operators whose averaged values have closed forms or smooth quadrature.
std::vector<AlgebraElement> probe_operators() {
    return {
        AlgebraElement::identity(),
        AlgebraElement::shift(0.5),
        AlgebraElement::shift(-1.25),
        AlgebraElement::multiplication(BoundedFunction::indicator(-0.5, 1.0)),
        AlgebraElement::multiplication(BoundedFunction::exponential(0.75)),
        AlgebraElement::multiplication(BoundedFunction::point_set({{0.25, 1.0}, {-1.0, 2i}})),
        AlgebraElement({{2.0, BoundedFunction::indicator(0.0, 2.0), 0.25}, {1i, BoundedFunction::exponential(-1.0), -0.5}}),
    };
}

std::vector<State> sample_states(SeededRng& rng) {
    std::vector<State> out;
    out.emplace_back(gen::random_pure(rng));
    out.emplace_back(gen::random_normal(rng, 1 + rng.next_u64() % 4));
    out.emplace_back(gen::random_mixed(rng));
    out.emplace_back(AveragedState{gen::random_pure(rng), {Distribution::gaussian(0.8)}});
    out.emplace_back(AveragedState{gen::random_mixed(rng, 2), {Distribution::cauchy(0.4)}});
    out.emplace_back(ConvexState::make({{0.4, State{gen::random_pure(rng)}},
                                        {0.6, State{AveragedState{gen::random_pure(rng), {Distribution::gaussian(1.0)}}}}}));
    return out;
}

} // namespace

TEST_CASE("state validation") {
    CHECK_THROWS_AS(PureState::make(AtomicVector::make({{0.0, 2.0}})), ValidationError);
    CHECK_THROWS_AS(PureState::normalized(AtomicVector{}), ValidationError);
    Eigen::MatrixXcd bad(2, 2);
    bad << 0.5, 0.6, 0.6, 0.5;  // eigenvalue -0.1
    CHECK_THROWS_AS(NormalState::make({0.0, 1.0}, bad), ValidationError);
    Eigen::MatrixXcd ok(2, 2);
    ok << 0.5, 0.1i, -0.1i, 0.5;
    CHECK_NOTHROW(NormalState::make({0.0, 1.0}, ok));
    CHECK_THROWS_AS(NormalState::make({1.0, 0.0}, ok), ValidationError);
    CHECK_THROWS_AS(MixedState::make({{0.5, unit_state(0)}, {0.4, unit_state(1)}}), ValidationError);
}

TEST_CASE("evaluate examples") {
    CHECK(evaluate(State{unit_state(0)}, AlgebraElement::identity()) == Complex{1.0, 0.0});
    const auto f = BoundedFunction::exponential(1.5);
    CHECK(evaluate(State{unit_state(2.0)}, AlgebraElement::multiplication(f)) == f(2.0));

    const auto u = AtomicVector::make({{0.0, 0.6}, {1.0, 0.8i}});
    const auto g = BoundedFunction::indicator(0.5, 3.0);
    const Complex value = evaluate(State{PureState::make(u)}, AlgebraElement::multiplication(g));
    CHECK(std::abs(value - (0.36 * g(0.0) + 0.64 * g(1.0))) < 1e-15);

    // A normal state and the pure state it came from agree.
    SeededRng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pure = gen::random_pure(rng);
        const auto A = gen::random_element(rng);
        const Complex a = evaluate(State{pure}, A);
        const Complex b = evaluate(State{NormalState::from_pure(pure)}, A);
        CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("shift channel") {
    SeededRng rng(42);
    const auto s = State{gen::random_mixed(rng)};
    const auto same = channel_T(0.0, s);
    for (const auto& A : probe_operators()) CHECK(evaluate(same, A) == evaluate(s, A));

    const auto moved = std::get<PureState>(channel_T(0.75, State{unit_state(0.0)}));
    CHECK(moved.u == AtomicVector::unit(-0.75));

    const auto n = gen::random_normal(rng, 3);
    const auto nt = std::get<NormalState>(channel_T(0.5, State{n}));
    CHECK(nt.matrix == n.matrix);
    for (std::size_t k = 0; k < n.support.size(); ++k) CHECK(nt.support[k] == n.support[k] - 0.5);

    CHECK_THROWS_AS(channel_T(1.0, State{AveragedState{unit_state(0), {Distribution::gaussian(1.0)}}}),
                    UnsupportedError);
}

TEST_CASE("property: channel-adjoint duality on the dyadic grid") {
    SeededRng rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        const double h = gen::dyadic(rng, 16);
        const auto A = gen::random_element(rng);
        const auto dual = compose(adjoint(AlgebraElement::shift(h)), compose(A, AlgebraElement::shift(h)));
        for (const State& s : {State{gen::random_pure(rng)}, State{gen::random_normal(rng, 3)},
                               State{gen::random_mixed(rng)}}) {
            const Complex lhs = evaluate(channel_T(h, s), A);
            const Complex rhs = evaluate(s, dual);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("property: unitality and positivity for every state kind") {
    SeededRng rng(44);
    for (int trial = 0; trial < 20; ++trial) {
        for (const State& s : sample_states(rng)) {
            CHECK(std::abs(evaluate(s, AlgebraElement::identity()) - 1.0) <= 1e-12);
            for (int k = 0; k < 3; ++k) {
                const auto A = gen::random_element(rng);
                const Complex v = evaluate(s, compose(adjoint(A), A));
                CHECK(v.real() >= -1e-10);
                CHECK(std::abs(v.imag()) <= 1e-9 * (1.0 + v.real()));
            }
        }
    }
}

TEST_CASE("averaged shift channel examples") {
    const AveragedState avg{unit_state(0), {Distribution::gaussian(1.0)}};
    CHECK(evaluate(State{avg}, AlgebraElement::identity()) == Complex{1.0, 0.0});

    // P(0 <= xi <= 1) for a standard normal, 40-digit oracle.
    const auto box = BoundedFunction::indicator(0.0, 1.0);
    const double oracle = 0.3413447460685429;
    CHECK(std::abs(eval_averaged_on_mult(avg, box).value - oracle) <= 1e-12);
    CHECK(std::abs(eval_averaged_on_mult(avg, box, ExpectationMethod::Analytic).value - oracle) <= 1e-12);
    CHECK(std::abs(eval_averaged_on_mult(avg, box, ExpectationMethod::Quadrature).value - oracle) <= 1e-9);
    const auto mc = eval_averaged_on_mult(avg, box, ExpectationMethod::MonteCarlo, {7, 100000, 1, 4096});
    CHECK(std::abs(mc.value - oracle) <= 4.0 * mc.std_error);
    CHECK(eval_averaged_on_mult(avg, BoundedFunction::one()).value == Complex{1.0, 0.0});

    // Base at p0: E f(p0 - xi).
    const AveragedState moved{unit_state(0.75), {Distribution::uniform(-1.0, 3.0)}};
    const double expect = Distribution::uniform(-1.0, 3.0).interval_probability(0.75 - 1.0, 0.75 - 0.0);
    CHECK(std::abs(eval_averaged_on_mult(moved, box).value - expect) <= 1e-14);

    const BoundedFunction custom("bump", [](double x) { return Complex{1.0 / (1.0 + x * x), 0.0}; }, 1.0);
    CHECK_THROWS_AS(eval_averaged_on_mult(avg, custom, ExpectationMethod::Analytic), UnsupportedError);
    const auto q = eval_averaged_on_mult(avg, custom, ExpectationMethod::Quadrature);
    const auto m = eval_averaged_on_mult(avg, custom, ExpectationMethod::MonteCarlo, {8, 100000, 1, 4096});
    CHECK(std::abs(q.value - m.value) <= 4.0 * m.std_error);
}

TEST_CASE("averaged evaluation on shift convolutions") {
    const AveragedState a0{unit_state(3.0), {Distribution::cauchy(1.0)}};
    CHECK(eval_averaged_on_shift_convolution(a0, {{{0.0, 1.0}}}) == Complex{1.0, 0.0});

    const AveragedState a1{plus_state(0.0, 1.0), {Distribution::gaussian(2.0)}};
    CHECK(std::abs(eval_averaged_on_shift_convolution(a1, {{{1.0, 1.0}}}) - 0.5) <= 1e-15);
    // No atom of m matches a frequency difference of the base.
    CHECK(eval_averaged_on_shift_convolution(a1, {{{0.3, 1.0}, {-2.0, 0.5}}}) == Complex{0.0, 0.0});
}

TEST_CASE("property: shift evaluation is invariant under averaging") {
    SeededRng rng(45);
    const std::vector<Distribution> laws{Distribution::gaussian(0.5), Distribution::cauchy(2.0),
                                         Distribution::rademacher(), Distribution::uniform(0.0, 1.0),
                                         Distribution::point_mass(0.25)};
    for (int trial = 0; trial < 100; ++trial) {
        const BaseState base = trial % 2 ? BaseState{gen::random_pure(rng)} : BaseState{gen::random_mixed(rng)};
        const auto& d = laws[rng.next_u64() % laws.size()];
        const double a = gen::dyadic(rng, 16);
        const auto S = AlgebraElement::shift(a);
        CHECK(evaluate(State{averaged_T(d, base)}, S) == evaluate(base, S));
    }
}

TEST_CASE("projectors vanish on singular states") {
    SeededRng rng(46);
    for (const auto& d : {Distribution::gaussian(1.0), Distribution::cauchy(1.0)}) {
        for (int trial = 0; trial < 20; ++trial) {
            const AveragedState avg{gen::random_pure(rng), {d}};
            const auto v = gen::random_pure(rng).u;
            CHECK(projector_value(avg, v).value == Complex{0.0, 0.0});
            CHECK(projector_value(avg, v, ExpectationMethod::MonteCarlo, {9, 10000, 1, 1024}).value == Complex{0.0, 0.0});
        }
    }
    // A deterministic shift lands on v.
    const AveragedState det{unit_state(0), {Distribution::point_mass(1.5)}};
    CHECK(projector_value(det, AtomicVector::unit(-1.5)).value == Complex{1.0, 0.0});
    const AveragedState coin{unit_state(0), {Distribution::rademacher()}};
    CHECK(projector_value(coin, AtomicVector::unit(1.0)).value == Complex{0.5, 0.0});
    CHECK_THROWS_AS(projector_value(det, AtomicVector::make({{0.0, 2.0}})), ValidationError);
}

TEST_CASE("normality witness") {
    const std::vector<std::vector<double>> family{{0.0}, {0.0, 1.0, 2.0}};
    CHECK(normality_witness(State{unit_state(0)}, family) == 1.0);
    CHECK(normality_witness(State{plus_state(0.0, 1.0)}, family) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(normality_witness(State{AveragedState{unit_state(0), {Distribution::gaussian(1.0)}}}, family) == 0.0);

    const State split = ConvexState::make(
        {{0.3, State{unit_state(1.0)}}, {0.7, State{AveragedState{unit_state(0), {Distribution::cauchy(1.0)}}}}});
    CHECK(std::abs(normality_witness(split, family) - 0.3) <= 1e-12);
    CHECK_THROWS_AS(normality_witness(split, std::span<const std::vector<double>>{}), ValidationError);
}

TEST_CASE("dephasing channel examples") {
    SeededRng rng(47);
    const auto n = gen::random_normal(rng, 4);
    CHECK(channel_Phi(0.0, n).matrix == n.matrix);

    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(3, 3);
    diag.diagonal() << 0.2, 0.3, 0.5;
    const auto d = NormalState::make({-1.0, 0.0, 2.0}, diag);
    CHECK(channel_Phi(1.7, d).matrix == diag);
    CHECK(averaged_Phi(Distribution::cauchy(2.0), d).matrix == diag);

    // Rank one: Phi_h rho_u = rho_{M_h u}.
    const auto pure = gen::random_pure(rng);
    const double h = 0.6;
    const auto lhs = channel_Phi(h, NormalState::from_pure(pure));
    const auto rhs = NormalState::from_pure(PureState::make(apply_mod(h, pure.u)));
    CHECK((lhs.matrix - rhs.matrix).cwiseAbs().maxCoeff() <= 1e-14);

    // Gaussian kernel on a rank-one state.
    const auto dist = Distribution::gaussian(1.3);
    const auto out = averaged_Phi(dist, NormalState::from_pure(pure));
    const auto base = NormalState::from_pure(pure);
    for (Eigen::Index j = 0; j < out.matrix.rows(); ++j) {
        for (Eigen::Index k = 0; k < out.matrix.cols(); ++k) {
            const double gap = base.support[static_cast<std::size_t>(j)] - base.support[static_cast<std::size_t>(k)];
            CHECK(std::abs(out.matrix(j, k) - std::exp(-1.3 * gap * gap / 2.0) * base.matrix(j, k)) <= 1e-15);
        }
    }
}

TEST_CASE("property: averaged dephasing keeps density matrices valid") {
    SeededRng rng(48);
    const std::vector<Distribution> laws{Distribution::gaussian(1.0), Distribution::cauchy(0.5),
                                         Distribution::rademacher(), Distribution::uniform(-2.0, 1.0)};
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = gen::random_normal(rng, 1 + rng.next_u64() % 6);
        const auto& d = laws[rng.next_u64() % laws.size()];
        const auto out = averaged_Phi(d, n);
        CHECK(hermiticity_defect(out.matrix) <= 1e-12);
        CHECK(std::abs(out.matrix.trace() - 1.0) <= 1e-12);
        CHECK(min_eigenvalue(out.matrix) >= -1e-10);
    }
}

TEST_CASE("Monte Carlo dephasing matches the Schur multiplier") {
    SeededRng rng(49);
    const auto n = gen::random_normal(rng, 4);
    for (const auto& d : {Distribution::gaussian(0.7), Distribution::uniform(-1.0, 1.0)}) {
        const auto exact = averaged_Phi(d, n);
        const auto mc = averaged_Phi_monte_carlo(d, n, {11, 100000, 1, 4096});
        for (Eigen::Index j = 0; j < exact.matrix.rows(); ++j) {
            for (Eigen::Index k = 0; k < exact.matrix.cols(); ++k) {
                CHECK(std::abs(mc.mean(j, k) - exact.matrix(j, k)) <= 4.0 * mc.std_error(j, k) + 1e-13);
            }
        }
    }
}

TEST_CASE("semigroups") {
    const std::vector<double> grid{0.0, 0.1, 0.5, 1.0, 2.0};
    SeededRng rng(50);
    const auto n = gen::random_normal(rng, 4);
    for (const auto& fam : {ConvolutionFamily::gaussian(1.0), ConvolutionFamily::cauchy(0.5)}) {
        for (double t : grid) {
            for (double s : grid) {
                const auto two = semigroup_Phi(fam, t, semigroup_Phi(fam, s, n));
                const auto one = semigroup_Phi(fam, t + s, n);
                CHECK((two.matrix - one.matrix).cwiseAbs().maxCoeff() <= 1e-12);
            }
        }
        CHECK(semigroup_Phi(fam, 0.0, n).matrix == n.matrix);
        const auto far = semigroup_Phi(fam, 1e5, n);
        CHECK((far.matrix.diagonal() - n.matrix.diagonal()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((far.matrix - Eigen::MatrixXcd(far.matrix.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-12);
    }
    CHECK(std::abs(semigroup_Phi(ConvolutionFamily::cauchy(1.0), 0.5, NormalState::from_pure(plus_state(0.0, 2.0)))
                       .matrix(0, 1) -
                   0.5 * std::exp(-1.0)) <= 1e-15);

    // T(t) T(s) against T(t + s) on probes.
    const State base{gen::random_mixed(rng, 2)};
    for (const auto& fam : {ConvolutionFamily::gaussian(1.0), ConvolutionFamily::cauchy(1.0)}) {
        for (double t : {0.0, 0.5, 2.0}) {
            for (double s : {0.1, 1.0}) {
                const State two = semigroup_T(fam, t, semigroup_T(fam, s, base));
                const State one = semigroup_T(fam, t + s, base);
                for (const auto& A : probe_operators()) CHECK(std::abs(evaluate(two, A) - evaluate(one, A)) <= 1e-10);
            }
        }
        for (const auto& A : probe_operators()) {
            CHECK(evaluate(semigroup_T(fam, 0.0, base), A) == evaluate(base, A));
        }
        CHECK(evaluate(semigroup_T(fam, 0.7, base), AlgebraElement::shift(0.5)) ==
              evaluate(semigroup_T(fam, 3.0, base), AlgebraElement::shift(0.5)));
        CHECK_THROWS_AS(semigroup_T(fam, -0.1, base), DomainError);
    }
}

TEST_CASE("Yosida-Hewitt split") {
    SeededRng rng(51);
    const auto normal = yosida_hewitt_split(State{gen::random_mixed(rng)});
    CHECK(normal.p == 1.0);
    CHECK_FALSE(normal.singular_part.has_value());

    const auto singular = yosida_hewitt_split(State{AveragedState{gen::random_pure(rng), {Distribution::gaussian(1.0)}}});
    CHECK(singular.p == 0.0);
    CHECK_FALSE(singular.normal_part.has_value());

    const State mix = ConvexState::make(
        {{0.3, State{gen::random_pure(rng)}},
         {0.7, State{AveragedState{gen::random_pure(rng), {Distribution::gaussian(1.0)}}}}});
    const auto split = yosida_hewitt_split(mix);
    CHECK(std::abs(split.p - 0.3) <= 1e-15);
    REQUIRE(split.normal_part.has_value());
    REQUIRE(split.singular_part.has_value());
    const std::vector<std::vector<double>> family{{-2.0, -1.875, 0.0, 0.5, 1.0, 2.0}};
    CHECK(normality_witness(State{*split.normal_part}, family) <= 1.0);

    // Discrete parts of a mixture law go to the normal side.
    const auto law = Distribution::mixture({{0.4, Distribution::point_mass(0.5)}, {0.6, Distribution::cauchy(1.0)}});
    const auto partial = yosida_hewitt_split(State{AveragedState{unit_state(0), {law}}});
    CHECK(std::abs(partial.p - 0.4) <= 1e-15);

    for (const State& s : {mix, State{AveragedState{unit_state(0), {law}}}}) {
        const auto parts = yosida_hewitt_split(s);
        const State rebuilt = parts.recombined();
        for (const auto& A : probe_operators()) {
            const Complex whole = evaluate(s, A);
            Complex pieces{};
            if (parts.normal_part) pieces += parts.p * evaluate(State{*parts.normal_part}, A);
            if (parts.singular_part) pieces += (1.0 - parts.p) * evaluate(State{*parts.singular_part}, A);
            CHECK(std::abs(whole - pieces) <= 1e-12);
            CHECK(std::abs(whole - evaluate(rebuilt, A)) <= 1e-12);
        }
    }
}

TEST_CASE("evaluation does not depend on the chosen decomposition") {
    // (|0><0| + |1><1|)/2 written in two different ensembles.
    const State basis = MixedState::make({{0.5, unit_state(0.0)}, {0.5, unit_state(1.0)}});
    const State rotated = MixedState::make({{0.5, plus_state(0.0, 1.0)}, {0.5, plus_state(0.0, 1.0, -1.0)}});
    const State phased = MixedState::make({{0.5, plus_state(0.0, 1.0, 1i)}, {0.5, plus_state(0.0, 1.0, -1i)}});
    SeededRng rng(52);
    auto probes = probe_operators();
    for (int k = 0; k < 50; ++k) probes.push_back(gen::random_element(rng));
    for (const auto& A : probes) {
        const Complex a = evaluate(basis, A);
        CHECK(std::abs(a - evaluate(rotated, A)) <= 1e-12);
        CHECK(std::abs(a - evaluate(phased, A)) <= 1e-12);
        const Complex avg_basis = evaluate(averaged_T(Distribution::gaussian(1.0), basis), A);
        const Complex avg_rotated = evaluate(averaged_T(Distribution::gaussian(1.0), rotated), A);
        CHECK(std::abs(avg_basis - avg_rotated) <= 1e-12);
    }
}
