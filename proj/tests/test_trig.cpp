#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atomq/errors.hpp"
#include "atomq/json_io.hpp"
#include "atomq/trig.hpp"
#include "atomq/generators.hpp"

#include <cmath>

using namespace atomq;

namespace {

TrigPolynomial f(double p) { return TrigPolynomial::exponential(p); }

// Exact window mean of conj(e^{i p t}) e^{i q t} over [-X, X].
double window_mean_oracle(double gap, double X) { return gap == 0.0 ? 1.0 : std::sin(gap * X) / (gap * X); }

} // namespace

TEST_CASE("analytic Cesaro inner product is the Kronecker rule") {
    CHECK(cesaro_inner_analytic(f(1), f(1)) == Complex{1.0, 0.0});
    CHECK(cesaro_inner_analytic(f(1), f(2)) == Complex{0.0, 0.0});
    const auto u = TrigPolynomial::make({{0.0, 2.0}, {3.0, 1.0}});
    CHECK(cesaro_inner_analytic(u, f(3)) == Complex{1.0, 0.0});
}

TEST_CASE("numeric Cesaro mean") {
    SUBCASE("equal frequencies integrate to one at any window") {
        for (double X : {1.0, 17.5, 1e3}) {
            CHECK(std::abs(cesaro_inner_numeric(f(1), f(1), {X, 0}) - 1.0) < 1e-14);
        }
    }
    SUBCASE("distinct frequencies decay like 1/X") {
        // Frozen from sin(X)/X evaluated at 40 digits.
        const Complex at_1e3 = cesaro_inner_numeric(f(0), f(1), {1e3, 0});
        CHECK(std::abs(at_1e3) <= 2e-3);
        CHECK(std::abs(at_1e3.real() - 8.268795405320026e-4) < 1e-2 * 8.268795405320026e-4);
        CHECK(std::abs(at_1e3.imag()) < 1e-12);

        const Complex at_1e4 = cesaro_inner_numeric(f(0), f(1), {1e4, 0});
        CHECK(std::abs(at_1e4) <= 2e-4);
        CHECK(std::abs(at_1e4.real() - -3.056143888882521e-5) < 1e-2 * 3.056143888882521e-5);
    }
    SUBCASE("error bound 2/(gap X) against the antiderivative oracle") {
        SeededRng rng(3);
        for (int trial = 0; trial < 40; ++trial) {
            const double p = -3.0 + 6.0 * rng.uniform();
            const double q = -3.0 + 6.0 * rng.uniform();
            const double X = 50.0 + 500.0 * rng.uniform();
            const Complex numeric = cesaro_inner_numeric(f(p), f(q), {X, 0});
            const double oracle = window_mean_oracle(q - p, X);
            // Trapezoid with 20 nodes per period: relative error below (2pi/20)^2/12 of the sin term.
            const double gap_x = std::abs(q - p) * X;
            CHECK(std::abs(numeric - oracle) <= 1e-2 * std::min(1.0, 1.0 / gap_x) + 1e-12);
            CHECK(std::abs(numeric) <= 2.0 / (std::abs(q - p) * X) + 1e-5);
        }
    }
    CHECK_THROWS_AS(cesaro_inner_numeric(f(0), f(1), {0.0, 0}), ValidationError);
    CHECK_THROWS_AS(cesaro_inner_numeric(f(0), f(1), {10.0, 1}), ValidationError);
}

TEST_CASE("default step count resolves about 20 nodes per period") {
    CHECK(CesaroQuadratureConfig::default_steps(1e4, 1.0) >= 63662);
    CHECK(CesaroQuadratureConfig::default_steps(1e4, 0.0) == CesaroQuadratureConfig::kMinDefaultSteps);
}

TEST_CASE("fourier identification") {
    CHECK(fourier(f(2)) == AtomicVector::unit(2));
    const auto u = TrigPolynomial::make({{0.0, 1.0}, {1.0, 1.0}});
    CHECK(inverse_fourier(fourier(u)) == u);
    CHECK(cesaro_inner_analytic(u, f(1)) == Complex{1.0, 0.0});
    CHECK(inner(fourier(u), fourier(f(1))) == Complex{1.0, 0.0});
}

TEST_CASE("property: fourier is an exact isometry") {
    SeededRng rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = inverse_fourier(gen::dyadic_vector(rng));
        const auto b = inverse_fourier(gen::dyadic_vector(rng));
        CHECK(cesaro_inner_analytic(a, b) == inner(fourier(a), fourier(b)));
    }
}

TEST_CASE("modulation gap converges to 2 and ignores p") {
    CHECK(std::abs(modulation_gap_numeric(1.0, 0.0, {1e4, 0}) - 2.0) <= 1e-3);
    CHECK(std::abs(modulation_gap_numeric(2.0, 0.0, {1e4, 0}) - 2.0) <= 1e-3);
    // Oracle 2 - 2 sin(sX)/(sX), frozen at 40 digits.
    CHECK(std::abs(modulation_gap_numeric(1.0, 0.0, {1e4, 0}) - 2.000061122877778) < 1e-6);
    CHECK(modulation_gap_numeric(0.5, 3.0, {500.0, 0}) == modulation_gap_numeric(0.5, -7.25, {500.0, 0}));
    // The window mean stays away from zero even for tiny s once X is large.
    CHECK(modulation_gap_numeric(1e-2, 0.0, {1e5, 0}) > 1.9);
    // Nodes where s t is a multiple of 2 pi cause no trouble.
    const double s = 2.0 * std::numbers::pi;
    CHECK(std::isfinite(modulation_gap_numeric(s, 0.0, {100.0, 2001})));
    CHECK_THROWS_AS(modulation_gap_numeric(0.0, 0.0, {10.0, 0}), DomainError);
}

TEST_CASE("trig shift has exponentials as eigenvectors") {
    const auto shifted = shift_trig(0.5, f(3));
    REQUIRE(shifted.size() == 1);
    CHECK(std::abs(shifted.terms()[0].c - std::polar(1.0, 1.5)) < 1e-15);
    // (S_h f_p)(x) = f_p(x + h)
    CHECK(std::abs(shifted(0.25) - f(3)(0.75)) < 1e-14);
}

TEST_CASE("trig polynomial JSON mirrors the atom schema") {
    const auto u = TrigPolynomial::make({{0.0, 1.0}, {2.5, Complex{0.0, -1.0}}});
    const auto j = io::to_json(u);
    CHECK(j.dump() == R"({"terms":[{"p":0.0,"re":1.0,"im":0.0},{"p":2.5,"re":0.0,"im":-1.0}]})");
    CHECK(io::trig_from_json(j) == u);
}
