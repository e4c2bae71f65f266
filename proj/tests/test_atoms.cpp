#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atomq/atoms.hpp"
#include "atomq/errors.hpp"
#include "atomq/generators.hpp"

#include <limits>
#include <map>

using namespace atomq;
using namespace std::complex_literals;

TEST_CASE("make_vector merges, drops zeros and sorts") {
    CHECK(AtomicVector::make({{0.0, 1.0}, {0.0, -1.0}}).empty());

    const auto sorted = AtomicVector::make({{1.0, 0.5}, {0.0, 0.5}});
    REQUIRE(sorted.size() == 2);
    CHECK(sorted.atoms()[0].p == 0.0);
    CHECK(sorted.atoms()[1].p == 1.0);

    const auto merged = AtomicVector::make({{2.0, 1i}, {2.0, 1i}});
    REQUIRE(merged.size() == 1);
    CHECK(merged.atoms()[0] == Atom{2.0, 2i});
}

TEST_CASE("make_vector rejects non-finite input") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(AtomicVector::make({{nan, 1.0}}), ValidationError);
    CHECK_THROWS_AS(AtomicVector::make({{inf, 1.0}}), ValidationError);
    CHECK_THROWS_AS(AtomicVector::make({{0.0, Complex{1.0, nan}}}), ValidationError);
}

TEST_CASE("epsilon merge is opt-in") {
    const std::vector<std::pair<double, Complex>> pairs{{1.0, 1.0}, {1.0 + 1e-13, 1.0}, {2.0, 1.0}};
    CHECK(AtomicVector::make(pairs).size() == 3);
    const auto merged = AtomicVector::make(pairs, 1e-9);
    REQUIRE(merged.size() == 2);
    CHECK(merged.atoms()[0].c == Complex{2.0, 0.0});
    CHECK_THROWS_AS(AtomicVector::make(pairs, -1.0), ValidationError);
}

TEST_CASE("negative zero frequency is canonicalised") {
    const auto u = AtomicVector::make({{-0.0, 1.0}});
    CHECK_FALSE(std::signbit(u.atoms()[0].p));
    CHECK(serialize(u) == R"({"atoms":[{"p":0.0,"re":1.0,"im":0.0}]})");
}

TEST_CASE("inner product on unit atoms") {
    CHECK(inner(AtomicVector::unit(0), AtomicVector::unit(0)) == Complex{1.0, 0.0});
    CHECK(inner(AtomicVector::unit(0), AtomicVector::unit(1)) == Complex{0.0, 0.0});
    // conj(1+i) * 1
    CHECK(inner(AtomicVector::make({{2.0, 1.0 + 1i}}), AtomicVector::unit(2)) == Complex{1.0, -1.0});
}

TEST_CASE("norm, add and scale") {
    CHECK(norm(AtomicVector::unit(0)) == 1.0);
    CHECK(add(AtomicVector::unit(0), scale(-1.0, AtomicVector::unit(0))).empty());
    const auto u = add(AtomicVector::unit(1), AtomicVector::unit(2));
    CHECK(norm(scale(2.0, u)) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(scale(0.0, u).empty());
    CHECK(norm(AtomicVector{}) == 0.0);
}

TEST_CASE("serialize matches the documented schema") {
    CHECK(serialize(AtomicVector::unit(0)) == R"({"atoms":[{"p":0.0,"re":1.0,"im":0.0}]})");
}

TEST_CASE("deserialize merges duplicates and reports syntax positions") {
    const auto u = deserialize(R"({"atoms":[{"p":1.5,"re":1,"im":0},{"p":1.5,"re":0,"im":2}]})");
    REQUIRE(u.size() == 1);
    CHECK(u.atoms()[0] == Atom{1.5, Complex{1.0, 2.0}});

    try {
        deserialize(R"({"atoms":[{"p":1.5,"re":1,"im":0}, ]})");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        REQUIRE(e.position().has_value());
        CHECK(*e.position() > 30);
    }
    CHECK_THROWS_AS(deserialize(R"({"atoms":[{"p":1.5,"re":1}]})"), ParseError);
    CHECK_THROWS_AS(deserialize(R"({"vector":[]})"), ParseError);
}

TEST_CASE("property: Hermitian symmetry, Cauchy-Schwarz, idempotent make, round trip") {
    SeededRng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const auto u = gen::random_vector(rng);
        const auto v = trial % 2 ? gen::random_vector(rng) : add(u, gen::random_vector(rng));

        const Complex uv = inner(u, v);
        const Complex vu = inner(v, u);
        CHECK(uv == std::conj(vu));
        CHECK(std::abs(uv) <= norm(u) * norm(v) * (1.0 + 1e-12));
        CHECK(norm_squared(u) == doctest::Approx(inner(u, u).real()).epsilon(1e-15));

        std::vector<std::pair<double, Complex>> again;
        for (const Atom& a : u.atoms()) again.emplace_back(a.p, a.c);
        CHECK(AtomicVector::make(again) == u);

        CHECK(deserialize(serialize(u)) == u);
        const std::string text = serialize(v);
        CHECK(serialize(deserialize(text)) == text);
    }
}

TEST_CASE("oracle: inner product equals a dense dot product on an integer grid") {
    SeededRng rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Complex> du(21, Complex{}), dv(21, Complex{});
        std::vector<std::pair<double, Complex>> pu, pv;
        for (int k = 0; k < 8; ++k) {
            const int i = static_cast<int>(rng.next_u64() % 21);
            const int j = static_cast<int>(rng.next_u64() % 21);
            const Complex a = gen::random_complex(rng), b = gen::random_complex(rng);
            du[static_cast<std::size_t>(i)] += a;
            dv[static_cast<std::size_t>(j)] += b;
            pu.emplace_back(i - 10, a);
            pv.emplace_back(j - 10, b);
        }
        Complex dense{};
        for (std::size_t k = 0; k < 21; ++k) dense += std::conj(du[k]) * dv[k];
        const Complex sparse = inner(AtomicVector::make(pu), AtomicVector::make(pv));
        CHECK(std::abs(sparse - dense) <= 1e-12 * (1.0 + std::abs(dense)));
    }
}
