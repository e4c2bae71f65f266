#pragma once

// Seeded random inputs for property checks. Shared by the unit tests, the
// acceptance suite and the verify command.

#include "atomq/channels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace atomq::gen {

inline Complex random_complex(SeededRng& rng) { return {rng.normal(), rng.normal()}; }

/// 1..max_atoms atoms at continuous frequencies in [-10, 10].
inline AtomicVector random_vector(SeededRng& rng, std::size_t max_atoms = 6) {
    const std::size_t n = 1 + rng.next_u64() % max_atoms;
    std::vector<std::pair<double, Complex>> pairs;
    for (std::size_t k = 0; k < n; ++k) pairs.emplace_back(-10.0 + 20.0 * rng.uniform(), random_complex(rng));
    return AtomicVector::make(pairs);
}

/// Frequencies on the grid k/8, |k| <= 40, so sums and differences are exact.
inline double dyadic(SeededRng& rng, int half_range = 40) {
    const auto k = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(2 * half_range + 1)) - half_range;
    return static_cast<double>(k) / 8.0;
}

inline AtomicVector dyadic_vector(SeededRng& rng, std::size_t max_atoms = 6, int half_range = 40) {
    const std::size_t n = 1 + rng.next_u64() % max_atoms;
    std::vector<std::pair<double, Complex>> pairs;
    for (std::size_t k = 0; k < n; ++k) pairs.emplace_back(dyadic(rng, half_range), random_complex(rng));
    return AtomicVector::make(pairs);
}

inline PureState random_pure(SeededRng& rng, bool on_grid = true, std::size_t max_atoms = 5) {
    AtomicVector u = on_grid ? dyadic_vector(rng, max_atoms, 16) : random_vector(rng, max_atoms);
    while (u.empty()) u = on_grid ? dyadic_vector(rng, max_atoms, 16) : random_vector(rng, max_atoms);
    return PureState::normalized(u);
}

/// Random density matrix G G^* / tr(G G^*) of random rank on m distinct grid points.
inline NormalState random_normal(SeededRng& rng, std::size_t m) {
    std::vector<double> support;
    while (support.size() < m) {
        const double p = dyadic(rng, 16);
        if (std::find(support.begin(), support.end(), p) == support.end()) support.push_back(p);
    }
    std::sort(support.begin(), support.end());
    const auto n = static_cast<Eigen::Index>(m);
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng.next_u64() % m);
    Eigen::MatrixXcd g(n, rank);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < rank; ++k) g(j, k) = random_complex(rng);
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return NormalState::make(std::move(support), std::move(rho));
}

inline MixedState random_mixed(SeededRng& rng, std::size_t components = 3) {
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t k = 0; k < components; ++k) {
        w.push_back(0.1 + rng.uniform());
        total += w.back();
    }
    std::vector<std::pair<double, PureState>> parts;
    double used = 0.0;
    for (std::size_t k = 0; k < components; ++k) {
        const double weight = k + 1 == components ? 1.0 - used : w[k] / total;
        used += weight;
        parts.emplace_back(weight, random_pure(rng));
    }
    return MixedState::make(std::move(parts));
}

/// Random algebra element with up to `terms` terms built from shapes that
/// serialise, shifts on the dyadic grid.
inline AlgebraElement random_element(SeededRng& rng, std::size_t terms = 3) {
    std::vector<AlgebraTerm> out;
    const std::size_t n = 1 + rng.next_u64() % terms;
    for (std::size_t k = 0; k < n; ++k) {
        BoundedFunction f = BoundedFunction::one();
        switch (rng.next_u64() % 4) {
            case 0: break;
            case 1: {
                const double lo = dyadic(rng, 16);
                f = BoundedFunction::indicator(lo, lo + 1.0 + std::abs(dyadic(rng, 16)));
                break;
            }
            case 2: f = BoundedFunction::exponential(dyadic(rng, 16)); break;
            default: f = BoundedFunction::point_set({{dyadic(rng, 16), random_complex(rng)}, {dyadic(rng, 16), 1.0}}); break;
        }
        out.push_back({random_complex(rng), f, dyadic(rng, 8)});
    }
    return AlgebraElement(std::move(out));
}

} // namespace atomq::gen
