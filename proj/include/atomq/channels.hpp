#pragma once

// Quantum states as functionals on the operator algebra, the shift channel
// T_h rho = S_h rho S_h^*, the modulation (dephasing) channel Phi_h, their
// averages over a random parameter, and the normal/singular decomposition.

#include "atomq/algebra.hpp"
#include "atomq/rand.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace atomq {

inline constexpr double kStateTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

/// rho_u with <rho_u, A> = (u, A u).
struct PureState {
    AtomicVector u;

    /// Throws ValidationError unless |norm(u) - 1| <= kStateTolerance.
    static PureState make(AtomicVector u);
    /// Divides by the norm first.
    static PureState normalized(const AtomicVector& u);
};

/// Density matrix on span{1_{p_1}, ..., 1_{p_m}}:
/// rho = sum_jk rho_jk |1_{p_j}><1_{p_k}|.
struct NormalState {
    std::vector<double> support;  // strictly increasing
    Eigen::MatrixXcd matrix;

    /// Checks ordering, Hermiticity, unit trace and positivity.
    static NormalState make(std::vector<double> support, Eigen::MatrixXcd matrix);
    static NormalState from_pure(const PureState& s);
    /// Eigen-decomposition into an ensemble of pure states.
    std::vector<std::pair<double, PureState>> spectral_ensemble() const;
};

/// Finite convex combination of pure states.
struct MixedState {
    std::vector<std::pair<double, PureState>> components;

    static MixedState make(std::vector<std::pair<double, PureState>> components);
};

using BaseState = std::variant<PureState, NormalState, MixedState>;

/// Lazy functional A -> E <T_{xi_k} ... T_{xi_1} rho, A> for independent
/// shifts xi_1, ..., xi_k. Never materialised as a matrix.
struct AveragedState {
    BaseState base;
    std::vector<Distribution> smoothing;  // applied first to last

    /// True when the total shift has no atoms, i.e. some factor is purely continuous.
    bool is_singular() const;
};

struct ConvexState;

using State = std::variant<PureState, NormalState, MixedState, AveragedState, ConvexState>;

/// Convex combination of arbitrary states.
struct ConvexState {
    struct Component {
        double weight;
        std::shared_ptr<const State> state;
    };
    std::vector<Component> components;

    static ConvexState make(std::vector<std::pair<double, State>> components);
};

Complex evaluate(const State& s, const AlgebraElement& A);
Complex evaluate(const BaseState& s, const AlgebraElement& A);

/// T_h: pure vectors are shifted, normal supports move to p - h.
State channel_T(double h, const State& s);
BaseState channel_T(double h, const BaseState& s);

AveragedState averaged_T(const Distribution& d, const BaseState& s);
/// Averaging an averaged state appends the law; convex states map componentwise.
State averaged_T(const Distribution& d, const State& s);

enum class ExpectationMethod {
    Auto,        // closed form where available, adaptive quadrature otherwise
    Analytic,    // closed form only; UnsupportedError if there is none
    Quadrature,  // always integrate numerically against the densities
    MonteCarlo,  // sample the shifts
};

struct MonteCarloOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 100000;
    unsigned threads = 1;
    std::size_t chunk_size = 4096;
};

/// Value with standard error (zero for deterministic methods).
struct Estimate {
    Complex value{};
    double std_error = 0.0;
};

/// The smoothed function g(x) = E f(x - xi_1 - ... - xi_k). For a single
/// shift xi this is E f(x - xi).
BoundedFunction smoothed_function(const BoundedFunction& f, std::span<const Distribution> laws,
                                  ExpectationMethod method = ExpectationMethod::Auto);

/// <avg, M_f> = sum over base entries of the smoothed function at the support.
Estimate eval_averaged_on_mult(const AveragedState& avg, const BoundedFunction& f,
                               ExpectationMethod method = ExpectationMethod::Auto,
                               const MonteCarloOptions& mc = {});

/// <avg, sum_j w_j S_{a_j}>; equal to the value on the base state.
Complex eval_averaged_on_shift_convolution(const AveragedState& avg, const AtomicMeasure& m);

/// <avg, P_v>. The analytic path sums the atoms of the total shift (the
/// continuous part contributes nothing); the Monte Carlo path averages
/// |(S_xi u, v)|^2 over sampled shifts.
Estimate projector_value(const AveragedState& avg, const AtomicVector& v,
                         ExpectationMethod method = ExpectationMethod::Analytic, const MonteCarloOptions& mc = {});

/// <s, P_v> for any state.
double projector_value(const State& s, const AtomicVector& v);

/// max over the family of <s, P_F>, P_F the projector onto span{1_p : p in F}.
double normality_witness(const State& s, std::span<const std::vector<double>> family);

/// rho_jk -> exp(i h (p_j - p_k)) rho_jk
NormalState channel_Phi(double h, const NormalState& s);
/// rho_jk -> chi(p_j - p_k) rho_jk
NormalState averaged_Phi(const Distribution& d, const NormalState& s);

struct MatrixEstimate {
    Eigen::MatrixXcd mean;
    Eigen::MatrixXd std_error;
};
/// Entrywise Monte Carlo mean of channel_Phi(xi, s).
MatrixEstimate averaged_Phi_monte_carlo(const Distribution& d, const NormalState& s, const MonteCarloOptions& mc);

State semigroup_T(const ConvolutionFamily& fam, double t, const State& s);
NormalState semigroup_Phi(const ConvolutionFamily& fam, double t, const NormalState& s);

struct StateDecomposition {
    double p = 0.0;
    std::optional<MixedState> normal_part;
    std::optional<ConvexState> singular_part;  // every component is a singular AveragedState

    /// p * normal + (1 - p) * singular as a single state.
    State recombined() const;
};

/// Splits a state into normal and singular parts. Averaged states whose
/// shift law has atoms contribute their atomic part to the normal side.
StateDecomposition yosida_hewitt_split(const State& s);

/// Convenience: density-matrix checks used by property tests.
double hermiticity_defect(const Eigen::MatrixXcd& m);
double min_eigenvalue(const Eigen::MatrixXcd& m);

} // namespace atomq
