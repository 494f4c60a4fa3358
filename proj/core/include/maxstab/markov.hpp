#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maxstab/algebra.hpp"
#include "maxstab/rng.hpp"

namespace maxstab {

/// Finite Markov chain over modes 1..M with a row-stochastic transition
/// matrix. Construction validates: entries in [0, 1], each row summing to
/// one within kRowSumTolerance; throws NotStochastic otherwise.
class MarkovChain {
public:
    static constexpr double kRowSumTolerance = 1e-12;

    explicit MarkovChain(const std::vector<std::vector<double>>& transition);

    int mode_count() const noexcept { return modes_; }

    /// P(y+ = to | y = from); modes are 1-based.
    double transition(int from, int to) const;

    /// Row of transition probabilities for a 1-based mode.
    std::span<const double> row(int from) const;

private:
    int modes_;
    std::vector<double> c_;  // row-major
};

/// Mode-indexed families A(y) (and optionally B(y), C(y)) sharing one
/// algebra. Max-product system matrices must be finite and nonnegative;
/// max-plus ones must stay below +inf.
class JumpLinearSystem {
public:
    JumpLinearSystem(Algebra algebra, std::vector<SemiringMatrix> a,
                     std::optional<std::vector<SemiringMatrix>> b = std::nullopt,
                     std::optional<std::vector<SemiringMatrix>> c = std::nullopt);

    Algebra algebra() const noexcept { return algebra_; }
    int state_dim() const noexcept { return state_dim_; }
    int mode_count() const noexcept { return static_cast<int>(a_.size()); }
    bool has_input() const noexcept { return b_.has_value(); }
    bool has_output() const noexcept { return c_.has_value(); }
    int input_dim() const noexcept { return input_dim_; }
    int output_dim() const noexcept { return output_dim_; }

    /// System matrix for a 1-based mode.
    const SemiringMatrix& system_matrix(int mode) const;
    const SemiringMatrix& input_matrix(int mode) const;
    const SemiringMatrix& output_matrix(int mode) const;

private:
    void check_mode(int mode) const;

    Algebra algebra_;
    int state_dim_;
    int input_dim_ = 0;
    int output_dim_ = 0;
    std::vector<SemiringMatrix> a_;
    std::optional<std::vector<SemiringMatrix>> b_;
    std::optional<std::vector<SemiringMatrix>> c_;
};

/// A realized mode path y_0..y_horizon together with the seed it came from.
struct ModeSequence {
    std::vector<int> modes;  // 1-based
    std::uint64_t seed = 0;
};

/// Draws y_0 = y0 and y_{k+1} from row y_k of the chain. Identical seeds
/// give identical sequences on every platform.
ModeSequence sample_modes(const MarkovChain& chain, int y0, int horizon,
                          std::uint64_t seed);

struct StepResult {
    std::vector<double> state;
    std::optional<std::vector<double>> output;
};

/// One transition x+ = A(y) ∘ x ∨ B(y) ∘ u, plus z = C(y) ∘ x when an
/// output map is present. The input u is required exactly when the system
/// has input matrices.
StepResult step(const JumpLinearSystem& sys, std::span<const double> x, int mode,
                std::span<const double> u = {});

/// Whether step k of a driven simulation consumes u_k or u_{k+1}.
enum class InputTiming { Current, Next };

/// Input signal for driven simulations. Either an explicit per-step array,
/// a constant level, or the affine feed u_k = k*T + delta_k with the jitter
/// delta_k given explicitly, drawn uniformly from [-bound, bound], or zero.
class InputSignal {
public:
    static InputSignal explicit_sequence(std::vector<std::vector<double>> values,
                                         InputTiming timing = InputTiming::Current);
    static InputSignal constant(std::vector<double> level,
                                InputTiming timing = InputTiming::Current);
    static InputSignal affine(double period, InputTiming timing = InputTiming::Current);
    static InputSignal affine_jittered(std::vector<double> jitter, double period,
                                       InputTiming timing = InputTiming::Current);
    static InputSignal affine_uniform_jitter(double period, double bound,
                                             InputTiming timing = InputTiming::Current);

    InputTiming timing() const noexcept { return timing_; }

    /// Materializes u_0..u_horizon as input_dim-vectors. Affine signals
    /// broadcast the scalar value across components; uniform jitter draws
    /// delta_0..delta_horizon from the supplied stream.
    std::vector<std::vector<double>> realize(int input_dim, int horizon,
                                             SplitMix64& jitter_rng) const;

private:
    enum class Kind { Explicit, Constant, Affine };

    InputSignal(Kind kind, InputTiming timing) : kind_(kind), timing_(timing) {}

    Kind kind_;
    InputTiming timing_;
    std::vector<std::vector<double>> values_;
    std::vector<double> level_;
    std::vector<double> jitter_;
    double period_ = 0.0;
    double jitter_bound_ = 0.0;
};

}  // namespace maxstab
