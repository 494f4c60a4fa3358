#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maxstab/markov.hpp"

namespace maxstab {

/// Mode-indexed family of strictly positive Lyapunov weight vectors,
/// together with the verified per-mode contraction factors over k0 steps.
/// Valid when every delta is strictly below one.
struct Certificate {
    int k0 = 1;
    std::vector<std::vector<double>> p;  ///< one strictly positive n-vector per mode
    std::vector<double> delta;           ///< per-mode expected contraction

    double max_delta() const;
};

/// Outcome of a certificate verification: per-mode deltas and the worst
/// offender. Accepted iff every delta is strictly below one.
struct StochasticCheck {
    bool accepted = false;
    std::vector<double> delta;
    int worst_mode = 1;  ///< 1-based mode attaining the largest delta
    double max_delta() const;
};

/// Rescales a transition-product matrix into the coordinates where the
/// Lyapunov value is the plain infinity norm: entry (r,s) becomes
/// p_next[r] * A(r,s) / p_cur[s]. Its largest element is 1ᵀ ∘ Ã ∘ 1.
SemiringMatrix tilde_matrix(const SemiringMatrix& a_bar, std::span<const double> p_next,
                            std::span<const double> p_cur);

/// One-step expected-contraction check for the free max-product system:
/// for each start mode i,
///   delta_i = sum_j c_{ij} * (p(j)ᵀ ∘ A(i) ∘ p⁻¹(i))
/// where p⁻¹ holds entrywise inverses; each summand is the max element of
/// the corresponding rescaled matrix. Accepted iff max_i delta_i < 1.
StochasticCheck verify_one_step(const JumpLinearSystem& sys, const MarkovChain& chain,
                                const std::vector<std::vector<double>>& p);

/// k0-step generalization: paths (j_1..j_{k0-1}) with terminal mode i'
/// carry probability c_{i j_1} c_{j_1 j_2} ... c_{j_{k0-1} i'} and the
/// matrix product A(j_{k0-1}) ∘ ... ∘ A(j_1) ∘ A(i) — k0 applications in
/// total, the first being the start mode's own matrix. delta_i sums the
/// max elements of the rescaled products. k0 = 1 reduces exactly to
/// verify_one_step. Throws PathExplosion when M^k0 exceeds path_cap.
StochasticCheck verify_k_step(const JumpLinearSystem& sys, const MarkovChain& chain,
                              const std::vector<std::vector<double>>& p, int k0,
                              std::size_t path_cap = 100000);

/// Exact E[ p(y_{k0})ᵀ ∘ x_{k0} | x_0 = x, y_0 = y ] by enumerating all
/// M^k0 mode continuations with their probabilities. The defining
/// expectation, used as the independent check of the delta bounds.
double brute_expectation(const JumpLinearSystem& sys, const MarkovChain& chain,
                         const std::vector<std::vector<double>>& p,
                         std::span<const double> x, int y, int k0,
                         std::size_t path_cap = 100000);

struct SearchOptions {
    double margin = 0.05;        ///< accept when max_i delta_i <= 1 - margin
    int restarts = 64;           ///< independent multi-starts per k0
    int sweeps = 500;            ///< coordinate-descent sweeps per start
    double initial_step = 1.0;   ///< first log-space step size
    double step_shrink = 0.5;    ///< applied when a sweep fails to improve
    double min_step = 1e-6;      ///< termination threshold
    std::uint64_t seed = 0;
    std::size_t path_cap = 100000;
};

/// Searches for a certificate at k0 = 1, 2, ..., k0_max, in that order.
///
/// Works in q = ln p (the feasible set is a cone; a common positive scaling
/// of all p(y) never changes the deltas, so the first coordinate of p(1)
/// stays pinned at one). Each restart draws q uniformly from [-3, 3]^{nM}
/// and runs coordinate descent on max_i delta_i with a shrinking step.
/// The first iterate reaching 1 - margin is re-verified with verify_k_step
/// and returned.
///
/// std::nullopt means no certificate was found; it is NOT a proof of
/// instability (larger k0 may still succeed).
std::optional<Certificate> search_certificate(const JumpLinearSystem& sys,
                                              const MarkovChain& chain, int k0_max,
                                              const SearchOptions& opts = {});

}  // namespace maxstab
