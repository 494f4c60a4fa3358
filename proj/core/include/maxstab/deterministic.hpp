#pragma once

#include <optional>
#include <span>
#include <vector>

#include "maxstab/algebra.hpp"

namespace maxstab {

/// A verified one-mode contraction certificate: a strictly positive vector p
/// with Aᵀ ∘ p < p entrywise. slack is the worst multiplicative ratio
/// max_i (Aᵀ ∘ p)_i / p_i; strictly below one for a valid certificate.
struct DetCertificate {
    std::vector<double> p;
    double slack = 0.0;
};

/// Outcome of checking a candidate p against a matrix.
struct DetCheck {
    bool accepted = false;
    double slack = 0.0;              ///< max_i image[i] / p[i]
    std::vector<double> image;       ///< Aᵀ ∘ p (equivalently pᵀ ∘ A)
    int violating_index = -1;        ///< 0-based worst constraint when rejected
};

/// Maximum cycle mean of the weighted digraph induced by a square matrix:
/// arithmetic mean of arc weights in max-plus, geometric mean in max-product
/// (computed through logs). Acyclic matrices give -inf / 0 respectively.
///
/// Uses Karp's recurrence over walks from a virtual source, so vertices
/// need not be strongly connected.
double max_cycle_mean(const SemiringMatrix& a);

/// True iff the free iteration x(k+1) = A ∘ x(k) contracts exponentially,
/// i.e. the max cycle mean is strictly below the multiplicative identity.
bool is_exponentially_stable(const SemiringMatrix& a);

/// Checks Aᵀ ∘ p < p entrywise for a strictly positive p (max-product).
/// Acceptance is decided by the entrywise strict comparison, not by
/// rounding the slack ratio.
DetCheck verify_det_certificate(const SemiringMatrix& a, std::span<const double> p);

/// Searches for p > 0 with A_{ji} p_j <= (1 - margin) p_i for every arc.
///
/// In q = ln p these are difference constraints
///     q_j + ln A_{ji} + ln(1/(1-margin)) <= q_i,
/// solved exactly by Bellman-Ford relaxation from a virtual source; an
/// improving pass after n rounds means a negative constraint cycle, which
/// happens iff some cycle of A has geometric mean above 1 - margin.
/// Returns std::nullopt in that case.
std::optional<DetCertificate> find_det_certificate(const SemiringMatrix& a, double margin);

/// p = λᵀ ∘ A⁺ for a strictly positive weighting λ. The induced value
/// function V(x) = pᵀ ∘ x is non-increasing along trajectories of the free
/// system. Throws Divergent when A is not stable.
std::vector<double> lyapunov_from_lambda(const SemiringMatrix& a,
                                         std::span<const double> lambda);

}  // namespace maxstab
