#pragma once

// Test-only oracles. These deliberately avoid every algorithmic shortcut the
// library takes (Karp recurrence, Bellman-Ford, truncated closures) so they
// can serve as independent references.

#include <cmath>
#include <functional>
#include <vector>

#include "maxstab/algebra.hpp"
#include "maxstab/rng.hpp"

namespace oracles {

inline constexpr double kNegInf = -maxstab::kInf;

/// Max mean over all simple cycles, by exhaustive DFS enumeration in the
/// canonical form where the smallest vertex of the cycle is the start.
/// Weights are additive; kNegInf marks a missing arc. Returns kNegInf for
/// acyclic graphs. Usable up to n ~ 8.
inline double max_cycle_mean_enumerated(const std::vector<std::vector<double>>& w) {
    const int n = static_cast<int>(w.size());
    double best = kNegInf;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::function<void(int, int, double, int)> dfs = [&](int start, int v, double sum,
                                                         int arcs) {
        for (int j = 0; j < n; ++j) {
            const double arc = w[v][j];
            if (arc == kNegInf) continue;
            if (j == start) {
                const double mean = (sum + arc) / (arcs + 1);
                if (mean > best) best = mean;
            } else if (j > start && !used[j]) {
                used[j] = 1;
                dfs(start, j, sum + arc, arcs + 1);
                used[j] = 0;
            }
        }
    };
    for (int s = 0; s < n; ++s) dfs(s, s, 0.0, 0);
    return best;
}

/// Additive-domain arc weights of a semiring matrix (logs for max-product).
inline std::vector<std::vector<double>> arc_weights(const maxstab::SemiringMatrix& a) {
    std::vector<std::vector<double>> w(static_cast<std::size_t>(a.rows()),
                                       std::vector<double>(static_cast<std::size_t>(a.cols())));
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            const double v = a.at(i, j);
            w[i][j] = a.algebra() == maxstab::Algebra::MaxPlus
                          ? v
                          : (v == 0.0 ? kNegInf : std::log(v));
        }
    }
    return w;
}

/// Cycle-mean oracle in the matrix's own algebra.
inline double max_cycle_mean_oracle(const maxstab::SemiringMatrix& a) {
    const double mean = max_cycle_mean_enumerated(arc_weights(a));
    if (a.algebra() == maxstab::Algebra::MaxPlus) return mean;
    return mean == kNegInf ? 0.0 : std::exp(mean);
}

/// Plain triple-loop product for finite nonnegative max-product matrices.
inline maxstab::SemiringMatrix brute_mat_mul(const maxstab::SemiringMatrix& a,
                                             const maxstab::SemiringMatrix& b) {
    maxstab::SemiringMatrix out(a.rows(), b.cols(), a.algebra());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            double best = 0.0;
            for (int p = 0; p < a.cols(); ++p) {
                const double term = a.at(i, p) * b.at(p, j);
                if (term > best) best = term;
            }
            out.set(i, j, best);
        }
    }
    return out;
}

/// Random max-product matrix with entries uniform in [lo, hi] and an
/// independent chance of an exact zero per entry.
inline maxstab::SemiringMatrix random_max_product(maxstab::SplitMix64& rng, int rows,
                                                  int cols, double lo, double hi,
                                                  double zero_prob = 0.0) {
    maxstab::SemiringMatrix m(rows, cols, maxstab::Algebra::MaxProduct);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (zero_prob > 0.0 && rng.uniform01() < zero_prob) continue;
            m.set(i, j, rng.uniform(lo, hi));
        }
    }
    return m;
}

/// Random max-plus matrix with entries uniform in [lo, hi] and an
/// independent chance of a missing arc per entry.
inline maxstab::SemiringMatrix random_max_plus(maxstab::SplitMix64& rng, int rows, int cols,
                                               double lo, double hi,
                                               double missing_prob = 0.0) {
    maxstab::SemiringMatrix m(rows, cols, maxstab::Algebra::MaxPlus);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (missing_prob > 0.0 && rng.uniform01() < missing_prob) continue;
            m.set(i, j, rng.uniform(lo, hi));
        }
    }
    return m;
}

inline std::vector<double> random_positive_vector(maxstab::SplitMix64& rng, int n,
                                                  double lo, double hi) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

}  // namespace oracles
