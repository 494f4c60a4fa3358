#include "maxstab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "maxstab/rng.hpp"

namespace maxstab {

namespace {

void require_free_max_product(const JumpLinearSystem& sys, const MarkovChain& chain) {
    if (sys.algebra() != Algebra::MaxProduct) {
        throw AlgebraMismatch("stochastic certificates apply to max-product systems; "
                              "transform max-plus systems first");
    }
    if (sys.mode_count() != chain.mode_count()) {
        throw DimensionMismatch("system has " + std::to_string(sys.mode_count()) +
                                " modes but the chain has " +
                                std::to_string(chain.mode_count()));
    }
}

void require_positive_weights(std::span<const double> vec) {
    for (double v : vec) {
        if (!(v > 0.0) || v == kInf) {
            throw DomainError("weight entries must be strictly positive finite");
        }
    }
}

void require_p_family(const std::vector<std::vector<double>>& p, int n, int modes) {
    if (static_cast<int>(p.size()) != modes) {
        throw DimensionMismatch("need one weight vector per mode");
    }
    for (const auto& vec : p) {
        if (static_cast<int>(vec.size()) != n) {
            throw DimensionMismatch("weight vectors must have length " + std::to_string(n));
        }
        require_positive_weights(vec);
    }
}

// Largest element of the rescaled matrix without materializing it.
double max_tilde_element(const SemiringMatrix& a_bar, std::span<const double> p_next,
                         std::span<const double> p_cur) {
    double best = 0.0;
    for (int r = 0; r < a_bar.rows(); ++r) {
        for (int s = 0; s < a_bar.cols(); ++s) {
            best = raw_join(best, p_next[r] * a_bar.at(r, s) / p_cur[s]);
        }
    }
    return best;
}

std::size_t checked_path_count(int modes, int k0, std::size_t cap) {
    std::size_t count = 1;
    for (int t = 0; t < k0; ++t) {
        if (count > cap / static_cast<std::size_t>(modes)) {
            throw PathExplosion("enumerating " + std::to_string(modes) + "^" +
                                std::to_string(k0) + " mode paths exceeds the cap of " +
                                std::to_string(cap));
        }
        count *= static_cast<std::size_t>(modes);
    }
    return count;
}

// All mode paths of length k0 - 1 out of each start mode, with the running
// matrix product A(j_d) ∘ ... ∘ A(j_1) ∘ A(i) and prefix probability.
// Terminal modes are expanded at evaluation time.
struct PathEntry {
    double prob;
    int last_mode;
    SemiringMatrix product;
};

struct PathTable {
    int k0;
    std::vector<std::vector<PathEntry>> per_start;  // indexed by start mode - 1
};

PathTable build_path_table(const JumpLinearSystem& sys, const MarkovChain& chain, int k0,
                           std::size_t cap) {
    if (k0 < 1) throw DomainError("k0 must be at least 1");
    checked_path_count(sys.mode_count(), k0, cap);

    PathTable table;
    table.k0 = k0;
    table.per_start.resize(static_cast<std::size_t>(sys.mode_count()));
    for (int start = 1; start <= sys.mode_count(); ++start) {
        auto& entries = table.per_start[start - 1];
        entries.push_back({1.0, start, sys.system_matrix(start)});
        for (int depth = 1; depth < k0; ++depth) {
            std::vector<PathEntry> extended;
            extended.reserve(entries.size() * static_cast<std::size_t>(sys.mode_count()));
            for (const PathEntry& e : entries) {
                for (int j = 1; j <= sys.mode_count(); ++j) {
                    extended.push_back({e.prob * chain.transition(e.last_mode, j), j,
                                        mat_mul(sys.system_matrix(j), e.product)});
                }
            }
            entries = std::move(extended);
        }
    }
    return table;
}

std::vector<double> deltas_from_table(const PathTable& table, const MarkovChain& chain,
                                      const std::vector<std::vector<double>>& p) {
    std::vector<double> delta(table.per_start.size(), 0.0);
    for (std::size_t start = 0; start < table.per_start.size(); ++start) {
        double acc = 0.0;
        for (const PathEntry& e : table.per_start[start]) {
            for (int terminal = 1; terminal <= chain.mode_count(); ++terminal) {
                const double prob = e.prob * chain.transition(e.last_mode, terminal);
                acc += prob * max_tilde_element(e.product, p[terminal - 1], p[start]);
            }
        }
        delta[start] = acc;
    }
    return delta;
}

StochasticCheck check_from_deltas(std::vector<double> delta) {
    StochasticCheck check;
    check.delta = std::move(delta);
    const auto worst = std::max_element(check.delta.begin(), check.delta.end());
    check.worst_mode = static_cast<int>(worst - check.delta.begin()) + 1;
    check.accepted = *worst < 1.0;
    return check;
}

}  // namespace

double Certificate::max_delta() const {
    return *std::max_element(delta.begin(), delta.end());
}

double StochasticCheck::max_delta() const {
    return *std::max_element(delta.begin(), delta.end());
}

SemiringMatrix tilde_matrix(const SemiringMatrix& a_bar, std::span<const double> p_next,
                            std::span<const double> p_cur) {
    if (a_bar.algebra() != Algebra::MaxProduct) {
        throw AlgebraMismatch("rescaling applies to max-product matrices");
    }
    if (static_cast<int>(p_next.size()) != a_bar.rows() ||
        static_cast<int>(p_cur.size()) != a_bar.cols()) {
        throw DimensionMismatch("weight vector lengths do not match the matrix");
    }
    require_positive_weights(p_next);
    require_positive_weights(p_cur);
    SemiringMatrix out(a_bar.rows(), a_bar.cols(), Algebra::MaxProduct);
    for (int r = 0; r < a_bar.rows(); ++r) {
        for (int s = 0; s < a_bar.cols(); ++s) {
            out.set(r, s, p_next[r] * a_bar.at(r, s) / p_cur[s]);
        }
    }
    return out;
}

StochasticCheck verify_one_step(const JumpLinearSystem& sys, const MarkovChain& chain,
                                const std::vector<std::vector<double>>& p) {
    require_free_max_product(sys, chain);
    require_p_family(p, sys.state_dim(), sys.mode_count());

    std::vector<double> delta(static_cast<std::size_t>(sys.mode_count()), 0.0);
    for (int i = 1; i <= sys.mode_count(); ++i) {
        double acc = 0.0;
        for (int j = 1; j <= sys.mode_count(); ++j) {
            acc += chain.transition(i, j) *
                   max_tilde_element(sys.system_matrix(i), p[j - 1], p[i - 1]);
        }
        delta[i - 1] = acc;
    }
    return check_from_deltas(std::move(delta));
}

StochasticCheck verify_k_step(const JumpLinearSystem& sys, const MarkovChain& chain,
                              const std::vector<std::vector<double>>& p, int k0,
                              std::size_t path_cap) {
    require_free_max_product(sys, chain);
    require_p_family(p, sys.state_dim(), sys.mode_count());
    const PathTable table = build_path_table(sys, chain, k0, path_cap);
    return check_from_deltas(deltas_from_table(table, chain, p));
}

double brute_expectation(const JumpLinearSystem& sys, const MarkovChain& chain,
                         const std::vector<std::vector<double>>& p,
                         std::span<const double> x, int y, int k0,
                         std::size_t path_cap) {
    require_free_max_product(sys, chain);
    require_p_family(p, sys.state_dim(), sys.mode_count());
    if (static_cast<int>(x.size()) != sys.state_dim()) {
        throw DimensionMismatch("state vector length does not match the system");
    }
    if (k0 < 0) throw DomainError("k0 must be nonnegative");
    checked_path_count(chain.mode_count(), k0, path_cap);

    const auto value = [&p](const std::vector<double>& state, int mode) {
        double best = 0.0;
        for (std::size_t s = 0; s < state.size(); ++s) {
            best = raw_join(best, p[mode - 1][s] * state[s]);
        }
        return best;
    };

    const std::function<double(const std::vector<double>&, int, int, double)> walk =
        [&](const std::vector<double>& state, int mode, int depth, double prob) -> double {
        if (depth == k0) return prob * value(state, mode);
        const std::vector<double> next = mat_apply(sys.system_matrix(mode), state);
        double acc = 0.0;
        for (int j = 1; j <= chain.mode_count(); ++j) {
            acc += walk(next, j, depth + 1, prob * chain.transition(mode, j));
        }
        return acc;
    };

    return walk({x.begin(), x.end()}, y, 0, 1.0);
}

std::optional<Certificate> search_certificate(const JumpLinearSystem& sys,
                                              const MarkovChain& chain, int k0_max,
                                              const SearchOptions& opts) {
    require_free_max_product(sys, chain);
    if (k0_max < 1) throw DomainError("k0_max must be at least 1");
    if (!(opts.margin > 0.0 && opts.margin < 1.0)) {
        throw DomainError("margin must lie in (0, 1)");
    }

    const int n = sys.state_dim();
    const int modes = sys.mode_count();
    const int dim = n * modes;
    const double target = 1.0 - opts.margin;

    const auto family_of = [n, modes](const std::vector<double>& q) {
        std::vector<std::vector<double>> p(static_cast<std::size_t>(modes));
        for (int m = 0; m < modes; ++m) {
            p[m].resize(static_cast<std::size_t>(n));
            for (int s = 0; s < n; ++s) p[m][s] = std::exp(q[m * n + s]);
        }
        return p;
    };

    for (int k0 = 1; k0 <= k0_max; ++k0) {
        const PathTable table = build_path_table(sys, chain, k0, opts.path_cap);
        const auto objective = [&](const std::vector<double>& q) {
            const std::vector<double> delta = deltas_from_table(table, chain, family_of(q));
            return *std::max_element(delta.begin(), delta.end());
        };

        for (int restart = 0; restart < opts.restarts; ++restart) {
            SplitMix64 rng(derive_stream(derive_stream(opts.seed, k0), restart));
            std::vector<double> q(static_cast<std::size_t>(dim));
            for (double& v : q) v = rng.uniform(-3.0, 3.0);
            q[0] = 0.0;  // gauge: first coordinate of p(1) stays pinned at 1

            double best = objective(q);
            double step = opts.initial_step;
            for (int sweep = 0; sweep < opts.sweeps && best > target; ++sweep) {
                bool improved = false;
                for (int c = 1; c < dim && best > target; ++c) {
                    const double original = q[c];
                    double best_move = original;
                    for (const double candidate : {original + step, original - step}) {
                        q[c] = candidate;
                        const double val = objective(q);
                        if (val < best) {
                            best = val;
                            best_move = candidate;
                            improved = true;
                        }
                    }
                    q[c] = best_move;
                }
                if (!improved) {
                    step *= opts.step_shrink;
                    if (step < opts.min_step) break;
                }
            }

            if (best <= target) {
                const std::vector<std::vector<double>> p = family_of(q);
                const StochasticCheck check =
                    verify_k_step(sys, chain, p, k0, opts.path_cap);
                if (check.accepted && check.max_delta() <= target) {
                    return Certificate{k0, p, check.delta};
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace maxstab
