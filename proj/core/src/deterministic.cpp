#include "maxstab/deterministic.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace maxstab {

namespace {

// Arc weights in the additive domain: the entry itself for max-plus,
// ln(entry) for max-product. Additive-identity entries produce no arc
// (represented as -inf).
std::vector<double> additive_weights(const SemiringMatrix& a) {
    std::vector<double> w(a.data().begin(), a.data().end());
    if (a.algebra() == Algebra::MaxProduct) {
        for (double& v : w) v = (v == 0.0) ? -kInf : std::log(v);
    }
    for (double v : w) {
        if (v == kInf) throw DomainError("cycle means need entries below +inf");
    }
    return w;
}

void require_positive(std::span<const double> p, const char* what) {
    if (p.empty()) throw DimensionMismatch(std::string(what) + " must be nonempty");
    for (double v : p) {
        if (!(v > 0.0) || v == kInf) {
            throw DomainError(std::string(what) + " entries must be strictly positive finite");
        }
    }
}

}  // namespace

double max_cycle_mean(const SemiringMatrix& a) {
    if (!a.is_square()) throw DimensionMismatch("cycle mean needs a square matrix");
    const int n = a.rows();
    const std::vector<double> w = additive_weights(a);

    // d[k][v]: best weight of a walk with exactly k arcs ending at v, every
    // vertex admitted as a start (walks from a virtual source, minus its
    // zero-weight first arc). Karp's formula on that source graph reduces to
    //   max_v min_k (d[n][v] - d[k][v]) / (n - k)
    // over v with d[n][v] finite and k with d[k][v] finite.
    std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, -kInf));
    for (int v = 0; v < n; ++v) d[0][v] = 0.0;
    for (int k = 1; k <= n; ++k) {
        for (int u = 0; u < n; ++u) {
            if (d[k - 1][u] == -kInf) continue;
            for (int v = 0; v < n; ++v) {
                const double arc = w[static_cast<std::size_t>(u) * n + v];
                if (arc == -kInf) continue;
                d[k][v] = raw_join(d[k][v], d[k - 1][u] + arc);
            }
        }
    }

    double best = -kInf;
    for (int v = 0; v < n; ++v) {
        if (d[n][v] == -kInf) continue;
        double worst = kInf;
        for (int k = 0; k < n; ++k) {
            if (d[k][v] == -kInf) continue;
            const double mean = (d[n][v] - d[k][v]) / (n - k);
            if (mean < worst) worst = mean;
        }
        best = raw_join(best, worst);
    }

    if (a.algebra() == Algebra::MaxProduct) return best == -kInf ? 0.0 : std::exp(best);
    return best;
}

bool is_exponentially_stable(const SemiringMatrix& a) {
    return max_cycle_mean(a) < multiplicative_identity(a.algebra());
}

DetCheck verify_det_certificate(const SemiringMatrix& a, std::span<const double> p) {
    if (a.algebra() != Algebra::MaxProduct) {
        throw AlgebraMismatch("certificates are checked on max-product matrices");
    }
    if (!a.is_square() || static_cast<int>(p.size()) != a.rows()) {
        throw DimensionMismatch("certificate length does not match the matrix");
    }
    require_positive(p, "certificate");

    DetCheck check;
    check.image = left_apply(p, a);
    check.accepted = true;
    check.slack = 0.0;
    double worst_violation = -kInf;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double ratio = check.image[i] / p[i];
        check.slack = raw_join(check.slack, ratio);
        if (check.image[i] >= p[i]) {
            check.accepted = false;
            if (ratio > worst_violation) {
                worst_violation = ratio;
                check.violating_index = static_cast<int>(i);
            }
        }
    }
    return check;
}

std::optional<DetCertificate> find_det_certificate(const SemiringMatrix& a, double margin) {
    if (a.algebra() != Algebra::MaxProduct) {
        throw AlgebraMismatch("certificate search runs on max-product matrices");
    }
    if (!a.is_square()) throw DimensionMismatch("certificate search needs a square matrix");
    if (!(margin > 0.0 && margin < 1.0)) {
        throw DomainError("margin must lie in (0, 1)");
    }
    for (double v : a.data()) {
        if (v == kInf) throw DomainError("certificate search needs finite entries");
    }

    const int n = a.rows();
    const double relax_gain = std::log(1.0 - margin);

    // Constraint q_j - q_i <= ln(1-margin) - ln A_{ji} becomes an arc
    // i -> j of that weight; distances from a virtual source (all nodes
    // start at 0) satisfy every constraint unless a negative cycle exists.
    struct Arc {
        int from, to;
        double weight;
    };
    std::vector<Arc> arcs;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double entry = a.at(j, i);
            if (entry > 0.0) arcs.push_back({i, j, relax_gain - std::log(entry)});
        }
    }

    std::vector<double> dist(n, 0.0);
    bool changed = false;
    for (int round = 0; round < n + 1; ++round) {
        changed = false;
        for (const Arc& arc : arcs) {
            const double through = dist[arc.from] + arc.weight;
            if (through < dist[arc.to]) {
                dist[arc.to] = through;
                changed = true;
            }
        }
        if (!changed) break;
    }
    if (changed) return std::nullopt;  // negative constraint cycle

    const double shift = std::accumulate(dist.begin(), dist.end(), 0.0) / n;
    std::vector<double> p(dist.size());
    for (int i = 0; i < n; ++i) p[i] = std::exp(dist[i] - shift);

    const DetCheck check = verify_det_certificate(a, p);
    if (!check.accepted) return std::nullopt;
    return DetCertificate{std::move(p), check.slack};
}

std::vector<double> lyapunov_from_lambda(const SemiringMatrix& a,
                                         std::span<const double> lambda) {
    require_positive(lambda, "lambda");
    return left_apply(lambda, kleene_plus(a));
}

}  // namespace maxstab
