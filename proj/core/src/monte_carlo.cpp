#include "maxstab/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace maxstab {

namespace {

// Order statistic at level q in (0, 1]: the ceil(q*N)-th smallest value.
double empirical_quantile(std::vector<double>& values, double q) {
    if (values.empty()) throw DegenerateData("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(values.size())));
    const std::size_t idx = rank == 0 ? 0 : rank - 1;
    return values[std::min(idx, values.size() - 1)];
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

void require_free(const JumpLinearSystem& sys, const char* what) {
    if (sys.has_input()) {
        throw DimensionMismatch(std::string(what) + " runs on free systems");
    }
}

}  // namespace

Trace simulate(const JumpLinearSystem& sys, const MarkovChain& chain,
               std::span<const double> x0, int y0, int horizon, std::uint64_t seed,
               const InputSignal* input) {
    if (sys.mode_count() != chain.mode_count()) {
        throw DimensionMismatch("system and chain disagree on the mode count");
    }
    if (static_cast<int>(x0.size()) != sys.state_dim()) {
        throw DimensionMismatch("x0 length does not match the state dimension");
    }
    if (sys.has_input() && input == nullptr) {
        throw DimensionMismatch("system has inputs; an input signal is required");
    }
    if (!sys.has_input() && input != nullptr) {
        throw DimensionMismatch("system is free; no input signal expected");
    }

    Trace trace;
    trace.seed = seed;
    trace.modes = sample_modes(chain, y0, horizon, seed);
    if (input != nullptr) {
        SplitMix64 jitter_rng(derive_stream(seed, 1));
        trace.inputs = input->realize(sys.input_dim(), horizon, jitter_rng);
    }

    trace.states.reserve(static_cast<std::size_t>(horizon) + 1);
    trace.states.emplace_back(x0.begin(), x0.end());
    for (int k = 0; k < horizon; ++k) {
        std::span<const double> u;
        if (input != nullptr) {
            u = trace.inputs[input->timing() == InputTiming::Next
                                 ? static_cast<std::size_t>(k) + 1
                                 : static_cast<std::size_t>(k)];
        }
        StepResult r = step(sys, trace.states.back(), trace.modes.modes[k], u);
        if (r.output) trace.outputs.push_back(std::move(*r.output));
        trace.states.push_back(std::move(r.state));
    }
    if (sys.has_output()) {
        trace.outputs.push_back(
            mat_apply(sys.output_matrix(trace.modes.modes.back()), trace.states.back()));
    }
    return trace;
}

DecayFit fit_mean_norm_decay(const JumpLinearSystem& sys, const MarkovChain& chain,
                             std::span<const double> x0, int y0, int n_paths,
                             int horizon, std::uint64_t seed) {
    if (sys.algebra() != Algebra::MaxProduct) {
        throw AlgebraMismatch("decay fits apply to max-product systems");
    }
    require_free(sys, "the decay fit");
    if (n_paths < 1 || horizon < 1) throw DomainError("need paths and a positive horizon");

    std::vector<double> mean_norm(static_cast<std::size_t>(horizon) + 1, 0.0);
    for (int path = 0; path < n_paths; ++path) {
        const Trace trace =
            simulate(sys, chain, x0, y0, horizon, derive_stream(seed, path));
        for (std::size_t k = 0; k < trace.states.size(); ++k) {
            mean_norm[k] += inf_norm(trace.states[k], sys.algebra());
        }
    }
    for (double& v : mean_norm) v /= static_cast<double>(n_paths);

    // Exact zeros end the usable window; log of 0 carries no decay rate.
    std::size_t window = 0;
    while (window < mean_norm.size() && mean_norm[window] > 0.0) ++window;
    if (window < 5) {
        throw DegenerateData("norms collapse to zero before step 5; nothing to fit");
    }

    std::vector<double> ks(window), logs(window);
    for (std::size_t k = 0; k < window; ++k) {
        ks[k] = static_cast<double>(k);
        logs[k] = std::log(mean_norm[k]);
    }
    const LineFit line = fit_line(ks, logs);

    DecayFit fit;
    fit.a_hat = std::exp(-line.slope);
    fit.l_hat = std::exp(line.intercept) / inf_norm(x0, sys.algebra());
    fit.residual = line.rms_residual;
    fit.points = static_cast<int>(window);
    return fit;
}

double estimate_lyapunov_exponent(const JumpLinearSystem& sys, const MarkovChain& chain,
                                  int n_paths, int horizon, std::uint64_t seed, int y0) {
    if (sys.algebra() != Algebra::MaxPlus) {
        throw AlgebraMismatch("growth-rate estimation applies to max-plus systems");
    }
    require_free(sys, "growth-rate estimation");
    if (n_paths < 1 || horizon < 1) throw DomainError("need paths and a positive horizon");

    const std::vector<double> x0(static_cast<std::size_t>(sys.state_dim()), 0.0);
    double acc = 0.0;
    for (int path = 0; path < n_paths; ++path) {
        const Trace trace =
            simulate(sys, chain, x0, y0, horizon, derive_stream(seed, path));
        const auto& last = trace.states.back();
        acc += *std::max_element(last.begin(), last.end()) / horizon;
    }
    return acc / n_paths;
}

double check_as_bound(const std::vector<Trace>& traces, double gamma, int burn_in) {
    if (traces.empty()) throw DegenerateData("no traces to check");
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    if (burn_in < 0) throw DomainError("burn-in must be nonnegative");

    const double log_gamma = std::log(gamma);
    int held = 0;
    for (const Trace& trace : traces) {
        bool ok = true;
        for (int k = burn_in; k <= trace.horizon() && ok; ++k) {
            const double level = k * log_gamma;
            for (double v : trace.states[k]) {
                if (!(v < level)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) ++held;
    }
    return static_cast<double>(held) / static_cast<double>(traces.size());
}

BibipoEstimate estimate_bibipo_bound(const JumpLinearSystem& sys, const MarkovChain& chain,
                                     double input_bound, double epsilon, int n_paths,
                                     int horizon, std::uint64_t seed,
                                     std::span<const double> x0) {
    if (sys.algebra() != Algebra::MaxProduct) {
        throw AlgebraMismatch("the output bound applies to max-product systems");
    }
    if (!sys.has_input() || !sys.has_output()) {
        throw DimensionMismatch("the output bound needs both B and C matrices");
    }
    if (!(input_bound >= 0.0)) throw DomainError("input bound must be nonnegative");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    if (n_paths < 1) throw DomainError("need at least one path");

    std::vector<double> zeros;
    if (x0.empty()) {
        zeros.assign(static_cast<std::size_t>(sys.state_dim()), 0.0);
        x0 = zeros;
    }
    const InputSignal input = InputSignal::constant(
        std::vector<double>(static_cast<std::size_t>(sys.input_dim()), input_bound));

    std::vector<double> sup_norms;
    sup_norms.reserve(static_cast<std::size_t>(n_paths));
    for (int path = 0; path < n_paths; ++path) {
        const Trace trace =
            simulate(sys, chain, x0, 1, horizon, derive_stream(seed, path), &input);
        double sup = 0.0;
        for (const auto& z : trace.outputs) {
            sup = raw_join(sup, inf_norm(z, sys.algebra()));
        }
        sup_norms.push_back(sup);
    }

    BibipoEstimate est;
    est.quantile = empirical_quantile(sup_norms, 1.0 - epsilon);
    est.bound = 1.2 * est.quantile;
    return est;
}

std::vector<LagStats> throughput_lags(const JumpLinearSystem& sys, const MarkovChain& chain,
                                      double period, int horizon, int n_paths,
                                      std::uint64_t seed, int burn_in,
                                      double jitter_bound, InputTiming timing) {
    if (sys.algebra() != Algebra::MaxPlus) {
        throw AlgebraMismatch("throughput lags apply to max-plus systems");
    }
    if (!sys.has_input()) throw DimensionMismatch("throughput lags need an input matrix");
    if (n_paths < 1 || horizon < 1) throw DomainError("need paths and a positive horizon");
    if (burn_in < 0) burn_in = horizon / 5;
    if (burn_in >= horizon) throw DomainError("burn-in must leave steps to analyze");

    const InputSignal input =
        jitter_bound > 0.0
            ? InputSignal::affine_uniform_jitter(period, jitter_bound, timing)
            : InputSignal::affine(period, timing);

    const int n = sys.state_dim();
    const std::vector<double> x0(static_cast<std::size_t>(n), 0.0);

    // lags[i][k][path] = x_k^i - k*period; -inf entries mean "no event yet"
    // and are skipped.
    std::vector<std::vector<std::vector<double>>> lags(
        static_cast<std::size_t>(n),
        std::vector<std::vector<double>>(static_cast<std::size_t>(horizon) + 1));
    for (int path = 0; path < n_paths; ++path) {
        const Trace trace =
            simulate(sys, chain, x0, 1, horizon, derive_stream(seed, path), &input);
        for (int k = 0; k <= horizon; ++k) {
            for (int i = 0; i < n; ++i) {
                const double v = trace.states[k][i];
                if (v == -kInf) continue;
                lags[i][k].push_back(v - k * period);
            }
        }
    }

    std::vector<LagStats> stats(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<double> pooled;
        std::vector<double> ks, q99_by_k;
        for (int k = burn_in; k <= horizon; ++k) {
            auto& at_k = lags[i][k];
            if (at_k.empty()) continue;
            pooled.insert(pooled.end(), at_k.begin(), at_k.end());
            std::vector<double> copy = at_k;
            q99_by_k.push_back(empirical_quantile(copy, 0.99));
            ks.push_back(static_cast<double>(k));
        }
        if (pooled.empty()) {
            throw DegenerateData("component " + std::to_string(i + 1) +
                                 " never produced an event past the burn-in");
        }
        std::vector<double> sorted = pooled;
        stats[i].median = empirical_quantile(sorted, 0.5);
        stats[i].q95 = empirical_quantile(sorted, 0.95);
        stats[i].q99 = empirical_quantile(sorted, 0.99);
        stats[i].max_lag = *std::max_element(pooled.begin(), pooled.end());
        stats[i].q99_slope = fit_line(ks, q99_by_k).slope;
    }
    return stats;
}

std::vector<std::array<double, 2>> simulate_nonlinear_2d(const Nonlinear2dParams& params,
                                                         std::array<double, 2> x0,
                                                         int horizon) {
    for (double a : {params.a11, params.a12, params.a21, params.a22}) {
        if (!(a >= 0.0) || a == kInf) throw DomainError("coefficients must be finite nonnegative");
    }
    if (!(std::abs(params.delta) < 0.5)) throw DomainError("|delta| must be below 1/2");
    if (!(x0[0] >= 0.0) || !(x0[1] >= 0.0)) throw DomainError("the state is nonnegative");
    if (horizon < 0) throw DomainError("horizon must be nonnegative");

    const double d = params.delta;
    std::vector<std::array<double, 2>> states;
    states.reserve(static_cast<std::size_t>(horizon) + 1);
    states.push_back(x0);
    for (int k = 0; k < horizon; ++k) {
        const auto [x1, x2] = states.back();
        if (d != 0.0 && x1 == 0.0 && x2 == 0.0) {
            throw ZeroState("component ratio is 0/0 at step " + std::to_string(k));
        }
        // (x1/x2)^{-d} * x2 expanded into pure powers; exact for the linear
        // case d = 0 and well-defined when a single component is zero.
        const double next1 =
            raw_join(params.a11 * x1, params.a12 * std::pow(x1, -d) * std::pow(x2, 1.0 + d));
        const double next2 =
            raw_join(params.a21 * std::pow(x1, 1.0 + d) * std::pow(x2, -d), params.a22 * x2);
        states.push_back({next1, next2});
    }
    return states;
}

}  // namespace maxstab
