#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "maxstab/markov.hpp"

namespace maxstab {

/// One simulated sample path. states[k] is x_k for k = 0..horizon; inputs
/// and outputs are populated only when the system has them. Replaying with
/// the same seed reproduces the trace bit for bit.
struct Trace {
    ModeSequence modes;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> outputs;
    std::uint64_t seed = 0;

    int horizon() const noexcept { return static_cast<int>(states.size()) - 1; }
};

/// Runs x_{k+1} = A(y_k) ∘ x_k ∨ B(y_k) ∘ u, sampling modes from the chain.
/// An input signal is required exactly when the system has input matrices;
/// its timing decides whether step k consumes u_k or u_{k+1}.
Trace simulate(const JumpLinearSystem& sys, const MarkovChain& chain,
               std::span<const double> x0, int y0, int horizon, std::uint64_t seed,
               const InputSignal* input = nullptr);

/// Least-squares fit of ln E||x_k|| against k over n_paths trajectories:
/// E||x_k|| ~ L_hat * ||x_0|| / a_hat^k. The mean is taken before the log.
/// residual is the RMS misfit in the log domain. Exact-zero means truncate
/// the fit window; fewer than five usable points raise DegenerateData.
struct DecayFit {
    double a_hat = 0.0;
    double l_hat = 0.0;
    double residual = 0.0;
    int points = 0;  ///< fit window length
};

DecayFit fit_mean_norm_decay(const JumpLinearSystem& sys, const MarkovChain& chain,
                             std::span<const double> x0, int y0, int n_paths,
                             int horizon, std::uint64_t seed);

/// Empirical growth rate of a free max-plus system from x_0 = 0:
/// the mean over paths of max_i x_horizon^i / horizon.
double estimate_lyapunov_exponent(const JumpLinearSystem& sys, const MarkovChain& chain,
                                  int n_paths, int horizon, std::uint64_t seed,
                                  int y0 = 1);

/// Fraction of max-plus traces satisfying x_k < (k ln gamma) * 1 entrywise
/// at every step k >= burn_in. The bound is meaningful for gamma > 1; any
/// positive gamma is accepted. The burn-in is exposed because the bound is
/// an eventually-almost-surely statement; callers can probe several values.
double check_as_bound(const std::vector<Trace>& traces, double gamma, int burn_in);

/// Output bound held with probability 1 - epsilon under the worst
/// admissible input. Drives the system with the constant input at level
/// input_bound (monotonicity makes that the worst signal with
/// ||u|| <= input_bound), takes the empirical (1 - epsilon)-quantile of
/// sup_k ||z_k||, and reports it raw plus inflated by 1.2.
struct BibipoEstimate {
    double quantile = 0.0;
    double bound = 0.0;  ///< 1.2 * quantile
};

BibipoEstimate estimate_bibipo_bound(const JumpLinearSystem& sys, const MarkovChain& chain,
                                     double input_bound, double epsilon, int n_paths,
                                     int horizon, std::uint64_t seed,
                                     std::span<const double> x0 = {});

/// Per-component lag statistics for a max-plus system fed at period T:
/// the distribution of x_k^i - k*T pooled over paths and steps past the
/// burn-in, plus the trend slope of the per-step 99% quantile.
struct LagStats {
    double median = 0.0;
    double q95 = 0.0;
    double q99 = 0.0;
    double max_lag = 0.0;
    double q99_slope = 0.0;  ///< per-step drift of the 99% quantile
};

/// burn_in < 0 selects the default horizon / 5. jitter_bound > 0 feeds
/// u_k = k*T + delta_k with seeded uniform delta_k in [-bound, bound].
std::vector<LagStats> throughput_lags(const JumpLinearSystem& sys, const MarkovChain& chain,
                                      double period, int horizon, int n_paths,
                                      std::uint64_t seed, int burn_in = -1,
                                      double jitter_bound = 0.0,
                                      InputTiming timing = InputTiming::Next);

/// Two-dimensional state-dependent max-product dynamics
///   x1+ = max(a11 * x1, a12 * x1^{-d} * x2^{1+d})
///   x2+ = max(a21 * x1^{1+d} * x2^{-d}, a22 * x2)
/// with d = delta. At delta = 0 this is the plain linear iteration.
struct Nonlinear2dParams {
    double a11, a12, a21, a22;
    double delta;
};

/// Throws ZeroState when delta != 0 and both components are exactly zero
/// (the defining component ratio becomes 0/0).
std::vector<std::array<double, 2>> simulate_nonlinear_2d(const Nonlinear2dParams& params,
                                                         std::array<double, 2> x0,
                                                         int horizon);

}  // namespace maxstab
