#include "maxstab/markov.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace maxstab {

MarkovChain::MarkovChain(const std::vector<std::vector<double>>& transition) {
    modes_ = static_cast<int>(transition.size());
    if (modes_ == 0) throw NotStochastic("transition matrix is empty");
    c_.reserve(static_cast<std::size_t>(modes_) * modes_);
    for (int i = 0; i < modes_; ++i) {
        const auto& row = transition[i];
        if (static_cast<int>(row.size()) != modes_) {
            throw NotStochastic("transition matrix must be square; row " +
                                std::to_string(i + 1) + " has " +
                                std::to_string(row.size()) + " entries");
        }
        double sum = 0.0;
        for (double v : row) {
            if (!(v >= 0.0) || v > 1.0) {  // also rejects NaN
                throw NotStochastic("transition probability " + std::to_string(v) +
                                    " in row " + std::to_string(i + 1) +
                                    " lies outside [0, 1]");
            }
            sum += v;
            c_.push_back(v);
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            throw NotStochastic("row " + std::to_string(i + 1) + " sums to " +
                                std::to_string(sum) + ", expected 1");
        }
    }
}

double MarkovChain::transition(int from, int to) const {
    if (from < 1 || from > modes_ || to < 1 || to > modes_) {
        throw DimensionMismatch("mode out of range 1.." + std::to_string(modes_));
    }
    return c_[static_cast<std::size_t>(from - 1) * modes_ + (to - 1)];
}

std::span<const double> MarkovChain::row(int from) const {
    if (from < 1 || from > modes_) {
        throw DimensionMismatch("mode out of range 1.." + std::to_string(modes_));
    }
    return {c_.data() + static_cast<std::size_t>(from - 1) * modes_,
            static_cast<std::size_t>(modes_)};
}

JumpLinearSystem::JumpLinearSystem(Algebra algebra, std::vector<SemiringMatrix> a,
                                   std::optional<std::vector<SemiringMatrix>> b,
                                   std::optional<std::vector<SemiringMatrix>> c)
    : algebra_(algebra), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (a_.empty()) throw DimensionMismatch("a system needs at least one mode");
    state_dim_ = a_.front().rows();

    auto check_family = [&](const std::vector<SemiringMatrix>& family, int rows, int cols,
                            const char* name) {
        if (static_cast<int>(family.size()) != mode_count()) {
            throw DimensionMismatch(std::string(name) + " must have one matrix per mode");
        }
        for (const SemiringMatrix& m : family) {
            if (m.algebra() != algebra_) {
                throw AlgebraMismatch(std::string(name) + " matrices must be " +
                                      algebra_name(algebra_));
            }
            if (m.rows() != rows || m.cols() != cols) {
                throw DimensionMismatch(std::string(name) + " matrices must all be " +
                                        std::to_string(rows) + "x" + std::to_string(cols));
            }
            for (double v : m.data()) {
                if (v == kInf) {
                    throw DomainError(std::string(name) +
                                      " entries must stay below +inf");
                }
            }
        }
    };

    check_family(a_, state_dim_, state_dim_, "A");
    if (b_) {
        input_dim_ = b_->front().cols();
        check_family(*b_, state_dim_, input_dim_, "B");
    }
    if (c_) {
        output_dim_ = c_->front().rows();
        check_family(*c_, output_dim_, state_dim_, "C");
    }
}

void JumpLinearSystem::check_mode(int mode) const {
    if (mode < 1 || mode > mode_count()) {
        throw DimensionMismatch("mode " + std::to_string(mode) + " out of range 1.." +
                                std::to_string(mode_count()));
    }
}

const SemiringMatrix& JumpLinearSystem::system_matrix(int mode) const {
    check_mode(mode);
    return a_[mode - 1];
}

const SemiringMatrix& JumpLinearSystem::input_matrix(int mode) const {
    check_mode(mode);
    if (!b_) throw DimensionMismatch("system has no input matrices");
    return (*b_)[mode - 1];
}

const SemiringMatrix& JumpLinearSystem::output_matrix(int mode) const {
    check_mode(mode);
    if (!c_) throw DimensionMismatch("system has no output matrices");
    return (*c_)[mode - 1];
}

ModeSequence sample_modes(const MarkovChain& chain, int y0, int horizon,
                          std::uint64_t seed) {
    if (y0 < 1 || y0 > chain.mode_count()) {
        throw DimensionMismatch("initial mode out of range");
    }
    if (horizon < 0) throw DomainError("horizon must be nonnegative");

    SplitMix64 rng(derive_stream(seed, 0));
    ModeSequence seq;
    seq.seed = seed;
    seq.modes.reserve(static_cast<std::size_t>(horizon) + 1);
    seq.modes.push_back(y0);
    int current = y0;
    for (int k = 0; k < horizon; ++k) {
        const double u = rng.uniform01();
        const std::span<const double> row = chain.row(current);
        double acc = 0.0;
        int next = 0;
        for (int j = 0; j < chain.mode_count(); ++j) {
            if (row[j] == 0.0) continue;
            next = j + 1;  // fallback when rounding leaves u past the last bin
            acc += row[j];
            if (u < acc) break;
        }
        current = next;
        seq.modes.push_back(current);
    }
    return seq;
}

StepResult step(const JumpLinearSystem& sys, std::span<const double> x, int mode,
                std::span<const double> u) {
    if (static_cast<int>(x.size()) != sys.state_dim()) {
        throw DimensionMismatch("state vector length does not match the system");
    }
    for (double v : x) checked_value(v, sys.algebra());

    StepResult result;
    result.state = mat_apply(sys.system_matrix(mode), x);
    if (sys.has_input()) {
        if (u.empty()) throw DimensionMismatch("system has inputs; u is required");
        if (static_cast<int>(u.size()) != sys.input_dim()) {
            throw DimensionMismatch("input vector length does not match the system");
        }
        const std::vector<double> driven = mat_apply(sys.input_matrix(mode), u);
        for (int i = 0; i < sys.state_dim(); ++i) {
            result.state[i] = raw_join(result.state[i], driven[i]);
        }
    } else if (!u.empty()) {
        throw DimensionMismatch("system is free; no input expected");
    }
    if (sys.has_output()) result.output = mat_apply(sys.output_matrix(mode), x);
    return result;
}

InputSignal InputSignal::explicit_sequence(std::vector<std::vector<double>> values,
                                           InputTiming timing) {
    InputSignal sig(Kind::Explicit, timing);
    sig.values_ = std::move(values);
    return sig;
}

InputSignal InputSignal::constant(std::vector<double> level, InputTiming timing) {
    InputSignal sig(Kind::Constant, timing);
    sig.level_ = std::move(level);
    return sig;
}

InputSignal InputSignal::affine(double period, InputTiming timing) {
    InputSignal sig(Kind::Affine, timing);
    sig.period_ = period;
    return sig;
}

InputSignal InputSignal::affine_jittered(std::vector<double> jitter, double period,
                                         InputTiming timing) {
    InputSignal sig(Kind::Affine, timing);
    sig.period_ = period;
    sig.jitter_ = std::move(jitter);
    return sig;
}

InputSignal InputSignal::affine_uniform_jitter(double period, double bound,
                                               InputTiming timing) {
    if (!(bound >= 0.0)) throw DomainError("jitter bound must be nonnegative");
    InputSignal sig(Kind::Affine, timing);
    sig.period_ = period;
    sig.jitter_bound_ = bound;
    return sig;
}

std::vector<std::vector<double>> InputSignal::realize(int input_dim, int horizon,
                                                      SplitMix64& jitter_rng) const {
    const std::size_t count = static_cast<std::size_t>(horizon) + 1;
    switch (kind_) {
        case Kind::Explicit: {
            if (values_.size() < count) {
                throw DimensionMismatch("explicit input covers " +
                                        std::to_string(values_.size()) +
                                        " steps, need " + std::to_string(count));
            }
            for (const auto& v : values_) {
                if (static_cast<int>(v.size()) != input_dim) {
                    throw DimensionMismatch("input vectors must have length " +
                                            std::to_string(input_dim));
                }
            }
            return {values_.begin(), values_.begin() + count};
        }
        case Kind::Constant: {
            if (static_cast<int>(level_.size()) != input_dim) {
                throw DimensionMismatch("input vectors must have length " +
                                        std::to_string(input_dim));
            }
            return std::vector<std::vector<double>>(count, level_);
        }
        case Kind::Affine: {
            if (!jitter_.empty() && jitter_.size() < count) {
                throw DimensionMismatch("jitter covers " + std::to_string(jitter_.size()) +
                                        " steps, need " + std::to_string(count));
            }
            std::vector<std::vector<double>> out(count);
            for (std::size_t k = 0; k < count; ++k) {
                double delta = 0.0;
                if (!jitter_.empty()) {
                    delta = jitter_[k];
                } else if (jitter_bound_ > 0.0) {
                    delta = jitter_rng.uniform(-jitter_bound_, jitter_bound_);
                }
                out[k].assign(static_cast<std::size_t>(input_dim),
                              static_cast<double>(k) * period_ + delta);
            }
            return out;
        }
    }
    throw Error("unreachable input kind");
}

}  // namespace maxstab
