#include "maxstab/algebra.hpp"

#include <cmath>
#include <string>

#include "maxstab/deterministic.hpp"

namespace maxstab {

namespace {

void require_same_algebra(Algebra a, Algebra b) {
    if (a != b) {
        throw AlgebraMismatch(std::string("cannot combine ") + algebra_name(a) +
                              " and " + algebra_name(b) + " operands");
    }
}

}  // namespace

const char* algebra_name(Algebra a) noexcept {
    return a == Algebra::MaxPlus ? "max-plus" : "max-product";
}

double checked_value(double v, Algebra a) {
    if (std::isnan(v)) throw DomainError("NaN is not a semiring value");
    if (a == Algebra::MaxProduct && v < 0.0) {
        throw DomainError("max-product values must be nonnegative, got " +
                          std::to_string(v));
    }
    return v;
}

SemiringScalar scalar_join(const SemiringScalar& a, const SemiringScalar& b) {
    require_same_algebra(a.algebra(), b.algebra());
    return {raw_join(a.value(), b.value()), a.algebra()};
}

SemiringScalar scalar_mul(const SemiringScalar& a, const SemiringScalar& b) {
    require_same_algebra(a.algebra(), b.algebra());
    return {raw_mul(a.value(), b.value(), a.algebra()), a.algebra()};
}

SemiringMatrix::SemiringMatrix(int rows, int cols, Algebra algebra)
    : rows_(rows), cols_(cols), algebra_(algebra) {
    if (rows <= 0 || cols <= 0) {
        throw DimensionMismatch("matrix dimensions must be positive, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
    }
    entries_.assign(static_cast<std::size_t>(rows) * cols, additive_identity(algebra));
}

SemiringMatrix SemiringMatrix::identity(int n, Algebra algebra) {
    SemiringMatrix m(n, n, algebra);
    for (int i = 0; i < n; ++i) m.set(i, i, multiplicative_identity(algebra));
    return m;
}

SemiringMatrix SemiringMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                         Algebra algebra) {
    if (rows.empty() || rows.front().empty()) {
        throw DimensionMismatch("matrix literal must have at least one row and column");
    }
    SemiringMatrix m(static_cast<int>(rows.size()),
                     static_cast<int>(rows.front().size()), algebra);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.front().size()) {
            throw DimensionMismatch("ragged matrix literal at row " + std::to_string(r));
        }
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m.set(static_cast<int>(r), static_cast<int>(c), rows[r][c]);
        }
    }
    return m;
}

double SemiringMatrix::at(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
        throw DimensionMismatch("index (" + std::to_string(r) + "," + std::to_string(c) +
                                ") out of range for " + std::to_string(rows_) + "x" +
                                std::to_string(cols_));
    }
    return entries_[static_cast<std::size_t>(r) * cols_ + c];
}

void SemiringMatrix::set(int r, int c, double v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
        throw DimensionMismatch("index (" + std::to_string(r) + "," + std::to_string(c) +
                                ") out of range for " + std::to_string(rows_) + "x" +
                                std::to_string(cols_));
    }
    entries_[static_cast<std::size_t>(r) * cols_ + c] = checked_value(v, algebra_);
}

SemiringMatrix mat_mul(const SemiringMatrix& a, const SemiringMatrix& b) {
    require_same_algebra(a.algebra(), b.algebra());
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("product shape mismatch: " + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()) + " times " +
                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    const Algebra alg = a.algebra();
    SemiringMatrix out(a.rows(), b.cols(), alg);
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            double acc = additive_identity(alg);
            for (int p = 0; p < a.cols(); ++p) {
                acc = raw_join(acc, raw_mul(a.at(i, p), b.at(p, j), alg));
            }
            out.set(i, j, acc);
        }
    }
    return out;
}

SemiringMatrix mat_join(const SemiringMatrix& a, const SemiringMatrix& b) {
    require_same_algebra(a.algebra(), b.algebra());
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("join shape mismatch");
    }
    SemiringMatrix out(a.rows(), a.cols(), a.algebra());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            out.set(i, j, raw_join(a.at(i, j), b.at(i, j)));
        }
    }
    return out;
}

SemiringMatrix mat_power(const SemiringMatrix& a, int k) {
    if (!a.is_square()) throw DimensionMismatch("powers need a square matrix");
    if (k < 0) throw DomainError("negative matrix power");
    SemiringMatrix out = SemiringMatrix::identity(a.rows(), a.algebra());
    for (int i = 0; i < k; ++i) out = mat_mul(out, a);
    return out;
}

SemiringMatrix kleene_plus(const SemiringMatrix& a) {
    if (!a.is_square()) throw DimensionMismatch("closure needs a square matrix");
    if (a.algebra() != Algebra::MaxProduct) {
        throw AlgebraMismatch("closure is defined on max-product matrices");
    }
    for (double v : a.data()) {
        if (v == kInf) throw DomainError("closure needs finite entries");
    }
    const double rho = max_cycle_mean(a);
    if (rho >= 1.0) {
        throw Divergent("max cycle mean " + std::to_string(rho) +
                        " is not below one; the closure diverges");
    }
    SemiringMatrix power = SemiringMatrix::identity(a.rows(), a.algebra());
    SemiringMatrix closure = power;
    for (int k = 1; k < a.rows(); ++k) {
        power = mat_mul(power, a);
        closure = mat_join(closure, power);
    }
    return closure;
}

SemiringMatrix exp_transform(const SemiringMatrix& max_plus, double gamma) {
    if (max_plus.algebra() != Algebra::MaxPlus) {
        throw AlgebraMismatch("exp transform expects a max-plus matrix");
    }
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    SemiringMatrix out(max_plus.rows(), max_plus.cols(), Algebra::MaxProduct);
    for (int i = 0; i < max_plus.rows(); ++i) {
        for (int j = 0; j < max_plus.cols(); ++j) {
            const double v = max_plus.at(i, j);
            out.set(i, j, v == -kInf ? 0.0 : std::exp(v) / gamma);
        }
    }
    return out;
}

SemiringMatrix log_transform(const SemiringMatrix& max_product, double gamma) {
    if (max_product.algebra() != Algebra::MaxProduct) {
        throw AlgebraMismatch("log transform expects a max-product matrix");
    }
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    SemiringMatrix out(max_product.rows(), max_product.cols(), Algebra::MaxPlus);
    for (int i = 0; i < max_product.rows(); ++i) {
        for (int j = 0; j < max_product.cols(); ++j) {
            const double v = max_product.at(i, j);
            if (v == kInf) throw DomainError("log transform needs finite entries");
            out.set(i, j, v == 0.0 ? -kInf : std::log(v * gamma));
        }
    }
    return out;
}

double inf_norm(std::span<const double> x, Algebra algebra) {
    if (x.empty()) throw DimensionMismatch("norm of an empty vector");
    double best = 0.0;
    for (double v : x) {
        if (algebra == Algebra::MaxPlus && v == -kInf) continue;  // no event
        best = raw_join(best, std::abs(v));
    }
    return best;
}

std::vector<double> mat_apply(const SemiringMatrix& a, std::span<const double> x) {
    if (static_cast<int>(x.size()) != a.cols()) {
        throw DimensionMismatch("apply: vector length " + std::to_string(x.size()) +
                                " does not match " + std::to_string(a.cols()) + " columns");
    }
    const Algebra alg = a.algebra();
    std::vector<double> out(static_cast<std::size_t>(a.rows()));
    for (int i = 0; i < a.rows(); ++i) {
        double acc = additive_identity(alg);
        for (int p = 0; p < a.cols(); ++p) {
            acc = raw_join(acc, raw_mul(a.at(i, p), x[p], alg));
        }
        out[i] = acc;
    }
    return out;
}

std::vector<double> left_apply(std::span<const double> p, const SemiringMatrix& a) {
    if (static_cast<int>(p.size()) != a.rows()) {
        throw DimensionMismatch("left apply: vector length " + std::to_string(p.size()) +
                                " does not match " + std::to_string(a.rows()) + " rows");
    }
    const Algebra alg = a.algebra();
    std::vector<double> out(static_cast<std::size_t>(a.cols()));
    for (int j = 0; j < a.cols(); ++j) {
        double acc = additive_identity(alg);
        for (int i = 0; i < a.rows(); ++i) {
            acc = raw_join(acc, raw_mul(p[i], a.at(i, j), alg));
        }
        out[j] = acc;
    }
    return out;
}

}  // namespace maxstab
