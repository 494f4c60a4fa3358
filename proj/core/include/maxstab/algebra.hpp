#pragma once

#include <limits>
#include <span>
#include <vector>

#include "maxstab/errors.hpp"

namespace maxstab {

/// The two idempotent semirings this library works in:
///  - MaxPlus:    (R ∪ {-inf, +inf}, max, +),  zero = -inf, one = 0
///  - MaxProduct: ([0, +inf],        max, *),  zero = 0,    one = 1
enum class Algebra { MaxPlus, MaxProduct };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

const char* algebra_name(Algebra a) noexcept;

/// The semiring "zero" (identity of the join).
inline constexpr double additive_identity(Algebra a) noexcept {
    return a == Algebra::MaxPlus ? -kInf : 0.0;
}

/// The semiring "one" (identity of the product).
inline constexpr double multiplicative_identity(Algebra a) noexcept {
    return a == Algebra::MaxPlus ? 0.0 : 1.0;
}

/// Validates a raw entry: NaN is always rejected; max-product values must
/// be nonnegative. Returns the value unchanged.
double checked_value(double v, Algebra a);

/// Semiring product on raw values: a + b in max-plus, a * b in max-product.
///
/// Two absorbing cases are special-cased because native IEEE arithmetic
/// yields NaN for them: (-inf) + (+inf) = -inf and 0 * (+inf) = 0.
inline double raw_mul(double a, double b, Algebra alg) noexcept {
    if (alg == Algebra::MaxPlus) {
        if (a == -kInf || b == -kInf) return -kInf;
        return a + b;
    }
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}

/// Semiring sum on raw values: the maximum.
inline double raw_join(double a, double b) noexcept {
    return a > b ? a : b;
}

/// An extended-real value tagged with its algebra.
class SemiringScalar {
public:
    SemiringScalar(double value, Algebra algebra)
        : value_(checked_value(value, algebra)), algebra_(algebra) {}

    double value() const noexcept { return value_; }
    Algebra algebra() const noexcept { return algebra_; }

    friend bool operator==(const SemiringScalar&, const SemiringScalar&) = default;

private:
    double value_;
    Algebra algebra_;
};

SemiringScalar scalar_join(const SemiringScalar& a, const SemiringScalar& b);
SemiringScalar scalar_mul(const SemiringScalar& a, const SemiringScalar& b);

/// Dense rectangular matrix over one of the two algebras, row-major.
class SemiringMatrix {
public:
    /// rows x cols matrix filled with the additive identity.
    SemiringMatrix(int rows, int cols, Algebra algebra);

    /// Multiplicative identity: one on the diagonal, zero elsewhere.
    static SemiringMatrix identity(int n, Algebra algebra);

    static SemiringMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                    Algebra algebra);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    Algebra algebra() const noexcept { return algebra_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double at(int r, int c) const;
    void set(int r, int c, double v);

    std::span<const double> data() const noexcept { return entries_; }

    friend bool operator==(const SemiringMatrix&, const SemiringMatrix&) = default;

private:
    int rows_;
    int cols_;
    Algebra algebra_;
    std::vector<double> entries_;
};

/// Semiring matrix product: (i,j) entry is the join over p of A(i,p) ∘ B(p,j).
SemiringMatrix mat_mul(const SemiringMatrix& a, const SemiringMatrix& b);

/// Entrywise maximum of two equal-shape matrices.
SemiringMatrix mat_join(const SemiringMatrix& a, const SemiringMatrix& b);

/// k-fold semiring power of a square matrix; the 0-th power is the identity.
SemiringMatrix mat_power(const SemiringMatrix& a, int k);

/// Kleene plus A⁺ = join of A^k for k = 0, 1, 2, ... (the 0-th power
/// included, so the diagonal always dominates the multiplicative identity).
///
/// Requires a max-product matrix with finite entries and max cycle mean
/// strictly below one; then every path product over n or more arcs is
/// dominated by a shorter one, so the infinite join equals the join of the
/// first n - 1 powers, which is what gets computed. Throws Divergent when
/// the cycle mean is at or above one.
SemiringMatrix kleene_plus(const SemiringMatrix& a);

/// Entrywise exp(a) / gamma, mapping max-plus into max-product (-inf to 0).
///
/// Up to the gamma scaling this is a semiring isomorphism:
/// exp_transform(A ⊞ B, g²) = exp_transform(A, g) ⊠ exp_transform(B, g).
SemiringMatrix exp_transform(const SemiringMatrix& max_plus, double gamma);

/// Entrywise ln(a * gamma), inverse of exp_transform (0 maps to -inf).
/// Entries must lie in [0, +inf).
SemiringMatrix log_transform(const SemiringMatrix& max_product, double gamma);

/// Infinity norm, max_i |x_i|. Max-plus entries equal to -inf mean
/// "no event" and are skipped; an all-(-inf) vector has norm 0.
double inf_norm(std::span<const double> x, Algebra algebra);

/// A ∘ x for a column vector x.
std::vector<double> mat_apply(const SemiringMatrix& a, std::span<const double> x);

/// pᵀ ∘ A for a row vector p; entry j is the join over i of p(i) ∘ A(i,j).
/// Equals Aᵀ ∘ p read as a column vector.
std::vector<double> left_apply(std::span<const double> p, const SemiringMatrix& a);

}  // namespace maxstab
