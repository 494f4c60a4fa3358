#include <cmath>
#include <vector>

#include <doctest.h>

#include "maxstab/deterministic.hpp"
#include "maxstab/fixtures.hpp"
#include "maxstab/rng.hpp"
#include "support/oracles.hpp"

using namespace maxstab;

namespace {
constexpr double kNegInf = -kInf;

SemiringMatrix scaled(const SemiringMatrix& a, double factor) {
    SemiringMatrix out(a.rows(), a.cols(), a.algebra());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.set(i, j, factor * a.at(i, j));
    return out;
}
}  // namespace

TEST_CASE("max cycle mean") {
    SUBCASE("2x2 example: the off-diagonal cycle dominates") {
        const SemiringMatrix a = fixtures::det_2x2().system_matrix(1);
        CHECK(max_cycle_mean(a) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
        CHECK(max_cycle_mean(a) == doctest::Approx(oracles::max_cycle_mean_oracle(a)));
    }

    SUBCASE("diagonal matrices reduce to the largest self-loop") {
        const SemiringMatrix a =
            SemiringMatrix::from_rows({{0.5, 0.0}, {0.0, 0.9}}, Algebra::MaxProduct);
        CHECK(max_cycle_mean(a) == doctest::Approx(0.9).epsilon(1e-12));
    }

    SUBCASE("the expanding mode of the jump example") {
        const SemiringMatrix a1 = fixtures::two_mode().system_matrix(1);
        CHECK(max_cycle_mean(a1) == doctest::Approx(1.05).epsilon(1e-12));
        CHECK(max_cycle_mean(a1) ==
              doctest::Approx(oracles::max_cycle_mean_oracle(a1)).epsilon(1e-12));
    }

    SUBCASE("acyclic matrices") {
        SemiringMatrix nilpotent(3, 3, Algebra::MaxProduct);
        nilpotent.set(0, 1, 2.0);
        nilpotent.set(1, 2, 5.0);
        CHECK(max_cycle_mean(nilpotent) == 0.0);

        SemiringMatrix plus(3, 3, Algebra::MaxPlus);
        plus.set(0, 1, 1.0);
        CHECK(max_cycle_mean(plus) == kNegInf);
    }

    SUBCASE("matches exhaustive cycle enumeration on random digraphs") {
        SplitMix64 rng(2718);
        for (int rep = 0; rep < 60; ++rep) {
            const int n = 2 + static_cast<int>(rng.uniform01() * 5);
            const SemiringMatrix a =
                rep % 2 == 0 ? oracles::random_max_plus(rng, n, n, -3.0, 3.0, 0.4)
                             : oracles::random_max_product(rng, n, n, 0.0, 3.0, 0.4);
            const double got = max_cycle_mean(a);
            const double want = oracles::max_cycle_mean_oracle(a);
            if (want == kNegInf || want == 0.0) {
                CHECK(got == want);
            } else {
                CHECK(got == doctest::Approx(want).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("exponential stability predicate") {
    CHECK(is_exponentially_stable(fixtures::det_2x2().system_matrix(1)));
    CHECK(!is_exponentially_stable(SemiringMatrix::identity(3, Algebra::MaxProduct)));
    CHECK(!is_exponentially_stable(fixtures::two_mode().system_matrix(1)));
}

TEST_CASE("certificate verification") {
    const SemiringMatrix a = fixtures::det_2x2().system_matrix(1);

    SUBCASE("the hand certificate for the 2x2 example") {
        const DetCheck check = verify_det_certificate(a, fixtures::det_2x2_p());
        CHECK(check.accepted);
        CHECK(check.image[0] == raw_join(2.0 * (2.0 / 3.0), 5.0 * (1.0 / 3.0)));
        CHECK(check.image[1] == 4.0);
        CHECK(check.slack == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
        CHECK(check.violating_index == -1);
    }

    SUBCASE("all-ones certificate fails when a column max reaches one") {
        const SemiringMatrix b =
            SemiringMatrix::from_rows({{0.5, 1.3}, {0.2, 0.1}}, Algebra::MaxProduct);
        const DetCheck check = verify_det_certificate(b, std::vector<double>{1.0, 1.0});
        CHECK(!check.accepted);
        CHECK(check.violating_index == 1);
        CHECK(check.slack >= 1.0);
    }

    SUBCASE("the linearized 2-d example with p = [1, 1.25]") {
        const Nonlinear2dParams np = fixtures::nonlinear_params();
        const SemiringMatrix lin = SemiringMatrix::from_rows(
            {{np.a11, np.a12}, {np.a21, np.a22}}, Algebra::MaxProduct);
        const DetCheck check = verify_det_certificate(lin, fixtures::nonlinear_p());
        CHECK(check.accepted);
        CHECK(check.slack < 1.0);
    }

    SUBCASE("input validation") {
        CHECK_THROWS_AS(verify_det_certificate(a, std::vector<double>{1.0}),
                        DimensionMismatch);
        CHECK_THROWS_AS(verify_det_certificate(a, std::vector<double>{1.0, 0.0}),
                        DomainError);
    }
}

TEST_CASE("certificate search") {
    SUBCASE("stable example admits a certificate at margin 0.1") {
        const SemiringMatrix a = fixtures::det_2x2().system_matrix(1);
        const auto cert = find_det_certificate(a, 0.1);
        REQUIRE(cert.has_value());
        const DetCheck check = verify_det_certificate(a, cert->p);
        CHECK(check.accepted);
        CHECK(check.slack <= 0.9 + 1e-12);
    }

    SUBCASE("the identity is infeasible at any margin") {
        CHECK(!find_det_certificate(SemiringMatrix::identity(3, Algebra::MaxProduct), 0.01)
                   .has_value());
        CHECK(!find_det_certificate(SemiringMatrix::identity(3, Algebra::MaxProduct), 0.5)
                   .has_value());
    }

    SUBCASE("success coincides with the cycle-mean threshold on random 4x4") {
        SplitMix64 rng(414);
        const double margin = 0.15;
        for (int rep = 0; rep < 200; ++rep) {
            const SemiringMatrix a = oracles::random_max_product(rng, 4, 4, 0.0, 1.2, 0.35);
            const bool found = find_det_certificate(a, margin).has_value();
            const bool should = oracles::max_cycle_mean_oracle(a) < 1.0 - margin;
            CHECK(found == should);
        }
    }

    SUBCASE("margins must be sane") {
        const SemiringMatrix a = fixtures::det_2x2().system_matrix(1);
        CHECK_THROWS_AS(find_det_certificate(a, 0.0), DomainError);
        CHECK_THROWS_AS(find_det_certificate(a, 1.0), DomainError);
    }
}

TEST_CASE("closure-based value function") {
    SUBCASE("zero matrix: the closure is the identity") {
        const SemiringMatrix zero(3, 3, Algebra::MaxProduct);
        const std::vector<double> ones{1.0, 1.0, 1.0};
        CHECK(lyapunov_from_lambda(zero, ones) == ones);
    }

    SUBCASE("non-increasing along simulated trajectories") {
        const SemiringMatrix a = fixtures::det_2x2().system_matrix(1);
        const std::vector<double> p = lyapunov_from_lambda(a, std::vector<double>{1.0, 1.0});
        for (double v : p) CHECK(v > 0.0);

        SplitMix64 rng(88);
        for (int start = 0; start < 20; ++start) {
            std::vector<double> x = oracles::random_positive_vector(rng, 2, 0.0, 10.0);
            double value = raw_join(p[0] * x[0], p[1] * x[1]);
            for (int k = 0; k < 100; ++k) {
                x = mat_apply(a, x);
                const double next = raw_join(p[0] * x[0], p[1] * x[1]);
                CHECK(next <= value * (1.0 + 1e-12));
                value = next;
            }
        }
    }

    SUBCASE("scaling the weights scales the result") {
        const SemiringMatrix a = fixtures::det_2x2().system_matrix(1);
        const double rho = 3.7;
        const std::vector<double> base =
            lyapunov_from_lambda(a, std::vector<double>{1.0, 2.0});
        const std::vector<double> scaled_result =
            lyapunov_from_lambda(a, std::vector<double>{rho, 2.0 * rho});
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(scaled_result[i] == doctest::Approx(rho * base[i]).epsilon(1e-14));
        }
    }

    SUBCASE("unstable matrices are rejected") {
        CHECK_THROWS_AS(
            lyapunov_from_lambda(SemiringMatrix::identity(2, Algebra::MaxProduct),
                                 std::vector<double>{1.0, 1.0}),
            Divergent);
    }
}

TEST_CASE("stability predicate agrees with fitted norm decay") {
    // Matrices built around a dominant self-loop settle into an exactly
    // geometric tail, so the log-norm fit is tight.
    SplitMix64 rng(512);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 3;
        SemiringMatrix a = oracles::random_max_product(rng, n, n, 0.0, 0.5);
        const double loop = rep % 2 == 0 ? rng.uniform(0.55, 0.95) : rng.uniform(1.05, 1.5);
        a.set(0, 0, loop);

        std::vector<double> x(static_cast<std::size_t>(n), 1.0);
        std::vector<double> logs;
        for (int k = 0; k <= 200; ++k) {
            if (k >= 50) logs.push_back(std::log(inf_norm(x, Algebra::MaxProduct)));
            x = mat_apply(a, x);
        }
        double mean_k = 0.0, mean_y = 0.0;
        const int m = static_cast<int>(logs.size());
        for (int i = 0; i < m; ++i) {
            mean_k += i;
            mean_y += logs[i];
        }
        mean_k /= m;
        mean_y /= m;
        double sxx = 0.0, sxy = 0.0;
        for (int i = 0; i < m; ++i) {
            sxx += (i - mean_k) * (i - mean_k);
            sxy += (i - mean_k) * (logs[i] - mean_y);
        }
        const double slope = sxy / sxx;
        double ss = 0.0;
        for (int i = 0; i < m; ++i) {
            const double r = logs[i] - (mean_y + slope * (i - mean_k));
            ss += r * r;
        }
        const double residual = std::sqrt(ss / m);

        CHECK(residual < 1e-6);
        const double q = std::exp(slope);
        CHECK(is_exponentially_stable(a) == (q < 1.0));
        CHECK(q == doctest::Approx(max_cycle_mean(a)).epsilon(1e-6));
    }
}

TEST_CASE("accepted certificates contract the value along trajectories") {
    SplitMix64 rng(606);
    int accepted_count = 0;
    while (accepted_count < 8) {
        const SemiringMatrix a = oracles::random_max_product(rng, 3, 3, 0.0, 1.1, 0.3);
        const std::vector<double> p = oracles::random_positive_vector(rng, 3, 0.1, 3.0);
        const DetCheck check = verify_det_certificate(a, p);
        if (!check.accepted) continue;
        ++accepted_count;

        for (int start = 0; start < 10; ++start) {
            std::vector<double> x = oracles::random_positive_vector(rng, 3, 0.0, 5.0);
            for (int k = 0; k < 10; ++k) {
                double value = 0.0;
                for (int i = 0; i < 3; ++i) value = raw_join(value, p[i] * x[i]);
                x = mat_apply(a, x);
                double next = 0.0;
                for (int i = 0; i < 3; ++i) next = raw_join(next, p[i] * x[i]);
                CHECK(next <= check.slack * value * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("search margin controls the accepted slack") {
    // A barely-stable matrix passes a thin margin and fails a fat one.
    const SemiringMatrix a = scaled(fixtures::det_2x2().system_matrix(1), 1.0 / 0.9);
    // cycle mean is sqrt(2/3)/0.9 ~ 0.907
    CHECK(find_det_certificate(a, 0.05).has_value());
    CHECK(!find_det_certificate(a, 0.2).has_value());
}
