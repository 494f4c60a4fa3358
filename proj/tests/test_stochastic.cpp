#include <cmath>
#include <vector>

#include <doctest.h>

#include "maxstab/deterministic.hpp"
#include "maxstab/fixtures.hpp"
#include "maxstab/monte_carlo.hpp"
#include "maxstab/stochastic.hpp"
#include "support/oracles.hpp"

using namespace maxstab;

namespace {

// Random small jump system plus a random positive weight family.
struct RandomInstance {
    JumpLinearSystem sys;
    MarkovChain chain;
    std::vector<std::vector<double>> p;
};

RandomInstance random_instance(SplitMix64& rng, int n, int modes) {
    std::vector<SemiringMatrix> a;
    for (int m = 0; m < modes; ++m) {
        a.push_back(oracles::random_max_product(rng, n, n, 0.0, 1.5, 0.2));
    }
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(modes));
    for (auto& row : rows) {
        row = oracles::random_positive_vector(rng, modes, 0.05, 1.0);
        double sum = 0.0;
        for (double v : row) sum += v;
        for (double& v : row) v /= sum;
        // nudge the row onto an exact unit sum
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < row.size(); ++i) acc += row[i];
        row.back() = 1.0 - acc;
    }
    std::vector<std::vector<double>> p(static_cast<std::size_t>(modes));
    for (auto& vec : p) vec = oracles::random_positive_vector(rng, n, 0.2, 4.0);
    return {JumpLinearSystem(Algebra::MaxProduct, std::move(a)), MarkovChain(rows),
            std::move(p)};
}

double family_value(const std::vector<std::vector<double>>& p, std::span<const double> x,
                    int mode) {
    double best = 0.0;
    for (std::size_t s = 0; s < x.size(); ++s) best = raw_join(best, p[mode - 1][s] * x[s]);
    return best;
}

}  // namespace

TEST_CASE("rescaled matrix") {
    const SemiringMatrix a1 = fixtures::two_mode().system_matrix(1);

    SUBCASE("unit weights leave the matrix unchanged") {
        const std::vector<double> ones{1.0, 1.0};
        CHECK(tilde_matrix(a1, ones, ones) == a1);
    }

    SUBCASE("two-mode example entries") {
        const SemiringMatrix t =
            tilde_matrix(a1, std::vector<double>{3.0, 2.0}, std::vector<double>{4.0, 6.0});
        CHECK(t.at(0, 0) == doctest::Approx(0.7875).epsilon(1e-12));
        CHECK(t.at(0, 1) == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(t.at(1, 0) == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(t.at(1, 1) == doctest::Approx(0.1).epsilon(1e-12));
    }

    SUBCASE("the largest element is the all-ones sandwich") {
        SplitMix64 rng(4);
        for (int rep = 0; rep < 20; ++rep) {
            const SemiringMatrix a = oracles::random_max_product(rng, 3, 3, 0.0, 2.0, 0.2);
            const SemiringMatrix t =
                tilde_matrix(a, oracles::random_positive_vector(rng, 3, 0.1, 2.0),
                             oracles::random_positive_vector(rng, 3, 0.1, 2.0));
            const SemiringMatrix ones = SemiringMatrix::from_rows(
                {{1.0, 1.0, 1.0}}, Algebra::MaxProduct);
            const SemiringMatrix col = SemiringMatrix::from_rows(
                {{1.0}, {1.0}, {1.0}}, Algebra::MaxProduct);
            const double sandwich = mat_mul(mat_mul(ones, t), col).at(0, 0);
            double direct = 0.0;
            for (int r = 0; r < 3; ++r)
                for (int s = 0; s < 3; ++s) direct = raw_join(direct, t.at(r, s));
            CHECK(sandwich == direct);
        }
    }
}

TEST_CASE("one-step verification on the two-mode example") {
    const JumpLinearSystem sys = fixtures::two_mode();
    const MarkovChain chain = fixtures::two_mode_chain();
    const StochasticCheck check = verify_one_step(sys, chain, fixtures::two_mode_p());

    CHECK(check.accepted);
    CHECK(check.delta[0] == doctest::Approx(0.86625).epsilon(1e-9));
    CHECK(check.delta[1] == doctest::Approx(0.92).epsilon(1e-9));
    CHECK(check.worst_mode == 2);
    CHECK(check.max_delta() == check.delta[1]);
}

TEST_CASE("one mode degenerates to the deterministic slack") {
    SplitMix64 rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        const SemiringMatrix a = oracles::random_max_product(rng, 3, 3, 0.0, 1.2, 0.2);
        const std::vector<double> p = oracles::random_positive_vector(rng, 3, 0.1, 3.0);
        const JumpLinearSystem sys(Algebra::MaxProduct, {a});
        const MarkovChain chain(std::vector<std::vector<double>>{{1.0}});
        const StochasticCheck st = verify_one_step(sys, chain, {p});
        const DetCheck det = verify_det_certificate(a, p);
        CHECK(st.delta[0] == det.slack);
        CHECK(st.accepted == det.accepted);
    }
}

TEST_CASE("a common scaling of every weight vector changes nothing") {
    SplitMix64 rng(33);
    for (int rep = 0; rep < 20; ++rep) {
        RandomInstance inst = random_instance(rng, 3, 3);
        const StochasticCheck base = verify_one_step(inst.sys, inst.chain, inst.p);
        const double rho = rng.uniform(0.01, 50.0);
        auto scaled = inst.p;
        for (auto& vec : scaled)
            for (double& v : vec) v *= rho;
        const StochasticCheck same = verify_one_step(inst.sys, inst.chain, scaled);
        for (int m = 0; m < 3; ++m) {
            CHECK(same.delta[m] == doctest::Approx(base.delta[m]).epsilon(1e-12));
        }
    }
}

TEST_CASE("k-step verification") {
    const JumpLinearSystem sys = fixtures::two_mode();
    const MarkovChain chain = fixtures::two_mode_chain();
    const auto p = fixtures::two_mode_p();

    SUBCASE("one step is the one-step check, bit for bit") {
        const StochasticCheck a = verify_one_step(sys, chain, p);
        const StochasticCheck b = verify_k_step(sys, chain, p, 1);
        CHECK(a.delta == b.delta);
        CHECK(a.accepted == b.accepted);
    }

    SUBCASE("path cap") {
        CHECK_THROWS_AS(verify_k_step(sys, chain, p, 25), PathExplosion);
        CHECK_THROWS_AS(verify_k_step(sys, chain, p, 3, 4), PathExplosion);
        CHECK_NOTHROW(verify_k_step(sys, chain, p, 3, 8));
    }

    SUBCASE("deltas equal the expectation oracle at the maximizing state") {
        SplitMix64 rng(61);
        for (int rep = 0; rep < 40; ++rep) {
            const int n = 2 + static_cast<int>(rng.uniform01() * 2);
            const int modes = 2 + static_cast<int>(rng.uniform01() * 2);
            const int k0 = 1 + static_cast<int>(rng.uniform01() * 3);
            RandomInstance inst = random_instance(rng, n, modes);
            const StochasticCheck check = verify_k_step(inst.sys, inst.chain, inst.p, k0);
            for (int y = 1; y <= modes; ++y) {
                std::vector<double> x_star(static_cast<std::size_t>(n));
                for (int s = 0; s < n; ++s) x_star[s] = 1.0 / inst.p[y - 1][s];
                const double expectation =
                    brute_expectation(inst.sys, inst.chain, inst.p, x_star, y, k0);
                const double value = family_value(inst.p, x_star, y);
                CHECK(expectation / value ==
                      doctest::Approx(check.delta[y - 1]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("the one-step delta bounds the expectation everywhere") {
    SplitMix64 rng(62);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 2);
        const int modes = 2 + static_cast<int>(rng.uniform01() * 2);
        RandomInstance inst = random_instance(rng, n, modes);
        const StochasticCheck check = verify_one_step(inst.sys, inst.chain, inst.p);
        for (int trial = 0; trial < 25; ++trial) {
            const std::vector<double> x = oracles::random_positive_vector(rng, n, 0.0, 5.0);
            const int y = 1 + static_cast<int>(rng.uniform01() * modes);
            const double expectation =
                brute_expectation(inst.sys, inst.chain, inst.p, x, y, 1);
            const double value = family_value(inst.p, x, y);
            CHECK(expectation <= check.delta[y - 1] * value * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("exact expectation enumeration") {
    SUBCASE("a deterministic chain reduces to the unique path") {
        const JumpLinearSystem sys = fixtures::two_mode();
        const MarkovChain flip({{0.0, 1.0}, {1.0, 0.0}});
        const auto p = fixtures::two_mode_p();
        const std::vector<double> x{1.0, 0.5};

        // Modes 1, 2, 1: states step through A(2) ∘ A(1) ∘ x.
        std::vector<double> state = x;
        state = mat_apply(sys.system_matrix(1), state);
        state = mat_apply(sys.system_matrix(2), state);
        const double expected = family_value(p, state, 1);
        CHECK(brute_expectation(sys, flip, p, x, 1, 2) ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("zero state gives zero expectation") {
        const JumpLinearSystem sys = fixtures::two_mode();
        const MarkovChain chain = fixtures::two_mode_chain();
        CHECK(brute_expectation(sys, chain, fixtures::two_mode_p(),
                                std::vector<double>{0.0, 0.0}, 1, 3) == 0.0);
    }

    SUBCASE("consistent with the one-step bound on the example") {
        const JumpLinearSystem sys = fixtures::two_mode();
        const MarkovChain chain = fixtures::two_mode_chain();
        const auto p = fixtures::two_mode_p();
        const StochasticCheck check = verify_one_step(sys, chain, p);
        const std::vector<double> x{1.0, 1.0};
        const double e = brute_expectation(sys, chain, p, x, 1, 1);
        CHECK(e <= check.delta[0] * family_value(p, x, 1));
    }

    SUBCASE("mode paths beyond the cap are refused") {
        const JumpLinearSystem sys = fixtures::two_mode();
        const MarkovChain chain = fixtures::two_mode_chain();
        CHECK_THROWS_AS(brute_expectation(sys, chain, fixtures::two_mode_p(),
                                          std::vector<double>{1.0, 1.0}, 1, 30),
                        PathExplosion);
    }
}

TEST_CASE("certificate search") {
    SUBCASE("finds a one-step certificate for the two-mode example") {
        SearchOptions opts;
        opts.seed = 11;
        const auto cert =
            search_certificate(fixtures::two_mode(), fixtures::two_mode_chain(), 1, opts);
        REQUIRE(cert.has_value());
        CHECK(cert->k0 == 1);
        CHECK(cert->max_delta() <= 1.0 - opts.margin);
        const StochasticCheck recheck = verify_k_step(
            fixtures::two_mode(), fixtures::two_mode_chain(), cert->p, cert->k0);
        CHECK(recheck.accepted);
        CHECK(recheck.delta == cert->delta);
    }

    SUBCASE("single stable mode: the objective approaches the cycle mean") {
        const SemiringMatrix a = fixtures::det_2x2().system_matrix(1);
        const JumpLinearSystem sys(Algebra::MaxProduct, {a});
        const MarkovChain chain(std::vector<std::vector<double>>{{1.0}});
        SearchOptions opts;
        opts.seed = 3;
        const auto cert = search_certificate(sys, chain, 1, opts);
        REQUIRE(cert.has_value());
        CHECK(cert->max_delta() >= max_cycle_mean(a) - 1e-9);
        CHECK(cert->max_delta() <= 1.0 - opts.margin);
        // A deterministic certificate exists under the same margin.
        CHECK(find_det_certificate(a, opts.margin).has_value());
    }

    SUBCASE("systems expanding in every entry are never certified") {
        SplitMix64 rng(71);
        std::vector<SemiringMatrix> a;
        for (int m = 0; m < 2; ++m) a.push_back(oracles::random_max_product(rng, 2, 2, 1.05, 2.0));
        const JumpLinearSystem sys(Algebra::MaxProduct, std::move(a));
        const MarkovChain chain = fixtures::two_mode_chain();
        SearchOptions opts;
        opts.seed = 5;
        opts.restarts = 16;
        CHECK(!search_certificate(sys, chain, 2, opts).has_value());

        const DecayFit fit = fit_mean_norm_decay(sys, chain, std::vector<double>{1.0, 1.0},
                                                 1, 100, 40, 5);
        CHECK(fit.a_hat < 1.0);
    }
}

TEST_CASE("certified systems satisfy the supermartingale inequality empirically") {
    const JumpLinearSystem sys = fixtures::two_mode();
    const MarkovChain chain = fixtures::two_mode_chain();
    const auto p = fixtures::two_mode_p();
    const StochasticCheck check = verify_one_step(sys, chain, p);
    REQUIRE(check.accepted);

    SplitMix64 rng(2025);
    for (int bucket = 0; bucket < 30; ++bucket) {
        const std::vector<double> x = oracles::random_positive_vector(rng, 2, 0.1, 3.0);
        const int y = 1 + static_cast<int>(rng.uniform01() * 2);
        const double value = family_value(p, x, y);

        const int draws = 2000;
        double sum = 0.0, sum_sq = 0.0;
        const std::vector<double> next = mat_apply(sys.system_matrix(y), x);
        for (int d = 0; d < draws; ++d) {
            const ModeSequence seq =
                sample_modes(chain, y, 1, derive_stream(555 + bucket, d));
            const double v = family_value(p, next, seq.modes[1]);
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / draws;
        const double se =
            std::sqrt((sum_sq / draws - mean * mean) / static_cast<double>(draws));
        CHECK(mean <= check.delta[y - 1] * value + 3.0 * se);
    }
}
