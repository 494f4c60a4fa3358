#include "maxstab/fixtures.hpp"

#include <cmath>

namespace maxstab::fixtures {

namespace {
constexpr double kNegInf = -kInf;
}

JumpLinearSystem det_2x2() {
    const SemiringMatrix a = SemiringMatrix::from_rows(
        {{2.0 / 3.0, 2.0}, {1.0 / 3.0, 3.0 / 4.0}}, Algebra::MaxProduct);
    return JumpLinearSystem(Algebra::MaxProduct, {a});
}

MarkovChain det_2x2_chain() {
    return MarkovChain(std::vector<std::vector<double>>{{1.0}});
}

std::vector<double> det_2x2_p() { return {2.0, 5.0}; }

JumpLinearSystem two_mode(double mode1_scale) {
    SemiringMatrix a1 = SemiringMatrix::from_rows(
        {{1.05 * mode1_scale, 1.5 * mode1_scale}, {0.4 * mode1_scale, 0.3 * mode1_scale}},
        Algebra::MaxProduct);
    SemiringMatrix a2 =
        SemiringMatrix::from_rows({{0.5, 0.4}, {0.7, 0.3}}, Algebra::MaxProduct);
    return JumpLinearSystem(Algebra::MaxProduct, {std::move(a1), std::move(a2)});
}

MarkovChain two_mode_chain() { return MarkovChain({{0.3, 0.7}, {0.4, 0.6}}); }

std::vector<std::vector<double>> two_mode_p() { return {{4.0, 6.0}, {3.0, 2.0}}; }

JumpLinearSystem production() {
    // Machine processing times.
    const double s1 = 1.0, s2 = 2.0, s3 = 1.0;

    SemiringMatrix a1 = SemiringMatrix::from_rows(
        {{s1, kNegInf, kNegInf}, {2 * s1, s2, kNegInf}, {2 * s1 + s2, 2 * s2, s3}},
        Algebra::MaxPlus);
    SemiringMatrix a2 = SemiringMatrix::from_rows(
        {{s1, 2 * s2, kNegInf}, {kNegInf, s2, kNegInf}, {2 * s1, s1 + 2 * s2, s3}},
        Algebra::MaxPlus);
    SemiringMatrix b1 =
        SemiringMatrix::from_rows({{0.0}, {s2}, {s1 + s2}}, Algebra::MaxPlus);
    SemiringMatrix b2 =
        SemiringMatrix::from_rows({{s2}, {0.0}, {s1 + s2}}, Algebra::MaxPlus);
    SemiringMatrix c =
        SemiringMatrix::from_rows({{kNegInf, kNegInf, s3}}, Algebra::MaxPlus);

    return JumpLinearSystem(Algebra::MaxPlus, {std::move(a1), std::move(a2)},
                            std::vector<SemiringMatrix>{std::move(b1), std::move(b2)},
                            std::vector<SemiringMatrix>{c, c});
}

MarkovChain production_chain() { return MarkovChain({{0.8, 0.2}, {0.2, 0.8}}); }

double production_period() { return 2.5; }

double production_gamma() { return std::exp(production_period()); }

std::vector<std::vector<double>> production_p() {
    return {{12.0, 12.0, 1.0}, {3.0, 32.0, 1.0}};
}

Nonlinear2dParams nonlinear_params() { return {0.96, 1.2, 0.76, 0.96, -0.15}; }

double nonlinear_gamma() { return 5.0; }

std::vector<double> nonlinear_p() { return {1.0, 1.25}; }

}  // namespace maxstab::fixtures
