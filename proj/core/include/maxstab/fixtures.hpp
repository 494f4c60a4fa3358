#pragma once

#include <vector>

#include "maxstab/markov.hpp"
#include "maxstab/monte_carlo.hpp"

namespace maxstab::fixtures {

/// Single-mode 2x2 max-product system with a known hand certificate.
JumpLinearSystem det_2x2();
MarkovChain det_2x2_chain();
std::vector<double> det_2x2_p();  // [2, 5]

/// Two-mode max-product jump system; mode 1 alone is expanding, the chain
/// mixes it away. mode1_scale > 1 stresses mode 1 further (used to build
/// instances that need more than one-step certificates).
JumpLinearSystem two_mode(double mode1_scale = 1.0);
MarkovChain two_mode_chain();
std::vector<std::vector<double>> two_mode_p();  // {[4,6], [3,2]}

/// Three-machine production line in max-plus form, with input feed matrix B
/// and completion output C. Two routing modes switched by a sticky chain.
JumpLinearSystem production();
MarkovChain production_chain();
double production_period();                          // feed period T = 2.5
double production_gamma();                           // e^T
std::vector<std::vector<double>> production_p();     // {[12,12,1], [3,32,1]}

/// State-dependent 2-d max-product dynamics plus its linearization data.
Nonlinear2dParams nonlinear_params();                // delta = -0.15
double nonlinear_gamma();                            // 5
std::vector<double> nonlinear_p();                   // [1, 1.25]

}  // namespace maxstab::fixtures
