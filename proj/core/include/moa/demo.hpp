#pragma once

#include <array>

// The 2-by-2 reference system used by the `demo` subcommand and the
// acceptance suite: a small symmetric positive-definite system with a
// hand-checkable first iteration. Both consumers check against these
// constants so they cannot drift apart.
namespace moa::demo {

inline constexpr std::array<double, 4> kMatrix = {4.0, 1.0, 1.0, 3.0};
inline constexpr std::array<double, 2> kRhs = {1.0, 2.0};
inline constexpr std::array<double, 2> kGuess = {2.0, 1.0};

// First-iteration reference values. The initial residual is exact in
// floating point; alpha is the exact ratio 73/331; the vectors are
// quoted to four decimals, so they carry a wider tolerance.
inline constexpr std::array<double, 2> kResidual0 = {-8.0, -3.0};
inline constexpr double kAlpha = 73.0 / 331.0;
inline constexpr std::array<double, 2> kX1 = {0.2356, 0.3384};
inline constexpr std::array<double, 2> kR1 = {-0.2810, 0.7492};
inline constexpr std::array<double, 2> kP1 = {-0.3512, 0.7229};

inline constexpr double kAlphaTolerance = 1e-12;
inline constexpr double kVectorTolerance = 5e-4;

// Exact solution <1/11, 7/11>.
inline constexpr std::array<double, 2> kSolution = {1.0 / 11.0, 7.0 / 11.0};

}  // namespace moa::demo
