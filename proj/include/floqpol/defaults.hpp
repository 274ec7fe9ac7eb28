#ifndef FLOQPOL_DEFAULTS_HPP
#define FLOQPOL_DEFAULTS_HPP

#include <cstddef>

// Every numerical tolerance used by the library lives here. The CLI exposes
// the user-facing ones as flags; README.md carries the same table.
namespace floqpol::defaults {

// model
inline constexpr double kDipoleSymmetryTol = 1e-12;

// floquet
inline constexpr int kNmax = 8;
inline constexpr int kNmaxCap = 1024;
inline constexpr std::size_t kDimensionCap = 20000;
inline constexpr double kMatrixSymmetryTol = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiOffDiagonalRel = 1e-12;
inline constexpr double kWeightTieTol = 1e-12;
inline constexpr double kConvergenceTol = 1e-8;

// initcond
inline constexpr double kConditionLimit = 1e8;
inline constexpr double kPinvCutoffRel = 1e-12;
inline constexpr double kSingularAbs = 1e-12;

// polarization
inline constexpr double kBeatAmplitudeFloor = 1e-10;

// analytic
inline constexpr double kPoleTol = 1e-14;
inline constexpr double kResonanceTol = 1e-12;

// oracle
inline constexpr int kStepsPerPeriod = 200;
inline constexpr double kWindowTol = 1e-9;

// scan / cli
inline constexpr double kFitConditionLimit = 1e10;
inline constexpr double kCompareTol = 1e-5;
inline constexpr int kComparePeriods = 10;

}  // namespace floqpol::defaults

#endif  // FLOQPOL_DEFAULTS_HPP
