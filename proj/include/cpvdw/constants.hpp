#pragma once

// CODATA 2018 values used as configuration defaults.
namespace cpvdw::constants {

inline constexpr double kFineStructure = 7.2973525693e-3;
inline constexpr double kElectronMassEnergyEv = 0.51099895000e6;
inline constexpr double kBohrRadiusMeter = 5.29177210903e-11;
inline constexpr double kReducedComptonMeter = 3.8615926796e-13;
inline constexpr double kHartreeEv = 27.211386245988;

}  // namespace cpvdw::constants
