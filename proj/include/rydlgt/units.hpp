#pragma once

#include <numbers>

// Energies are angular frequencies in rad/us, times in us, lengths in units of
// the lattice spacing a. File formats carry frequencies as value/2pi in MHz.
namespace rydlgt::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Rabi frequency peak of the hardware, Omega_max / 2pi = 2.5 MHz.
inline constexpr double kOmegaMaxMHz = 2.5;
/// C6 / 2pi for the 70S_1/2 Rydberg state of Rb-87, MHz um^6.
inline constexpr double kC6MHzUm6 = 862690.0;

constexpr double from_mhz(double mhz) { return kTwoPi * mhz; }
constexpr double to_mhz(double rad_per_us) { return rad_per_us / kTwoPi; }

inline constexpr double kOmegaMax = from_mhz(kOmegaMaxMHz);

}  // namespace rydlgt::units
