#pragma once

// Unit conventions used throughout the library:
//   - Frequencies cross the public API as ordinary frequencies (omega / 2pi)
//     in GHz. Internally everything is angular, in rad/ns.
//   - Times are in ns.
//   - Decay rates cross the API in kHz and are applied directly as rates in
//     1/ns (no 2pi factor); see the metadata block emitted with every result.

namespace sideband {

inline constexpr double two_pi = 6.283185307179586476925286766559;

constexpr double ghz_to_rad_ns(double f_ghz) { return two_pi * f_ghz; }
constexpr double rad_ns_to_ghz(double w_rad_ns) { return w_rad_ns / two_pi; }
constexpr double rad_ns_to_mhz(double w_rad_ns) { return 1e3 * w_rad_ns / two_pi; }

// 1 kHz = 1e3 / s = 1e-6 / ns.
constexpr double khz_to_rate_ns(double r_khz) { return 1e-6 * r_khz; }

}  // namespace sideband
