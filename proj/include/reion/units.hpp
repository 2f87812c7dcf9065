#ifndef REION_UNITS_HPP
#define REION_UNITS_HPP

// Internal energy unit is GHz (E/h). Fields are Tesla, exchange constants
// Kelvin (E/k_B), crystal-field parameters cm^-1.
namespace reion::units {

inline constexpr double ghz_per_wavenumber = 29.9792458;
inline constexpr double bohr_magneton_ghz_per_tesla = 13.9962449;
inline constexpr double boltzmann_ghz_per_kelvin = 20.8366122;
inline constexpr double tesla_per_kelvin = boltzmann_ghz_per_kelvin / bohr_magneton_ghz_per_tesla;

constexpr double wavenumber_to_ghz(double cm) { return cm * ghz_per_wavenumber; }
constexpr double kelvin_to_ghz(double k) { return k * boltzmann_ghz_per_kelvin; }

}  // namespace reion::units

#endif  // REION_UNITS_HPP
