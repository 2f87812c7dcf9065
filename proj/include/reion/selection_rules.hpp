#ifndef REION_SELECTION_RULES_HPP
#define REION_SELECTION_RULES_HPP

#include <string>

#include "reion/ion_model.hpp"

namespace reion {

// pi: E parallel to c; sigma: E perpendicular to c.
enum class Polarisation { pi, sigma };

std::string to_string(Polarisation p);

inline bool is_single_ion(Irrep irrep) { return irrep == Irrep::gamma3 || irrep == Irrep::gamma4; }

// Electric-dipole polarisation for a transition between two C_s irreps.
// Both arguments must be single-ion (Gamma3/Gamma4) or both pair
// (Gamma1/Gamma2) labels: equal labels are sigma, crossed labels pi.
// Mixed kinds throw ArgumentError.
Polarisation selection_rule(Irrep initial, Irrep final_irrep);

// Gamma3 x Gamma4 = Gamma1, Gamma3 x Gamma3 = Gamma4 x Gamma4 = Gamma2.
Irrep product_irrep(Irrep first, Irrep second);

}  // namespace reion

#endif  // REION_SELECTION_RULES_HPP
