#include "reion/selection_rules.hpp"

namespace reion {

std::string to_string(Polarisation p) { return p == Polarisation::pi ? "pi" : "sigma"; }

Polarisation selection_rule(Irrep initial, Irrep final_irrep) {
  if (is_single_ion(initial) != is_single_ion(final_irrep)) {
    throw ArgumentError("selection_rule: cannot mix single-ion and pair irreps (" + to_string(initial) + " -> " +
                        to_string(final_irrep) + ")");
  }
  return initial == final_irrep ? Polarisation::sigma : Polarisation::pi;
}

Irrep product_irrep(Irrep first, Irrep second) {
  if (!is_single_ion(first) || !is_single_ion(second)) {
    throw ArgumentError("product_irrep: factors must be Gamma3 or Gamma4");
  }
  return first == second ? Irrep::gamma2 : Irrep::gamma1;
}

}  // namespace reion
