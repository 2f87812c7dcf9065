#ifndef REION_ION_SPEC_FILE_HPP
#define REION_ION_SPEC_FILE_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "reion/ion_model.hpp"

namespace reion {

// Ion species file:
//
//   moment_mode = lande            # or exact_ls
//   ground_manifold = 4I9/2        # optional
//   excited_manifold = 4F3/2       # optional
//
//   [manifold]
//   # label  L  S    J    centroid_cm-1
//   4I9/2    6  3/2  9/2  0
//
//   [cf]
//   # k  q  Re  Im   (cm^-1)
//   2    0  -460  0
//
//   [rme]
//   # bra  ket  k  value
//   4I9/2  4I9/2  2  -0.4954
//
// Unknown keys, sections, or malformed rows raise ParseError with the line
// and column.
IonSpec parse_ion_spec(std::istream& in, const std::string& source = "<ion spec>");
IonSpec load_ion_spec(const std::filesystem::path& path);
void write_ion_spec(std::ostream& out, const IonSpec& spec);

std::string to_string(MomentMode mode);

}  // namespace reion

#endif  // REION_ION_SPEC_FILE_HPP
