#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "prc/sigma_apical.hpp"

namespace prc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// args excludes the program name. Machine-readable output goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The JSON document printed by `check`.
std::string verdict_json(const HomogeneousSpaceSpec& spec, const ExistenceVerdict& verdict,
                         const TensorCoefficients& z);

}  // namespace prc::cli
