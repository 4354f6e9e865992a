#ifndef GPT_CATALOG_HPP
#define GPT_CATALOG_HPP

#include <optional>
#include <string>
#include <vector>

#include "gpt/theory.hpp"

namespace gpt {

/// Builtin state catalog; these names are part of the DSL surface and stay
/// stable. Integer parameters arrive as doubles (the DSL has one numeric
/// literal form) and must be whole numbers.
///   point_mass(k)       classical, default d = k+1
///   uniform(d)          classical
///   computational(k)    quantum, default d = k+1
///   plus_state          quantum d=2
///   singlet             quantum 2x2 composite
///   maximally_mixed(d)  quantum
///   gbit_vertex(k)      boxworld, k in 0..3
///   gbit_center         boxworld
State named_state(TheoryId theory, const std::string& name, const std::vector<double>& params);

/// Same catalog, bound to a declared system: the system fixes dimensions and
/// must be compatible with the name (BadParams otherwise).
State named_state(const SystemRef& system, const std::string& name,
                  const std::vector<double>& params);

bool is_catalog_state_name(const std::string& name);

}  // namespace gpt

#endif
