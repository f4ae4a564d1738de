#pragma once

#include <cstdint>
#include <string>

#include "ngls/family.hpp"
#include "ngls/frequency.hpp"

namespace ngls {

/// Family description from a JSON document of the form
///   {"symbols": [{"id": "L", "kind": "luroth"},
///                {"id": "B", "kind": "finite", "lengths": ["1/2", "1/2"]}]}
/// Rationals are "p/q" strings (plain integers and decimals also parse).
/// Throws ConfigError carrying the JSON-pointer path of the bad field.
Family parse_family(const std::string& json_text);

/// parse_family applied to the contents of a file.
Family load_family(const std::string& path);

/// The family serialized back to the config schema with every default made
/// explicit; parsing the result reproduces the family exactly.
std::string family_to_json(const Family& family);

/// Digit-law grammar, one law per symbol:
///   dirac:3 | uniform:4 | geometric:1/2 | power:2 | logpower:2
///   | head:1/2,1/3,1/6 | head:1/2+geometric:1/3
/// A bare law addresses a one-symbol family; otherwise entries are joined
/// with ';' as  ID=LAW@MASS  and the masses must sum to 1 exactly.
FrequencyVector parse_alpha(const Family& family, const std::string& spec);

/// Driving-sequence grammar:
///   periodic:L,B | periodic:L,L|B,L (prefix before '|')
///   | weave:1/2,1/2 | bernoulli:1/2,1/2
/// Weights are listed in family order; the seed feeds the bernoulli rule.
OmegaRule parse_omega(const Family& family, const std::string& spec,
                      uint64_t seed);

}  // namespace ngls
