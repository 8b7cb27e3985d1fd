#pragma once

// Shared JSON plumbing.  Only translation units that actually serialize
// should include this; the public module headers stay string-based.

#include "json.hpp"

#include "defect_forge/bigint.hpp"
#include "defect_forge/ldp.hpp"

namespace defect_forge {

using Json = nlohmann::ordered_json;

/// Integers below 2^53 as JSON numbers, larger ones as decimal strings.
Json big_to_json(const BigInt& v);
BigInt big_from_json(const Json& j);

Json expr_to_json(const LdpExpr& f);
LdpExpr expr_from_json(const Json& j);

Json pair_to_json(const LowDefectPair& p);
LowDefectPair pair_from_json(const Json& j);

}  // namespace defect_forge
