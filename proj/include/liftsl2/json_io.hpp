#pragma once

#include <json.hpp>

#include "liftsl2/gallery.hpp"
#include "liftsl2/lift.hpp"
#include "liftsl2/tree.hpp"

namespace liftsl2 {

using Json = nlohmann::ordered_json;

// {"char": 0|p, "p": p, "r": r, "N": N}
Json field_to_json(const Field& f);
FieldPtr field_from_json(const Json& j);

// {"val": int|"inf", "digits": [r*N ints row-major]} with optional "m"
// (certified digit count), "exact", "neg", "approx". Round-trips bit-exactly.
Json fe_to_json(const Fe& x);
Fe fe_from_json(const FieldPtr& f, const Json& j);

Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const FieldPtr& f, bool ext, const Json& j);

// {"schema": 1, "field": hdr, "ext": bool, "entries": [4 entries]}
Json mat_to_json(const Mat2& m);
Mat2 mat_from_json(const Json& j);

Json vertex_to_json(const TreeVertex& v);
TreeVertex vertex_from_json(const FieldPtr& f, const Json& j);

Json descriptor_to_json(const FixedSetDescriptor& d);
Json nesting_to_json(const NestingReport& r);
Json element_class_to_json(const ElementClass& c);

Json gog_to_json(const GraphOfGroups& g);
GraphOfGroups gog_from_json(const Json& j);
Json lift_report_to_json(const LiftReport& r);
Json no_lift_report_to_json(const NoLiftReport& r);
Json trace_scan_to_json(const TraceScanReport& r, bool with_entries);

// CLI literals: "5", "-3/4", "u^2", "-3/4*u^-2" ("t" is an alias for "u").
Fe parse_fe_literal(const FieldPtr& f, const std::string& text);

} // namespace liftsl2
