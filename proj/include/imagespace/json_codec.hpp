// SPDX-License-Identifier: Apache-2.0
//
// JSON wire formats shared by the CLI and the HTTP service.
//
// Annotation document (one object, an array of them, or {"instances": [...]}):
//   {"instanceID": "...", "classID": "...",
//    "assertions": [{"property": "...", "ref": "..."} |
//                   {"property": "...", "literal": "...", "datatype": "dateTime"}]}
// A literal without "datatype" takes the first datatype of the property's
// range, or string.
#pragma once

#include <string_view>

#include <json.hpp>

#include "imagespace/consistency.hpp"
#include "imagespace/derivations.hpp"
#include "imagespace/ontology.hpp"
#include "imagespace/violation.hpp"

namespace imagespace::json {

using nlohmann::json;

json to_json(const Violation& v);
json to_json(const std::vector<Violation>& vs);
json to_json(const FormSpec& spec);
json to_json(const EditOutcome& outcome);
json to_json(const RemovedTuple& t);

json to_json(const ClassDef& c);
json to_json(const PropertyDef& p);
json to_json(const Restriction& r);
json to_json(const InstanceDef& i);

ClassDef class_from_json(const json& j);
PropertyDef property_from_json(const json& j);
Restriction restriction_from_json(const json& j, const OntologyDoc& doc);
InstanceDef instance_from_json(const json& j, const OntologyDoc& doc);

/// {"op": "insert"|"update"|"delete",
///  "target": "class"|"property"|"instance"|"restriction"|"tuple", ...}
/// Throws Error(InvalidArgument) on malformed input.
Edit edit_from_json(const json& j, const OntologyDoc& doc);

/// Annotation documents in any of the accepted shapes.
/// Throws Error(InvalidArgument).
InstanceGraph annotations_from_json(const json& j, const OntologyDoc& doc);
json annotations_to_json(const InstanceGraph& graph);

}  // namespace imagespace::json
