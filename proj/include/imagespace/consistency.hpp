// SPDX-License-Identifier: Apache-2.0
//
// Ontology consistency: whole-document checks, guarded edits (reject or
// cascade), relation candidate filters and instance validation.
#pragma once

#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "imagespace/ontology.hpp"
#include "imagespace/violation.hpp"

namespace imagespace {

/// Structural violations of the document, normalized (code order, then
/// subjects). Empty means consistent.
std::vector<Violation> check_ontology(const OntologyDoc& doc);

// Edits ---------------------------------------------------------------------

enum class EditOp { Insert, Update, Delete };

struct ClassEdit {
  EditOp op;
  ClassDef def;  // only def.id is read for Delete
};

struct PropertyEdit {
  EditOp op;
  PropertyDef def;
};

struct InstanceEdit {
  EditOp op;
  InstanceDef def;
};

/// Insert anchors the new restriction under `anchor` via `relation`.
/// Update replaces the restriction in place; Delete also removes anchors.
struct RestrictionEdit {
  EditOp op;
  Restriction def;
  Identifier anchor;
  ClassRelation relation = ClassRelation::SubClassOf;
};

/// Single relation tuple. Relation names follow the storage tables:
/// class relations (subClassOf, disjointWith, ...), oneOf, subPropertyOf,
/// samePropertyAs, inverseOf, domain, range, differentIndividualFrom,
/// sameIndividualAs, import.
struct TupleEdit {
  EditOp op;  // Insert or Delete
  std::string relation;
  Identifier subject;
  Identifier object;
};

using Edit = std::variant<ClassEdit, PropertyEdit, InstanceEdit, RestrictionEdit, TupleEdit>;

struct RemovedTuple {
  std::string relation;
  Identifier subject;
  std::string object;

  auto operator<=>(const RemovedTuple&) const = default;
};

struct Applied {
  OntologyDoc doc;
};

struct Cascaded {
  OntologyDoc doc;
  std::vector<RemovedTuple> removed;
};

struct Rejected {
  std::vector<Violation> violations;
};

using EditOutcome = std::variant<Applied, Cascaded, Rejected>;

/// Applies the edit when the result is consistent. A deletion whose only
/// violations are dangling references removes the referencing tuples as
/// well (entities whose mandatory reference disappears are removed too) and
/// reports them. Everything else that breaks consistency is rejected.
/// Throws Error(InconsistentInputDoc) for an inconsistent input and
/// Error(InvalidEdit) for malformed edits (unknown targets, duplicate ids).
EditOutcome apply_edit(const OntologyDoc& doc, const Edit& edit);

/// Named classes c for which inserting relation(class_id, c) would be
/// applied. Computed from the hierarchy rules, without simulating edits.
/// Throws Error(UnknownClass).
std::set<Identifier> candidate_classes(const OntologyDoc& doc, std::string_view class_id,
                                       ClassRelation relation);

/// Checks one instance against its class's effective restrictions and the
/// domain, range and uniqueness of the properties it uses. Referenced
/// instances are looked up in the graph first, then in the document.
/// Throws Error(UnknownInstance).
std::vector<Violation> validate_instance(const OntologyDoc& doc, const InstanceGraph& graph,
                                         std::string_view instance_id);

/// validate_instance over every instance of the graph.
std::vector<Violation> validate_graph(const OntologyDoc& doc, const InstanceGraph& graph);

}  // namespace imagespace
