// SPDX-License-Identifier: Apache-2.0
//
// Pure derivations over an OntologyDoc: class ancestry, inherited
// restrictions, and annotation form layout.
#pragma once

#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "imagespace/ontology.hpp"

namespace imagespace {

/// Named ancestors of `class_id` via subClassOf, nearest first: ordered by
/// longest path length from the class, then by identifier, so every class
/// precedes its own ancestors. Restriction parents are skipped.
/// Throws Error(UnknownClass).
std::vector<Identifier> ancestors(const OntologyDoc& doc, std::string_view class_id);

/// Named classes that have `class_id` as an ancestor. Unordered.
std::set<Identifier> descendants(const OntologyDoc& doc, std::string_view class_id);

/// Membership test honouring the asserted hierarchy: true when
/// `class_id == target` or `target` is an ancestor of `class_id`.
bool is_subclass_or_self(const OntologyDoc& doc, std::string_view class_id,
                         std::string_view target);

struct EffectiveRestriction {
  Restriction restriction;
  Identifier declared_on;
  bool inherited = false;

  bool operator==(const EffectiveRestriction&) const = default;
};

/// Restrictions anchored via subClassOf on the class and its ancestors.
/// A restriction on property p declared by an ancestor is dropped when a
/// class between it and the queried class (or the class itself) also
/// restricts p. Own declarations come first, then ancestors in
/// ancestors() order. Throws Error(UnknownClass).
std::vector<EffectiveRestriction> effective_restrictions(const OntologyDoc& doc,
                                                         std::string_view class_id);

enum class WidgetHint { Scalar, ReferenceList, NestedCreate };

std::string_view to_string(WidgetHint w);

struct FormField {
  Identifier property;
  PropertyKind kind = PropertyKind::Object;
  /// toClass of a restriction on the property if any, else the first range
  /// entry, else empty.
  Identifier range_hint;
  std::optional<Count> min_c;
  std::optional<Count> max_c;
  std::optional<Count> c;
  bool inherited = false;
  WidgetHint widget = WidgetHint::Scalar;

  bool operator==(const FormField&) const = default;
};

struct FormSpec {
  Identifier class_id;
  std::vector<FormField> fields;

  bool operator==(const FormSpec&) const = default;
};

/// One field per property whose domain covers the class (directly or via an
/// ancestor) or that an effective restriction constrains. Fields are
/// ordered by property identifier.
/// Throws Error(UnknownClass) or Error(UnknownProperty) when a restriction
/// names an undeclared property.
FormSpec annotation_form_spec(const OntologyDoc& doc, std::string_view class_id);

/// True when some effective restriction on the class demands at least one
/// value (minCardinality, cardinality or their qualified forms >= 1).
bool has_required_properties(const OntologyDoc& doc, std::string_view class_id);

}  // namespace imagespace
