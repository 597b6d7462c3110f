// SPDX-License-Identifier: Apache-2.0
//
// In-memory ontology representation. Relation collections are std::set so
// that defaulted equality ignores declaration order; oneOf members and
// instance assertions keep their declared order.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace imagespace {

/// Absolute IRI or document-local name. Anonymous restrictions use the
/// reserved "_:r" prefix.
using Identifier = std::string;

inline constexpr std::string_view kRestrictionPrefix = "_:r";

bool is_valid_identifier(std::string_view id);
bool is_restriction_id(std::string_view id);

enum class Datatype { String, DateTime, Integer, Decimal, Boolean, AnyUri };

std::string_view to_string(Datatype d);
/// Accepts the short names ("dateTime") only.
std::optional<Datatype> datatype_from_name(std::string_view name);
bool is_datatype_name(std::string_view name);

struct Literal {
  std::string lexical;
  Datatype datatype = Datatype::String;

  auto operator<=>(const Literal&) const = default;
};

struct InstanceRef {
  Identifier id;

  auto operator<=>(const InstanceRef&) const = default;
};

using Value = std::variant<InstanceRef, Literal>;

/// Text stored in relational value columns and matched by queries.
const std::string& value_text(const Value& v);

/// True when the lexical form parses per its datatype.
bool literal_is_valid(const Literal& lit);

struct ClassDef {
  Identifier id;
  std::string label;
  std::string comment;
  std::set<Identifier> sub_class_of;
  std::set<Identifier> disjoint_with;
  std::set<Identifier> same_class_as;
  std::set<Identifier> complement_of;
  std::set<Identifier> union_of;
  std::set<Identifier> intersection_of;
  std::set<Identifier> disjoint_union_of;
  std::vector<Identifier> one_of;

  bool operator==(const ClassDef&) const = default;
};

enum class PropertyKind { Object, Datatype };

struct PropertyDef {
  Identifier id;
  PropertyKind kind = PropertyKind::Object;
  std::string comment;
  std::set<Identifier> domain;
  std::set<Identifier> range;
  std::set<Identifier> sub_property_of;
  std::set<Identifier> same_property_as;
  std::set<Identifier> inverse_of;
  bool transitive = false;
  bool unique = false;

  bool operator==(const PropertyDef&) const = default;
};

using Count = std::uint32_t;

struct Qualifier {
  Identifier has_class_q;
  std::optional<Count> min_cq;
  std::optional<Count> max_cq;
  std::optional<Count> cq;

  bool operator==(const Qualifier&) const = default;
};

struct Restriction {
  Identifier id;
  Identifier on_property;
  std::optional<Identifier> to_class;
  std::optional<Identifier> has_class;
  std::optional<Value> has_value;
  std::optional<Count> min_c;
  std::optional<Count> max_c;
  std::optional<Count> c;
  std::optional<Qualifier> qualifier;

  bool has_constraint() const;
  bool operator==(const Restriction&) const = default;
};

struct Assertion {
  Identifier property;
  Value value;

  bool operator==(const Assertion&) const = default;
};

struct InstanceDef {
  Identifier id;
  Identifier class_id;
  std::vector<Assertion> assertions;
  std::set<Identifier> different_from;
  std::set<Identifier> same_as;

  bool operator==(const InstanceDef&) const = default;
};

struct OntologyDoc {
  Identifier id;
  std::string version_info;
  std::string comment;
  std::set<Identifier> imports;
  std::map<Identifier, ClassDef> classes;
  std::map<Identifier, PropertyDef> properties;
  std::map<Identifier, Restriction> restrictions;
  std::map<Identifier, InstanceDef> instances;

  const ClassDef* find_class(std::string_view id) const;
  const PropertyDef* find_property(std::string_view id) const;
  const Restriction* find_restriction(std::string_view id) const;
  const InstanceDef* find_instance(std::string_view id) const;

  /// Smallest "_:rN" not used by any class or restriction.
  Identifier fresh_restriction_id() const;

  bool operator==(const OntologyDoc&) const = default;
};

/// Annotation data: image, person and actor instances with their
/// property assertions. An image instance's identifier is its URI.
struct InstanceGraph {
  std::map<Identifier, InstanceDef> instances;

  bool operator==(const InstanceGraph&) const = default;
};

/// The class relations that may name other classes (or restrictions).
enum class ClassRelation {
  SubClassOf,
  DisjointWith,
  SameClassAs,
  ComplementOf,
  UnionOf,
  IntersectionOf,
  DisjointUnionOf,
};

inline constexpr ClassRelation kAllClassRelations[] = {
    ClassRelation::SubClassOf,     ClassRelation::DisjointWith,
    ClassRelation::SameClassAs,    ClassRelation::ComplementOf,
    ClassRelation::UnionOf,        ClassRelation::IntersectionOf,
    ClassRelation::DisjointUnionOf,
};

std::string_view to_string(ClassRelation r);
std::optional<ClassRelation> class_relation_from_string(std::string_view name);

std::set<Identifier>& members(ClassDef& c, ClassRelation r);
const std::set<Identifier>& members(const ClassDef& c, ClassRelation r);

/// Restriction identifiers are blank nodes: two documents are structurally
/// equal when they agree after renaming restrictions canonically (by anchor
/// and content).
OntologyDoc canonical_form(const OntologyDoc& doc);
bool structurally_equal(const OntologyDoc& a, const OntologyDoc& b);

/// Copies the graph's instances into the document (graph entries win).
OntologyDoc with_instances(OntologyDoc doc, const InstanceGraph& graph);

}  // namespace imagespace
