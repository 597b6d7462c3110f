// SPDX-License-Identifier: Apache-2.0
#include "imagespace/ontology.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <tuple>

#include "imagespace/error.hpp"

namespace imagespace {

bool is_valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  auto space = [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; };
  return !space(id.front()) && !space(id.back());
}

bool is_restriction_id(std::string_view id) { return id.starts_with(kRestrictionPrefix); }

namespace {

constexpr std::array<std::pair<Datatype, std::string_view>, 6> kDatatypes{{
    {Datatype::String, "string"},
    {Datatype::DateTime, "dateTime"},
    {Datatype::Integer, "integer"},
    {Datatype::Decimal, "decimal"},
    {Datatype::Boolean, "boolean"},
    {Datatype::AnyUri, "anyURI"},
}};

constexpr std::array<std::pair<ClassRelation, std::string_view>, 7> kRelations{{
    {ClassRelation::SubClassOf, "subClassOf"},
    {ClassRelation::DisjointWith, "disjointWith"},
    {ClassRelation::SameClassAs, "sameClassAs"},
    {ClassRelation::ComplementOf, "complementOf"},
    {ClassRelation::UnionOf, "unionOf"},
    {ClassRelation::IntersectionOf, "intersectionOf"},
    {ClassRelation::DisjointUnionOf, "disjointUnionOf"},
}};

}  // namespace

std::string_view to_string(Datatype d) {
  for (const auto& [dt, name] : kDatatypes) {
    if (dt == d) return name;
  }
  return "string";
}

std::optional<Datatype> datatype_from_name(std::string_view name) {
  for (const auto& [dt, n] : kDatatypes) {
    if (n == name) return dt;
  }
  return std::nullopt;
}

bool is_datatype_name(std::string_view name) { return datatype_from_name(name).has_value(); }

const std::string& value_text(const Value& v) {
  if (const auto* ref = std::get_if<InstanceRef>(&v)) return ref->id;
  return std::get<Literal>(v).lexical;
}

bool Restriction::has_constraint() const {
  return to_class || has_class || has_value || min_c || max_c || c || qualifier;
}

const ClassDef* OntologyDoc::find_class(std::string_view id) const {
  auto it = classes.find(Identifier(id));
  return it == classes.end() ? nullptr : &it->second;
}

const PropertyDef* OntologyDoc::find_property(std::string_view id) const {
  auto it = properties.find(Identifier(id));
  return it == properties.end() ? nullptr : &it->second;
}

const Restriction* OntologyDoc::find_restriction(std::string_view id) const {
  auto it = restrictions.find(Identifier(id));
  return it == restrictions.end() ? nullptr : &it->second;
}

const InstanceDef* OntologyDoc::find_instance(std::string_view id) const {
  auto it = instances.find(Identifier(id));
  return it == instances.end() ? nullptr : &it->second;
}

Identifier OntologyDoc::fresh_restriction_id() const {
  for (std::size_t n = restrictions.size() + 1;; ++n) {
    Identifier id = std::string(kRestrictionPrefix) + std::to_string(n);
    if (!restrictions.contains(id) && !classes.contains(id)) return id;
  }
}

std::string_view to_string(ClassRelation r) {
  for (const auto& [rel, name] : kRelations) {
    if (rel == r) return name;
  }
  return "subClassOf";
}

std::optional<ClassRelation> class_relation_from_string(std::string_view name) {
  for (const auto& [rel, n] : kRelations) {
    if (n == name) return rel;
  }
  return std::nullopt;
}

std::set<Identifier>& members(ClassDef& c, ClassRelation r) {
  switch (r) {
    case ClassRelation::SubClassOf: return c.sub_class_of;
    case ClassRelation::DisjointWith: return c.disjoint_with;
    case ClassRelation::SameClassAs: return c.same_class_as;
    case ClassRelation::ComplementOf: return c.complement_of;
    case ClassRelation::UnionOf: return c.union_of;
    case ClassRelation::IntersectionOf: return c.intersection_of;
    case ClassRelation::DisjointUnionOf: return c.disjoint_union_of;
  }
  return c.sub_class_of;
}

const std::set<Identifier>& members(const ClassDef& c, ClassRelation r) {
  return members(const_cast<ClassDef&>(c), r);
}

namespace {

std::string encode(const std::optional<Count>& n) { return n ? std::to_string(*n) : "-"; }

std::string encode(const std::optional<Identifier>& id) { return id ? "+" + *id : "-"; }

std::string encode(const std::optional<Value>& v) {
  if (!v) return "-";
  if (const auto* ref = std::get_if<InstanceRef>(&*v)) return "@" + ref->id;
  const auto& lit = std::get<Literal>(*v);
  return "\"" + std::string(to_string(lit.datatype)) + ":" + lit.lexical;
}

// Everything about a restriction except its identifier.
std::vector<std::string> restriction_key(const OntologyDoc& doc, const Restriction& r) {
  std::vector<std::string> anchors;
  for (const auto& [cid, cls] : doc.classes) {
    for (ClassRelation rel : kAllClassRelations) {
      if (members(cls, rel).contains(r.id)) anchors.push_back(cid + "\x1f" + std::string(to_string(rel)));
    }
  }
  std::sort(anchors.begin(), anchors.end());
  std::vector<std::string> key = std::move(anchors);
  key.push_back("\x1e");
  key.push_back(r.on_property);
  key.push_back(encode(r.to_class));
  key.push_back(encode(r.has_class));
  key.push_back(encode(r.has_value));
  key.push_back(encode(r.min_c));
  key.push_back(encode(r.max_c));
  key.push_back(encode(r.c));
  if (r.qualifier) {
    key.push_back(r.qualifier->has_class_q);
    key.push_back(encode(r.qualifier->min_cq));
    key.push_back(encode(r.qualifier->max_cq));
    key.push_back(encode(r.qualifier->cq));
  } else {
    key.push_back("-");
  }
  return key;
}

}  // namespace

OntologyDoc canonical_form(const OntologyDoc& doc) {
  std::vector<std::pair<std::vector<std::string>, Identifier>> keyed;
  keyed.reserve(doc.restrictions.size());
  for (const auto& [rid, r] : doc.restrictions) keyed.emplace_back(restriction_key(doc, r), rid);
  std::sort(keyed.begin(), keyed.end());

  std::map<Identifier, Identifier> rename;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    rename[keyed[i].second] = std::string(kRestrictionPrefix) + std::to_string(i + 1);
  }

  OntologyDoc out = doc;
  out.restrictions.clear();
  for (const auto& [old_id, r] : doc.restrictions) {
    Restriction copy = r;
    copy.id = rename.at(old_id);
    out.restrictions.emplace(copy.id, std::move(copy));
  }
  for (auto& [cid, cls] : out.classes) {
    for (ClassRelation rel : kAllClassRelations) {
      auto& set = members(cls, rel);
      std::set<Identifier> renamed;
      for (const auto& m : set) {
        auto it = rename.find(m);
        renamed.insert(it == rename.end() ? m : it->second);
      }
      set = std::move(renamed);
    }
  }
  return out;
}

bool structurally_equal(const OntologyDoc& a, const OntologyDoc& b) {
  if (a.restrictions.size() != b.restrictions.size()) return false;
  return canonical_form(a) == canonical_form(b);
}

OntologyDoc with_instances(OntologyDoc doc, const InstanceGraph& graph) {
  for (const auto& [id, inst] : graph.instances) doc.instances[id] = inst;
  return doc;
}

}  // namespace imagespace
