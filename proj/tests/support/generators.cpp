// SPDX-License-Identifier: Apache-2.0
#include "support/generators.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace imagespace::testing {
namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

template <typename C>
auto pick(Rng& rng, const C& c) {
  auto it = std::begin(c);
  std::advance(it, uniform(rng, 0, static_cast<int>(std::size(c)) - 1));
  return *it;
}

std::string random_text(Rng& rng, int max_len = 12) {
  static const std::vector<std::string> pieces = {"a", "b", "Z", " ", "&", "<", ">", "\"", "'", "\xc3\xa9",
                                                   "\xe6\x97\xa5", "x", "7", "\t", "\n", "-", "#"};
  std::string s;
  const int n = uniform(rng, 0, max_len);
  for (int i = 0; i < n; ++i) s += pick(rng, pieces);
  return s;
}

Identifier make_id(Rng& rng, const std::string& stem, int i, bool iris) {
  const std::string local = stem + std::to_string(i) + (chance(rng, 0.3) ? "_x-y.z" : "");
  if (iris && chance(rng, 0.3)) return "http://example.org/ns" + std::to_string(uniform(rng, 0, 2)) + "#" + local;
  return local;
}

std::string lexical_for(Rng& rng, Datatype dt) {
  switch (dt) {
    case Datatype::String: return random_text(rng, 8);
    case Datatype::DateTime: return pick(rng, std::vector<std::string>{"2002-06-01", "1999-12-31T23:59:59Z",
                                                                         "2004-02-29T10:00:00+02:00"});
    case Datatype::Integer: return std::to_string(uniform(rng, -50, 50));
    case Datatype::Decimal: return pick(rng, std::vector<std::string>{"0.5", "-3.25", "10"});
    case Datatype::Boolean: return chance(rng, 0.5) ? "true" : "false";
    case Datatype::AnyUri: return "http://example.org/r" + std::to_string(uniform(rng, 0, 9));
  }
  return "";
}

Datatype range_datatype(const PropertyDef& p) {
  for (const auto& r : p.range) {
    if (auto dt = datatype_from_name(r)) return *dt;
  }
  return Datatype::String;
}

std::optional<Count> random_count(Rng& rng) {
  if (chance(rng, 0.05)) return 0xffffffffu;
  return static_cast<Count>(uniform(rng, 0, 3));
}

const std::vector<std::string> kDatatypes = {"string", "dateTime", "integer", "decimal", "boolean", "anyURI"};

std::vector<Identifier> keys(const auto& map) {
  std::vector<Identifier> out;
  for (const auto& [k, v] : map) out.push_back(k);
  return out;
}

}  // namespace

OntologyDoc random_ontology(Rng& rng, const OntologyShape& shape) {
  OntologyDoc doc;
  doc.id = "onto" + std::to_string(uniform(rng, 0, 9999));
  doc.version_info = random_text(rng, 6);
  doc.comment = random_text(rng);
  for (int i = uniform(rng, 0, 2); i > 0; --i) doc.imports.insert("http://example.org/import" + std::to_string(i));

  std::vector<Identifier> classes;
  for (int i = 0; i < shape.classes; ++i) {
    ClassDef c;
    c.id = make_id(rng, "C", i, shape.iris);
    c.label = chance(rng, 0.7) ? random_text(rng) : "";
    c.comment = chance(rng, 0.5) ? random_text(rng) : "";
    for (int k = uniform(rng, 0, 2); k > 0 && !classes.empty(); --k) c.sub_class_of.insert(pick(rng, classes));
    classes.push_back(c.id);
    doc.classes.emplace(c.id, std::move(c));
  }

  std::vector<Identifier> properties;
  for (int i = 0; i < shape.properties; ++i) {
    PropertyDef p;
    p.id = make_id(rng, "p", i, shape.iris);
    p.kind = chance(rng, 0.5) ? PropertyKind::Object : PropertyKind::Datatype;
    p.comment = chance(rng, 0.3) ? random_text(rng) : "";
    if (chance(rng, 0.7)) p.domain.insert(pick(rng, classes));
    if (p.kind == PropertyKind::Datatype) {
      if (chance(rng, 0.8)) p.range.insert(pick(rng, kDatatypes));
    } else if (chance(rng, 0.7)) {
      p.range.insert(pick(rng, classes));
    }
    if (!properties.empty() && chance(rng, 0.3)) p.sub_property_of.insert(pick(rng, properties));
    if (!properties.empty() && chance(rng, 0.15)) p.same_property_as.insert(pick(rng, properties));
    if (!properties.empty() && p.kind == PropertyKind::Object && chance(rng, 0.2)) {
      p.inverse_of.insert(pick(rng, properties));
    }
    p.transitive = chance(rng, 0.2);
    p.unique = chance(rng, 0.2);
    properties.push_back(p.id);
    doc.properties.emplace(p.id, std::move(p));
  }

  std::vector<Identifier> instances;
  for (int i = 0; i < shape.instances; ++i) instances.push_back(make_id(rng, "i", i, shape.iris));
  for (const auto& iid : instances) {
    InstanceDef inst;
    inst.id = iid;
    inst.class_id = pick(rng, classes);
    for (int k = uniform(rng, 0, 4); k > 0 && !properties.empty(); --k) {
      const PropertyDef& p = doc.properties.at(pick(rng, properties));
      Value v = p.kind == PropertyKind::Object ? Value(InstanceRef{pick(rng, instances)})
                                               : Value(Literal{lexical_for(rng, range_datatype(p)), range_datatype(p)});
      const bool duplicate = std::any_of(inst.assertions.begin(), inst.assertions.end(), [&](const Assertion& a) {
        return a.property == p.id && value_text(a.value) == value_text(v);
      });
      if (!duplicate) inst.assertions.push_back({p.id, std::move(v)});
    }
    if (chance(rng, 0.2)) inst.different_from.insert(pick(rng, instances));
    if (chance(rng, 0.1)) inst.same_as.insert(pick(rng, instances));
    doc.instances.emplace(iid, std::move(inst));
  }
  if (!instances.empty()) {
    for (int k = uniform(rng, 0, 2); k > 0; --k) {
      auto& one_of = doc.classes.at(pick(rng, classes)).one_of;
      const Identifier& m = pick(rng, instances);
      if (std::find(one_of.begin(), one_of.end(), m) == one_of.end()) one_of.push_back(m);
    }
  }

  static const ClassRelation anchors[] = {ClassRelation::SubClassOf,     ClassRelation::SubClassOf,
                                          ClassRelation::SubClassOf,     ClassRelation::UnionOf,
                                          ClassRelation::IntersectionOf, ClassRelation::SameClassAs,
                                          ClassRelation::DisjointUnionOf};
  for (int i = 0; i < shape.restrictions && !properties.empty(); ++i) {
    Restriction r;
    r.id = doc.fresh_restriction_id();
    r.on_property = pick(rng, properties);
    const PropertyDef& p = doc.properties.at(r.on_property);
    if (chance(rng, 0.4)) {
      r.c = random_count(rng);
    } else {
      if (chance(rng, 0.5)) r.min_c = static_cast<Count>(uniform(rng, 0, 2));
      if (chance(rng, 0.5)) r.max_c = static_cast<Count>(uniform(rng, 2, 4));
    }
    const int shape_kind = uniform(rng, 0, 3);
    if (shape_kind == 0) {
      r.to_class = p.kind == PropertyKind::Datatype ? pick(rng, kDatatypes) : pick(rng, classes);
    } else if (shape_kind == 1) {
      r.has_class = pick(rng, classes);
    } else if (shape_kind == 2) {
      Qualifier q;
      q.has_class_q = pick(rng, classes);
      if (chance(rng, 0.5)) {
        q.cq = random_count(rng);
      } else {
        q.min_cq = static_cast<Count>(uniform(rng, 0, 1));
        if (chance(rng, 0.6)) q.max_cq = static_cast<Count>(uniform(rng, 1, 3));
      }
      r.qualifier = q;
    }
    if (chance(rng, 0.3)) {
      if (p.kind == PropertyKind::Object && !instances.empty()) {
        r.has_value = InstanceRef{pick(rng, instances)};
      } else if (p.kind == PropertyKind::Datatype) {
        r.has_value = Literal{lexical_for(rng, range_datatype(p)), range_datatype(p)};
      }
    }
    if (!r.has_constraint()) r.max_c = 1;
    const Identifier rid = r.id;
    const Identifier anchor = pick(rng, classes);
    const ClassRelation rel = pick(rng, anchors);
    doc.restrictions.emplace(rid, std::move(r));
    members(doc.classes.at(anchor), rel).insert(rid);
    if (!check_ontology(doc).empty()) {
      members(doc.classes.at(anchor), rel).erase(rid);
      doc.restrictions.erase(rid);
    }
  }

  for (int k = 0; k < 3; ++k) {
    const Identifier a = pick(rng, classes);
    const Identifier b = pick(rng, classes);
    const ClassRelation rel = chance(rng, 0.5) ? ClassRelation::DisjointWith : ClassRelation::ComplementOf;
    members(doc.classes.at(a), rel).insert(b);
    if (!check_ontology(doc).empty()) members(doc.classes.at(a), rel).erase(b);
  }

  if (auto v = check_ontology(doc); !v.empty()) {
    throw std::logic_error("generator produced an inconsistent document: " + format_violation(v.front()));
  }
  return doc;
}

OntologyDoc query_schema() {
  OntologyDoc doc;
  doc.id = "qs";
  auto add_class = [&](const std::string& id, std::set<Identifier> parents) {
    ClassDef c;
    c.id = id;
    c.sub_class_of = std::move(parents);
    doc.classes.emplace(id, std::move(c));
  };
  add_class("K0", {});
  add_class("K1", {"K0"});
  add_class("K2", {"K0"});
  add_class("K3", {"K1"});
  add_class("K4", {});
  for (int i = 0; i < 6; ++i) {
    PropertyDef p;
    p.id = "p" + std::to_string(i);
    p.kind = i < 3 ? PropertyKind::Object : PropertyKind::Datatype;
    if (i >= 3) p.range.insert("string");
    doc.properties.emplace(p.id, std::move(p));
  }
  return doc;
}

InstanceGraph random_instance_graph(Rng& rng, const OntologyDoc& schema) {
  InstanceGraph g;
  const int n = uniform(rng, 3, 9);
  std::vector<Identifier> ids;
  for (int i = 0; i < n; ++i) {
    ids.push_back(chance(rng, 0.25) ? "http://img.example.org/" + std::to_string(i) + ".jpg" : "i" + std::to_string(i));
  }
  const auto classes = keys(schema.classes);
  const auto properties = keys(schema.properties);
  // Literals overlap instance identifiers so that textual matching matters.
  std::vector<std::string> literals = {"a", "b", "smiles", "x y", "q\"uote", ids.front()};

  for (const auto& id : ids) {
    InstanceDef inst;
    inst.id = id;
    inst.class_id = pick(rng, classes);
    for (int k = uniform(rng, 0, 5); k > 0; --k) {
      const PropertyDef& p = schema.properties.at(pick(rng, properties));
      Value v = p.kind == PropertyKind::Object ? Value(InstanceRef{pick(rng, ids)})
                                               : Value(Literal{pick(rng, literals), Datatype::String});
      const bool duplicate = std::any_of(inst.assertions.begin(), inst.assertions.end(), [&](const Assertion& a) {
        return a.property == p.id && value_text(a.value) == value_text(v);
      });
      if (!duplicate) inst.assertions.push_back({p.id, std::move(v)});
    }
    g.instances.emplace(id, std::move(inst));
  }
  return g;
}

TripleQuery random_query(Rng& rng, const OntologyDoc& schema, const InstanceGraph& graph) {
  std::vector<std::string> constants;
  for (const auto& [id, inst] : graph.instances) {
    constants.push_back(id);
    for (const auto& a : inst.assertions) constants.push_back(value_text(a.value));
  }
  constants.push_back("absent");
  const auto classes = keys(schema.classes);
  auto properties = keys(schema.properties);
  properties.push_back("pUnknown");

  const int var_pool = uniform(rng, 1, 3);
  auto term = [&]() -> Term {
    if (chance(rng, 0.65)) return Var{"v" + std::to_string(uniform(rng, 0, var_pool - 1))};
    const std::string text = pick(rng, constants);
    const bool bare_ok = !text.empty() && std::all_of(text.begin(), text.end(), [](char ch) {
      return !std::isspace(static_cast<unsigned char>(ch)) && ch != ',' && ch != '(' && ch != ')' && ch != '"' &&
             ch != '$';
    });
    if (bare_ok && chance(rng, 0.5)) return Const{text};
    return Lit{text};
  };

  TripleQuery q;
  for (int i = uniform(rng, 1, 4); i > 0; --i) {
    if (chance(rng, 0.25)) {
      q.atoms.push_back(InstanceOfAtom{term(), pick(rng, classes)});
    } else {
      const Identifier p = chance(rng, 0.04) ? properties.back() : pick(rng, std::vector(properties.begin(), properties.end() - 1));
      q.atoms.push_back(PropAtom{p, term(), term()});
    }
  }
  std::vector<std::string> body;
  auto note = [&](const Term& t) {
    if (const auto* v = std::get_if<Var>(&t)) {
      if (std::find(body.begin(), body.end(), v->name) == body.end()) body.push_back(v->name);
    }
  };
  for (const auto& a : q.atoms) {
    if (const auto* io = std::get_if<InstanceOfAtom>(&a)) {
      note(io->subject);
    } else {
      note(std::get<PropAtom>(a).subject);
      note(std::get<PropAtom>(a).value);
    }
  }
  std::shuffle(body.begin(), body.end(), rng);
  const int head = body.empty() ? 0 : uniform(rng, chance(rng, 0.1) ? 0 : 1, static_cast<int>(body.size()));
  q.head_vars.assign(body.begin(), body.begin() + head);
  return q;
}

Edit random_edit(Rng& rng, const OntologyDoc& doc) {
  const auto classes = keys(doc.classes);
  const auto properties = keys(doc.properties);
  const auto restrictions = keys(doc.restrictions);
  const auto instances = keys(doc.instances);
  static int counter = 0;
  const std::string fresh = "E" + std::to_string(++counter);

  static const std::vector<std::string> class_relations = {"subClassOf",   "disjointWith",   "sameClassAs",
                                                           "complementOf", "unionOf",        "intersectionOf",
                                                           "disjointUnionOf"};
  const int kind = uniform(rng, 0, 11);
  switch (classes.empty() ? 0 : kind) {
    case 0: {
      ClassDef c;
      c.id = fresh;
      if (!classes.empty() && chance(rng, 0.7)) c.sub_class_of.insert(pick(rng, classes));
      return ClassEdit{EditOp::Insert, c};
    }
    case 1:
      return ClassEdit{EditOp::Delete, ClassDef{.id = pick(rng, classes)}};
    case 2: {
      ClassDef c = doc.classes.at(pick(rng, classes));
      c.label = "relabelled";
      if (chance(rng, 0.5)) c.sub_class_of.insert(pick(rng, classes));
      return ClassEdit{EditOp::Update, c};
    }
    case 3:
    case 4:
      return TupleEdit{EditOp::Insert, pick(rng, class_relations), pick(rng, classes), pick(rng, classes)};
    case 5: {
      // delete an existing class-relation member, restriction anchors included
      for (int tries = 0; tries < 20; ++tries) {
        const ClassDef& c = doc.classes.at(pick(rng, classes));
        const ClassRelation rel = pick(rng, kAllClassRelations);
        if (!members(c, rel).empty()) {
          return TupleEdit{EditOp::Delete, std::string(to_string(rel)), c.id, pick(rng, members(c, rel))};
        }
      }
      return TupleEdit{EditOp::Delete, "subClassOf", pick(rng, classes), pick(rng, classes)};
    }
    case 6: {
      PropertyDef p;
      p.id = fresh;
      p.kind = chance(rng, 0.5) ? PropertyKind::Object : PropertyKind::Datatype;
      if (chance(rng, 0.6)) p.domain.insert(pick(rng, classes));
      if (!properties.empty() && chance(rng, 0.4)) p.sub_property_of.insert(pick(rng, properties));
      return PropertyEdit{EditOp::Insert, p};
    }
    case 7:
      if (properties.empty()) break;
      if (chance(rng, 0.5)) return PropertyEdit{EditOp::Delete, PropertyDef{.id = pick(rng, properties)}};
      return TupleEdit{chance(rng, 0.5) ? EditOp::Insert : EditOp::Delete,
                       pick(rng, std::vector<std::string>{"domain", "range", "subPropertyOf"}), pick(rng, properties),
                       chance(rng, 0.5) ? pick(rng, classes) : pick(rng, properties)};
    case 8: {
      if (properties.empty()) break;
      Restriction r;
      r.on_property = pick(rng, properties);
      r.min_c = static_cast<Count>(uniform(rng, 0, 3));
      r.max_c = static_cast<Count>(uniform(rng, 0, 3));  // sometimes below min
      if (chance(rng, 0.3)) r.to_class = pick(rng, classes);
      if (chance(rng, 0.2)) r.has_class = pick(rng, classes);
      return RestrictionEdit{EditOp::Insert, r, pick(rng, classes), ClassRelation::SubClassOf};
    }
    case 9:
      if (restrictions.empty()) break;
      if (chance(rng, 0.5)) {
        return RestrictionEdit{EditOp::Delete, Restriction{.id = pick(rng, restrictions)}, "", ClassRelation::SubClassOf};
      } else {
        Restriction r = doc.restrictions.at(pick(rng, restrictions));
        r.c = static_cast<Count>(uniform(rng, 0, 2));
        if (chance(rng, 0.5)) {
          r.min_c.reset();
          r.max_c.reset();
        }
        return RestrictionEdit{EditOp::Update, r, "", ClassRelation::SubClassOf};
      }
    case 10: {
      InstanceDef inst;
      inst.id = fresh;
      inst.class_id = pick(rng, classes);
      if (!instances.empty() && chance(rng, 0.3)) inst.different_from.insert(pick(rng, instances));
      return InstanceEdit{EditOp::Insert, inst};
    }
    case 11:
      if (instances.empty()) break;
      if (chance(rng, 0.5)) return InstanceEdit{EditOp::Delete, InstanceDef{.id = pick(rng, instances)}};
      return TupleEdit{EditOp::Insert, "oneOf", pick(rng, classes), pick(rng, instances)};
  }
  return TupleEdit{EditOp::Insert, "subClassOf", pick(rng, classes), pick(rng, classes)};
}

}  // namespace imagespace::testing
