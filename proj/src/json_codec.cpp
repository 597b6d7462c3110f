// SPDX-License-Identifier: Apache-2.0
#include "imagespace/json_codec.hpp"

#include "imagespace/error.hpp"

namespace imagespace::json {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

json ids(const std::set<Identifier>& s) { return json(std::vector<Identifier>(s.begin(), s.end())); }

json count(const std::optional<Count>& c) { return c ? json(*c) : json(nullptr); }

std::string text_field(const json& j, const char* key, bool required = false) {
  if (!j.contains(key) || j.at(key).is_null()) {
    if (required) bad(std::string("missing field '") + key + "'");
    return {};
  }
  if (!j.at(key).is_string()) bad(std::string("field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::set<Identifier> id_set(const json& j, const char* key) {
  std::set<Identifier> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) bad(std::string("field '") + key + "' must be an array");
  for (const auto& x : j.at(key)) {
    if (!x.is_string()) bad(std::string("field '") + key + "' must hold strings");
    out.insert(x.get<std::string>());
  }
  return out;
}

std::optional<Count> count_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    bad(std::string("field '") + key + "' must be a non-negative integer");
  }
  const auto n = v.get<unsigned long long>();
  if (n > 0xffffffffULL) bad(std::string("field '") + key + "' is out of range");
  return static_cast<Count>(n);
}

bool bool_field(const json& j, const char* key) {
  if (!j.contains(key)) return false;
  if (!j.at(key).is_boolean()) bad(std::string("field '") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

Datatype range_datatype(const OntologyDoc& doc, const Identifier& property) {
  if (const PropertyDef* p = doc.find_property(property)) {
    for (const auto& r : p->range) {
      if (auto dt = datatype_from_name(r)) return *dt;
    }
  }
  return Datatype::String;
}

json value_json(const Value& v) {
  if (const auto* ref = std::get_if<InstanceRef>(&v)) return {{"ref", ref->id}};
  const auto& lit = std::get<Literal>(v);
  return {{"literal", lit.lexical}, {"datatype", to_string(lit.datatype)}};
}

// {"ref": id} or {"literal": text, "datatype"?: name}
Value value_from_json(const json& j, const OntologyDoc& doc, const Identifier& property) {
  if (j.contains("ref")) return InstanceRef{text_field(j, "ref", true)};
  if (!j.contains("literal")) bad("value needs 'ref' or 'literal'");
  Literal lit{text_field(j, "literal", true), range_datatype(doc, property)};
  if (j.contains("datatype")) {
    auto dt = datatype_from_name(text_field(j, "datatype", true));
    if (!dt) bad("unknown datatype " + j.at("datatype").dump());
    lit.datatype = *dt;
  }
  return lit;
}

std::optional<EditOp> op_from_string(std::string_view s) {
  if (s == "insert") return EditOp::Insert;
  if (s == "update") return EditOp::Update;
  if (s == "delete") return EditOp::Delete;
  return std::nullopt;
}

const json& payload(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_object()) bad(std::string("edit needs an object field '") + key + "'");
  return j.at(key);
}

}  // namespace

json to_json(const Violation& v) {
  return {{"code", to_string(v.code)}, {"subjects", v.subjects}, {"message", v.message}};
}

json to_json(const std::vector<Violation>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

json to_json(const FormSpec& spec) {
  json fields = json::array();
  for (const auto& f : spec.fields) {
    fields.push_back({{"property", f.property},
                      {"kind", f.kind == PropertyKind::Datatype ? "datatype" : "object"},
                      {"rangeHint", f.range_hint},
                      {"minC", count(f.min_c)},
                      {"maxC", count(f.max_c)},
                      {"C", count(f.c)},
                      {"inherited", f.inherited},
                      {"widget", to_string(f.widget)}});
  }
  return {{"classID", spec.class_id}, {"fields", fields}};
}

json to_json(const RemovedTuple& t) { return {{"relation", t.relation}, {"subject", t.subject}, {"object", t.object}}; }

json to_json(const EditOutcome& outcome) {
  if (std::holds_alternative<Applied>(outcome)) return {{"status", "applied"}};
  if (const auto* c = std::get_if<Cascaded>(&outcome)) {
    json removed = json::array();
    for (const auto& t : c->removed) removed.push_back(to_json(t));
    return {{"status", "cascaded"}, {"removed", removed}};
  }
  return {{"status", "rejected"}, {"violations", to_json(std::get<Rejected>(outcome).violations)}};
}

json to_json(const ClassDef& c) {
  json j = {{"id", c.id}, {"label", c.label}, {"comment", c.comment}};
  for (ClassRelation rel : kAllClassRelations) j[std::string(to_string(rel))] = ids(members(c, rel));
  j["oneOf"] = c.one_of;
  return j;
}

json to_json(const PropertyDef& p) {
  return {{"id", p.id},
          {"kind", p.kind == PropertyKind::Datatype ? "datatype" : "object"},
          {"comment", p.comment},
          {"domain", ids(p.domain)},
          {"range", ids(p.range)},
          {"subPropertyOf", ids(p.sub_property_of)},
          {"samePropertyAs", ids(p.same_property_as)},
          {"inverseOf", ids(p.inverse_of)},
          {"transitive", p.transitive},
          {"unique", p.unique}};
}

json to_json(const Restriction& r) {
  json j = {{"id", r.id}, {"onProperty", r.on_property}, {"minC", count(r.min_c)}, {"maxC", count(r.max_c)},
            {"C", count(r.c)}};
  j["toClass"] = r.to_class ? json(*r.to_class) : json(nullptr);
  j["hasClass"] = r.has_class ? json(*r.has_class) : json(nullptr);
  j["hasValue"] = r.has_value ? value_json(*r.has_value) : json(nullptr);
  if (r.qualifier) {
    j["hasClassQ"] = {{"classID", r.qualifier->has_class_q},
                      {"minC", count(r.qualifier->min_cq)},
                      {"maxC", count(r.qualifier->max_cq)},
                      {"C", count(r.qualifier->cq)}};
  } else {
    j["hasClassQ"] = nullptr;
  }
  return j;
}

json to_json(const InstanceDef& i) {
  json assertions = json::array();
  for (const auto& a : i.assertions) {
    json v = value_json(a.value);
    v["property"] = a.property;
    assertions.push_back(std::move(v));
  }
  json j = {{"instanceID", i.id}, {"classID", i.class_id}, {"assertions", assertions}};
  if (!i.different_from.empty()) j["differentFrom"] = ids(i.different_from);
  if (!i.same_as.empty()) j["sameAs"] = ids(i.same_as);
  return j;
}

ClassDef class_from_json(const json& j) {
  if (!j.is_object()) bad("class must be an object");
  ClassDef c;
  c.id = text_field(j, "id", true);
  c.label = text_field(j, "label");
  c.comment = text_field(j, "comment");
  for (ClassRelation rel : kAllClassRelations) members(c, rel) = id_set(j, std::string(to_string(rel)).c_str());
  if (j.contains("oneOf")) {
    for (const auto& x : j.at("oneOf")) {
      if (!x.is_string()) bad("oneOf must hold strings");
      c.one_of.push_back(x.get<std::string>());
    }
  }
  return c;
}

PropertyDef property_from_json(const json& j) {
  if (!j.is_object()) bad("property must be an object");
  PropertyDef p;
  p.id = text_field(j, "id", true);
  const std::string kind = j.contains("kind") ? text_field(j, "kind") : "object";
  if (kind == "datatype") {
    p.kind = PropertyKind::Datatype;
  } else if (kind != "object") {
    bad("property kind must be 'object' or 'datatype'");
  }
  p.comment = text_field(j, "comment");
  p.domain = id_set(j, "domain");
  p.range = id_set(j, "range");
  p.sub_property_of = id_set(j, "subPropertyOf");
  p.same_property_as = id_set(j, "samePropertyAs");
  p.inverse_of = id_set(j, "inverseOf");
  p.transitive = bool_field(j, "transitive");
  p.unique = bool_field(j, "unique");
  return p;
}

Restriction restriction_from_json(const json& j, const OntologyDoc& doc) {
  if (!j.is_object()) bad("restriction must be an object");
  Restriction r;
  r.id = text_field(j, "id");
  r.on_property = text_field(j, "onProperty", true);
  if (auto t = text_field(j, "toClass"); !t.empty()) r.to_class = t;
  if (auto t = text_field(j, "hasClass"); !t.empty()) r.has_class = t;
  if (j.contains("hasValue") && !j.at("hasValue").is_null()) {
    r.has_value = value_from_json(j.at("hasValue"), doc, r.on_property);
  }
  r.min_c = count_field(j, "minC");
  r.max_c = count_field(j, "maxC");
  r.c = count_field(j, "C");
  if (j.contains("hasClassQ") && !j.at("hasClassQ").is_null()) {
    const auto& q = j.at("hasClassQ");
    Qualifier qual;
    qual.has_class_q = text_field(q, "classID", true);
    qual.min_cq = count_field(q, "minC");
    qual.max_cq = count_field(q, "maxC");
    qual.cq = count_field(q, "C");
    r.qualifier = qual;
  }
  return r;
}

InstanceDef instance_from_json(const json& j, const OntologyDoc& doc) {
  if (!j.is_object()) bad("annotation must be an object");
  InstanceDef inst;
  inst.id = text_field(j, "instanceID", true);
  inst.class_id = text_field(j, "classID", true);
  if (j.contains("assertions")) {
    if (!j.at("assertions").is_array()) bad("assertions must be an array");
    for (const auto& a : j.at("assertions")) {
      if (!a.is_object()) bad("assertion must be an object");
      const Identifier property = text_field(a, "property", true);
      inst.assertions.push_back({property, value_from_json(a, doc, property)});
    }
  }
  inst.different_from = id_set(j, "differentFrom");
  inst.same_as = id_set(j, "sameAs");
  return inst;
}

Edit edit_from_json(const json& j, const OntologyDoc& doc) {
  if (!j.is_object()) bad("edit must be an object");
  const auto op = op_from_string(text_field(j, "op", true));
  if (!op) bad("op must be insert, update or delete");
  const std::string target = text_field(j, "target", true);

  // Deletions may name the entity by "id" alone.
  auto entity = [&](const char* key) -> json {
    if (*op == EditOp::Delete && !j.contains(key)) return json{{"id", text_field(j, "id", true)}};
    return payload(j, key);
  };

  if (target == "class") return ClassEdit{*op, class_from_json(entity("class"))};
  if (target == "property") return PropertyEdit{*op, property_from_json(entity("property"))};
  if (target == "instance") {
    json body = entity("instance");
    if (*op == EditOp::Delete && !body.contains("instanceID")) {
      body["instanceID"] = text_field(body, "id", true);
      body["classID"] = "";
    }
    return InstanceEdit{*op, instance_from_json(body, doc)};
  }
  if (target == "restriction") {
    RestrictionEdit e{*op, {}, {}, ClassRelation::SubClassOf};
    if (*op == EditOp::Delete && !j.contains("restriction")) {
      e.def.id = text_field(j, "id", true);
    } else {
      e.def = restriction_from_json(payload(j, "restriction"), doc);
    }
    e.anchor = text_field(j, "anchor");
    if (j.contains("relation")) {
      auto rel = class_relation_from_string(text_field(j, "relation"));
      if (!rel) bad("unknown class relation " + j.at("relation").dump());
      e.relation = *rel;
    }
    return e;
  }
  if (target == "tuple") {
    return TupleEdit{*op, text_field(j, "relation", true), text_field(j, "subject", true),
                     text_field(j, "object", true)};
  }
  bad("unknown edit target '" + target + "'");
}

InstanceGraph annotations_from_json(const json& j, const OntologyDoc& doc) {
  const json* list = &j;
  json wrapped;
  if (j.is_object() && j.contains("instances")) {
    list = &j.at("instances");
  } else if (j.is_object()) {
    wrapped = json::array({j});
    list = &wrapped;
  }
  if (!list->is_array()) bad("annotations must be an object or an array");
  InstanceGraph g;
  for (const auto& item : *list) {
    InstanceDef inst = instance_from_json(item, doc);
    if (g.instances.contains(inst.id)) bad("duplicate annotation for " + inst.id);
    g.instances.emplace(inst.id, std::move(inst));
  }
  return g;
}

json annotations_to_json(const InstanceGraph& graph) {
  json list = json::array();
  for (const auto& [id, inst] : graph.instances) list.push_back(to_json(inst));
  return {{"instances", list}};
}

}  // namespace imagespace::json
