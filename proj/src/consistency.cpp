// SPDX-License-Identifier: Apache-2.0
#include "imagespace/consistency.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "imagespace/derivations.hpp"
#include "imagespace/error.hpp"

namespace imagespace {
namespace {

// What a reference is allowed to point at.
enum class Target { ClassOrRestriction, Class, ClassOrDatatype, Property, Instance };

struct Reference {
  std::string relation;
  Identifier subject;
  Identifier target;
  Target kind;
};

bool resolves(const OntologyDoc& doc, const Reference& ref) {
  switch (ref.kind) {
    case Target::ClassOrRestriction:
      return doc.classes.contains(ref.target) || doc.restrictions.contains(ref.target);
    case Target::Class:
      return doc.classes.contains(ref.target);
    case Target::ClassOrDatatype:
      return doc.classes.contains(ref.target) || is_datatype_name(ref.target);
    case Target::Property:
      return doc.properties.contains(ref.target);
    case Target::Instance:
      return doc.instances.contains(ref.target);
  }
  return false;
}

void for_each_reference(const OntologyDoc& doc, const std::function<void(const Reference&)>& fn) {
  for (const auto& [cid, cls] : doc.classes) {
    for (ClassRelation rel : kAllClassRelations) {
      for (const auto& m : members(cls, rel)) {
        fn({std::string(to_string(rel)), cid, m, Target::ClassOrRestriction});
      }
    }
    for (const auto& m : cls.one_of) fn({"oneOf", cid, m, Target::Instance});
  }
  for (const auto& [pid, prop] : doc.properties) {
    for (const auto& d : prop.domain) fn({"domain", pid, d, Target::Class});
    for (const auto& r : prop.range) fn({"range", pid, r, Target::ClassOrDatatype});
    for (const auto& p : prop.sub_property_of) fn({"subPropertyOf", pid, p, Target::Property});
    for (const auto& p : prop.same_property_as) fn({"samePropertyAs", pid, p, Target::Property});
    for (const auto& p : prop.inverse_of) fn({"inverseOf", pid, p, Target::Property});
  }
  for (const auto& [rid, r] : doc.restrictions) {
    fn({"onProperty", rid, r.on_property, Target::Property});
    if (r.to_class) fn({"toClass", rid, *r.to_class, Target::ClassOrDatatype});
    if (r.has_class) fn({"hasClass", rid, *r.has_class, Target::Class});
    if (r.has_value) {
      if (const auto* ref = std::get_if<InstanceRef>(&*r.has_value)) {
        fn({"hasValue", rid, ref->id, Target::Instance});
      }
    }
    if (r.qualifier) fn({"hasClassQ", rid, r.qualifier->has_class_q, Target::ClassOrDatatype});
  }
  for (const auto& [iid, inst] : doc.instances) {
    fn({"instanceOf", iid, inst.class_id, Target::Class});
    for (const auto& a : inst.assertions) {
      fn({"property", iid, a.property, Target::Property});
      if (const auto* ref = std::get_if<InstanceRef>(&a.value)) {
        fn({a.property, iid, ref->id, Target::Instance});
      }
    }
    for (const auto& o : inst.different_from) fn({"differentIndividualFrom", iid, o, Target::Instance});
    for (const auto& o : inst.same_as) fn({"sameIndividualAs", iid, o, Target::Instance});
  }
}

std::vector<Reference> dangling_references(const OntologyDoc& doc) {
  std::vector<Reference> out;
  for_each_reference(doc, [&](const Reference& ref) {
    if (!resolves(doc, ref)) out.push_back(ref);
  });
  return out;
}

std::string bound_text(const std::optional<Count>& n) { return n ? std::to_string(*n) : "unset"; }

void check_restriction(const Restriction& r, std::vector<Violation>& out) {
  if (r.min_c && r.max_c && *r.min_c > *r.max_c) {
    out.push_back({ViolationCode::CardinalityBounds, {r.id},
                   "minCardinality " + bound_text(r.min_c) + " exceeds maxCardinality " +
                       bound_text(r.max_c)});
  }
  if (r.c && (r.min_c || r.max_c)) {
    out.push_back({ViolationCode::CardinalityBounds, {r.id},
                   "cardinality cannot be combined with minCardinality/maxCardinality"});
  }
  if (r.qualifier) {
    const Qualifier& q = *r.qualifier;
    if (q.min_cq && q.max_cq && *q.min_cq > *q.max_cq) {
      out.push_back({ViolationCode::CardinalityBounds, {r.id},
                     "minCardinalityQ " + bound_text(q.min_cq) + " exceeds maxCardinalityQ " +
                         bound_text(q.max_cq)});
    }
    if (q.cq && (q.min_cq || q.max_cq)) {
      out.push_back({ViolationCode::CardinalityBounds, {r.id},
                     "cardinalityQ cannot be combined with minCardinalityQ/maxCardinalityQ"});
    }
  }
  if (r.to_class && (r.has_class || r.qualifier)) {
    out.push_back({ViolationCode::ToClassExclusion, {r.id},
                   "toClass excludes hasClass and qualification"});
  }
}

// Strongly connected components of size > 1, or self loops.
std::vector<std::vector<Identifier>> cycles(const std::map<Identifier, std::vector<Identifier>>& graph) {
  std::map<Identifier, int> index, low;
  std::set<Identifier> on_stack;
  std::vector<Identifier> stack;
  std::vector<std::vector<Identifier>> out;
  int counter = 0;

  std::function<void(const Identifier&)> connect = [&](const Identifier& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    auto it = graph.find(v);
    if (it != graph.end()) {
      for (const auto& w : it->second) {
        if (!index.contains(w)) {
          connect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.contains(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      std::vector<Identifier> component;
      Identifier w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        component.push_back(w);
      } while (w != v);
      bool self_loop = false;
      if (it != graph.end()) {
        self_loop = std::find(it->second.begin(), it->second.end(), v) != it->second.end();
      }
      if (component.size() > 1 || self_loop) {
        std::sort(component.begin(), component.end());
        out.push_back(std::move(component));
      }
    }
  };
  for (const auto& [v, _] : graph) {
    if (!index.contains(v)) connect(v);
  }
  return out;
}

std::string describe_cycle(const std::vector<Identifier>& ids) {
  std::string s;
  for (const auto& id : ids) {
    if (!s.empty()) s += ", ";
    s += id;
  }
  return s;
}

}  // namespace

std::vector<Violation> check_ontology(const OntologyDoc& doc) {
  std::vector<Violation> out;

  for (const auto& [rid, r] : doc.restrictions) check_restriction(r, out);

  std::map<Identifier, std::vector<Identifier>> class_graph;
  for (const auto& [cid, cls] : doc.classes) {
    auto& edges = class_graph[cid];
    for (const auto& p : cls.sub_class_of) {
      if (doc.classes.contains(p)) edges.push_back(p);
    }
  }
  const auto class_cycles = cycles(class_graph);
  for (const auto& cyc : class_cycles) {
    out.push_back({ViolationCode::SubClassCycle, cyc, "subClassOf cycle through " + describe_cycle(cyc)});
  }

  std::map<Identifier, std::vector<Identifier>> prop_graph;
  for (const auto& [pid, prop] : doc.properties) {
    auto& edges = prop_graph[pid];
    for (const auto& p : prop.sub_property_of) {
      if (doc.properties.contains(p)) edges.push_back(p);
    }
  }
  for (const auto& cyc : cycles(prop_graph)) {
    out.push_back({ViolationCode::SubPropertyCycle, cyc,
                   "subPropertyOf cycle through " + describe_cycle(cyc)});
  }

  for (const auto& [cid, cls] : doc.classes) {
    const auto anc = ancestors(doc, cid);
    const std::set<Identifier> lineage(anc.begin(), anc.end());
    auto related = [&](const Identifier& other) {
      if (other == cid || lineage.contains(other)) return true;
      return doc.classes.contains(other) && is_subclass_or_self(doc, other, cid);
    };
    for (const auto& other : cls.disjoint_with) {
      if (doc.classes.contains(other) && related(other)) {
        out.push_back({ViolationCode::AncestorInDisjointWith, {cid, other},
                       other + " is " + cid + " or one of its ancestors or descendants"});
      }
    }
    for (const auto& other : cls.complement_of) {
      if (doc.classes.contains(other) && related(other)) {
        out.push_back({ViolationCode::AncestorInComplementOf, {cid, other},
                       other + " is " + cid + " or one of its ancestors or descendants"});
      }
    }
  }

  for (const auto& ref : dangling_references(doc)) {
    out.push_back({ViolationCode::DanglingReference, {ref.subject, ref.target},
                   ref.relation + " of " + ref.subject + " references undeclared " + ref.target});
  }

  normalize(out);
  return out;
}

// Edits ---------------------------------------------------------------------

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::InvalidEdit, message); }

void require_new_id(const OntologyDoc& doc, const Identifier& id) {
  if (!is_valid_identifier(id)) invalid("invalid identifier '" + id + "'");
  if (is_restriction_id(id)) invalid("identifier '" + id + "' uses the reserved restriction prefix");
  if (is_datatype_name(id)) invalid("identifier '" + id + "' is a built-in datatype name");
  if (doc.classes.contains(id) || doc.restrictions.contains(id) || doc.properties.contains(id) ||
      doc.instances.contains(id)) {
    invalid("identifier '" + id + "' is already declared");
  }
}

void require_no_restriction_members(const ClassDef& c) {
  for (ClassRelation rel : kAllClassRelations) {
    for (const auto& m : members(c, rel)) {
      if (is_restriction_id(m)) invalid("restrictions are anchored through restriction edits, not " + m);
    }
  }
}

// Removes one dangling reference; returns the removed tuples.
void remove_reference(OntologyDoc& doc, const Reference& ref, std::vector<RemovedTuple>& removed) {
  auto record = [&](std::string relation, const Identifier& subject, const std::string& object) {
    removed.push_back({std::move(relation), subject, object});
  };
  if (auto rel = class_relation_from_string(ref.relation); rel && doc.classes.contains(ref.subject)) {
    members(doc.classes.at(ref.subject), *rel).erase(ref.target);
    record(ref.relation, ref.subject, ref.target);
    return;
  }
  if (ref.relation == "oneOf") {
    auto& list = doc.classes.at(ref.subject).one_of;
    list.erase(std::remove(list.begin(), list.end(), ref.target), list.end());
    record(ref.relation, ref.subject, ref.target);
    return;
  }
  if (auto* prop = doc.properties.contains(ref.subject) ? &doc.properties.at(ref.subject) : nullptr;
      prop && (ref.relation == "domain" || ref.relation == "range" || ref.relation == "subPropertyOf" ||
               ref.relation == "samePropertyAs" || ref.relation == "inverseOf")) {
    std::set<Identifier>& set = ref.relation == "domain"           ? prop->domain
                                : ref.relation == "range"          ? prop->range
                                : ref.relation == "subPropertyOf"  ? prop->sub_property_of
                                : ref.relation == "samePropertyAs" ? prop->same_property_as
                                                                   : prop->inverse_of;
    set.erase(ref.target);
    record(ref.relation, ref.subject, ref.target);
    return;
  }
  if (auto it = doc.restrictions.find(ref.subject); it != doc.restrictions.end()) {
    Restriction& r = it->second;
    if (ref.relation == "onProperty") {
      record("restriction", r.id, r.on_property);
      doc.restrictions.erase(it);
      return;
    }
    if (ref.relation == "toClass") r.to_class.reset();
    if (ref.relation == "hasClass") r.has_class.reset();
    if (ref.relation == "hasValue") r.has_value.reset();
    if (ref.relation == "hasClassQ") r.qualifier.reset();
    record(ref.relation, r.id, ref.target);
    if (!r.has_constraint()) {
      record("restriction", r.id, r.on_property);
      doc.restrictions.erase(it);
    }
    return;
  }
  if (auto it = doc.instances.find(ref.subject); it != doc.instances.end()) {
    InstanceDef& inst = it->second;
    if (ref.relation == "instanceOf") {
      record("instance", inst.id, inst.class_id);
      doc.instances.erase(it);
      return;
    }
    if (ref.relation == "differentIndividualFrom") {
      inst.different_from.erase(ref.target);
    } else if (ref.relation == "sameIndividualAs") {
      inst.same_as.erase(ref.target);
    } else if (ref.relation == "property") {
      std::erase_if(inst.assertions, [&](const Assertion& a) { return a.property == ref.target; });
    } else {
      // assertion whose reference value disappeared
      std::erase_if(inst.assertions, [&](const Assertion& a) {
        const auto* v = std::get_if<InstanceRef>(&a.value);
        return a.property == ref.relation && v && v->id == ref.target;
      });
    }
    record(ref.relation, inst.id, ref.target);
  }
}

// Anchors of a restriction, as (class, relation).
std::vector<std::pair<Identifier, ClassRelation>> anchors_of(const OntologyDoc& doc, const Identifier& rid) {
  std::vector<std::pair<Identifier, ClassRelation>> out;
  for (const auto& [cid, cls] : doc.classes) {
    for (ClassRelation rel : kAllClassRelations) {
      if (members(cls, rel).contains(rid)) out.emplace_back(cid, rel);
    }
  }
  return out;
}

struct Pending {
  OntologyDoc doc;
  bool deletion = false;
  std::vector<RemovedTuple> removed;
};

void apply_class_edit(Pending& p, const ClassEdit& e) {
  auto& classes = p.doc.classes;
  switch (e.op) {
    case EditOp::Insert:
      require_new_id(p.doc, e.def.id);
      require_no_restriction_members(e.def);
      classes.emplace(e.def.id, e.def);
      break;
    case EditOp::Update: {
      auto it = classes.find(e.def.id);
      if (it == classes.end()) invalid("no class " + e.def.id);
      ClassDef next = e.def;
      for (ClassRelation rel : kAllClassRelations) {
        auto& set = members(next, rel);
        std::erase_if(set, [](const Identifier& m) { return is_restriction_id(m); });
        for (const auto& m : members(it->second, rel)) {
          if (is_restriction_id(m)) set.insert(m);
        }
      }
      it->second = std::move(next);
      break;
    }
    case EditOp::Delete: {
      auto it = classes.find(e.def.id);
      if (it == classes.end()) invalid("no class " + e.def.id);
      // restrictions anchored only here go with the class
      std::vector<Identifier> owned;
      for (ClassRelation rel : kAllClassRelations) {
        for (const auto& m : members(it->second, rel)) {
          if (p.doc.restrictions.contains(m) && anchors_of(p.doc, m).size() == 1) owned.push_back(m);
        }
      }
      classes.erase(it);
      for (const auto& rid : owned) {
        p.removed.push_back({"restriction", rid, p.doc.restrictions.at(rid).on_property});
        p.doc.restrictions.erase(rid);
      }
      p.deletion = true;
      break;
    }
  }
}

void apply_property_edit(Pending& p, const PropertyEdit& e) {
  auto& props = p.doc.properties;
  switch (e.op) {
    case EditOp::Insert:
      require_new_id(p.doc, e.def.id);
      props.emplace(e.def.id, e.def);
      break;
    case EditOp::Update: {
      auto it = props.find(e.def.id);
      if (it == props.end()) invalid("no property " + e.def.id);
      it->second = e.def;
      break;
    }
    case EditOp::Delete:
      if (!props.erase(e.def.id)) invalid("no property " + e.def.id);
      p.deletion = true;
      break;
  }
}

void apply_instance_edit(Pending& p, const InstanceEdit& e) {
  auto& insts = p.doc.instances;
  switch (e.op) {
    case EditOp::Insert:
      require_new_id(p.doc, e.def.id);
      insts.emplace(e.def.id, e.def);
      break;
    case EditOp::Update: {
      auto it = insts.find(e.def.id);
      if (it == insts.end()) invalid("no instance " + e.def.id);
      it->second = e.def;
      break;
    }
    case EditOp::Delete:
      if (!insts.erase(e.def.id)) invalid("no instance " + e.def.id);
      p.deletion = true;
      break;
  }
}

void apply_restriction_edit(Pending& p, const RestrictionEdit& e) {
  auto& rs = p.doc.restrictions;
  switch (e.op) {
    case EditOp::Insert: {
      auto anchor = p.doc.classes.find(e.anchor);
      if (anchor == p.doc.classes.end()) invalid("no anchor class " + e.anchor);
      Restriction r = e.def;
      if (r.id.empty()) {
        r.id = p.doc.fresh_restriction_id();
      } else if (!is_restriction_id(r.id) || rs.contains(r.id) || p.doc.classes.contains(r.id)) {
        invalid("restriction identifier " + r.id + " is not a fresh \"_:r\" identifier");
      }
      if (!r.has_constraint()) invalid("restriction " + r.id + " constrains nothing");
      members(anchor->second, e.relation).insert(r.id);
      rs.emplace(r.id, std::move(r));
      break;
    }
    case EditOp::Update: {
      auto it = rs.find(e.def.id);
      if (it == rs.end()) invalid("no restriction " + e.def.id);
      if (!e.def.has_constraint()) invalid("restriction " + e.def.id + " constrains nothing");
      it->second = e.def;
      break;
    }
    case EditOp::Delete:
      if (!rs.erase(e.def.id)) invalid("no restriction " + e.def.id);
      p.deletion = true;
      break;
  }
}

void apply_tuple_edit(Pending& p, const TupleEdit& e) {
  if (e.op == EditOp::Update) invalid("tuples are inserted or deleted, not updated");
  const bool insert = e.op == EditOp::Insert;
  if (!insert) p.deletion = true;
  OntologyDoc& doc = p.doc;

  auto toggle = [&](std::set<Identifier>& set) {
    if (insert) {
      set.insert(e.object);
    } else if (!set.erase(e.object)) {
      invalid("no tuple " + e.relation + "(" + e.subject + ", " + e.object + ")");
    }
  };

  if (e.relation == "import") {
    toggle(doc.imports);
    return;
  }
  if (auto rel = class_relation_from_string(e.relation)) {
    auto it = doc.classes.find(e.subject);
    if (it == doc.classes.end()) invalid("no class " + e.subject);
    if (insert && is_restriction_id(e.object)) {
      invalid("restrictions are anchored through restriction edits, not " + e.object);
    }
    toggle(members(it->second, *rel));
    if (!insert && doc.restrictions.contains(e.object) && anchors_of(doc, e.object).empty()) {
      p.removed.push_back({"restriction", e.object, doc.restrictions.at(e.object).on_property});
      doc.restrictions.erase(e.object);
    }
    return;
  }
  if (e.relation == "oneOf") {
    auto it = doc.classes.find(e.subject);
    if (it == doc.classes.end()) invalid("no class " + e.subject);
    auto& list = it->second.one_of;
    auto pos = std::find(list.begin(), list.end(), e.object);
    if (insert) {
      if (pos == list.end()) list.push_back(e.object);
    } else {
      if (pos == list.end()) invalid("no tuple oneOf(" + e.subject + ", " + e.object + ")");
      list.erase(pos);
    }
    return;
  }
  if (e.relation == "domain" || e.relation == "range" || e.relation == "subPropertyOf" ||
      e.relation == "samePropertyAs" || e.relation == "inverseOf") {
    auto it = doc.properties.find(e.subject);
    if (it == doc.properties.end()) invalid("no property " + e.subject);
    PropertyDef& prop = it->second;
    toggle(e.relation == "domain"           ? prop.domain
           : e.relation == "range"          ? prop.range
           : e.relation == "subPropertyOf"  ? prop.sub_property_of
           : e.relation == "samePropertyAs" ? prop.same_property_as
                                            : prop.inverse_of);
    return;
  }
  if (e.relation == "differentIndividualFrom" || e.relation == "sameIndividualAs") {
    auto it = doc.instances.find(e.subject);
    if (it == doc.instances.end()) invalid("no instance " + e.subject);
    toggle(e.relation == "sameIndividualAs" ? it->second.same_as : it->second.different_from);
    return;
  }
  invalid("unknown relation " + e.relation);
}

}  // namespace

EditOutcome apply_edit(const OntologyDoc& doc, const Edit& edit) {
  if (auto existing = check_ontology(doc); !existing.empty()) {
    throw Error(ErrorCode::InconsistentInputDoc, "edit applied to an inconsistent document",
                std::move(existing));
  }

  Pending p{doc, false, {}};
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ClassEdit>) apply_class_edit(p, e);
        if constexpr (std::is_same_v<T, PropertyEdit>) apply_property_edit(p, e);
        if constexpr (std::is_same_v<T, InstanceEdit>) apply_instance_edit(p, e);
        if constexpr (std::is_same_v<T, RestrictionEdit>) apply_restriction_edit(p, e);
        if constexpr (std::is_same_v<T, TupleEdit>) apply_tuple_edit(p, e);
      },
      edit);

  auto violations = check_ontology(p.doc);
  if (violations.empty()) {
    if (p.removed.empty()) return Applied{std::move(p.doc)};
    return Cascaded{std::move(p.doc), std::move(p.removed)};
  }

  const bool only_dangling = std::all_of(violations.begin(), violations.end(), [](const Violation& v) {
    return v.code == ViolationCode::DanglingReference;
  });
  if (!p.deletion || !only_dangling) return Rejected{std::move(violations)};

  // Each round removes every dangling reference; removing an entity can
  // expose new ones (anchors of a dropped restriction, references to a
  // dropped instance).
  for (auto refs = dangling_references(p.doc); !refs.empty(); refs = dangling_references(p.doc)) {
    const std::size_t before = p.removed.size();
    for (const auto& ref : refs) {
      if (!resolves(p.doc, ref)) remove_reference(p.doc, ref, p.removed);
    }
    if (p.removed.size() == before) break;
  }
  violations = check_ontology(p.doc);
  if (!violations.empty()) return Rejected{std::move(violations)};
  return Cascaded{std::move(p.doc), std::move(p.removed)};
}

std::set<Identifier> candidate_classes(const OntologyDoc& doc, std::string_view class_id,
                                       ClassRelation relation) {
  if (!doc.find_class(class_id)) throw Error(ErrorCode::UnknownClass, "unknown class " + std::string(class_id));
  const Identifier self(class_id);
  std::set<Identifier> out;

  switch (relation) {
    case ClassRelation::DisjointWith:
    case ClassRelation::ComplementOf: {
      const auto anc = ancestors(doc, self);
      const std::set<Identifier> excluded_up(anc.begin(), anc.end());
      const auto excluded_down = descendants(doc, self);
      for (const auto& [cid, _] : doc.classes) {
        if (cid != self && !excluded_up.contains(cid) && !excluded_down.contains(cid)) out.insert(cid);
      }
      return out;
    }
    case ClassRelation::SubClassOf: {
      // Adding self -> c makes every class in {c} + ancestors(c) an ancestor
      // of every class in {self} + descendants(self).
      auto lower = descendants(doc, self);
      lower.insert(self);
      auto blocked = [&](const Identifier& d, const Identifier& a) {
        const ClassDef& dc = doc.classes.at(d);
        const ClassDef& ac = doc.classes.at(a);
        return dc.disjoint_with.contains(a) || dc.complement_of.contains(a) || ac.disjoint_with.contains(d) ||
               ac.complement_of.contains(d);
      };
      for (const auto& [cid, _] : doc.classes) {
        if (lower.contains(cid)) continue;  // self or a descendant: cycle
        auto upper_list = ancestors(doc, cid);
        std::set<Identifier> upper(upper_list.begin(), upper_list.end());
        upper.insert(cid);
        bool ok = true;
        for (const auto& d : lower) {
          for (const auto& a : upper) {
            if (blocked(d, a)) {
              ok = false;
              break;
            }
          }
          if (!ok) break;
        }
        if (ok) out.insert(cid);
      }
      return out;
    }
    case ClassRelation::SameClassAs:
    case ClassRelation::UnionOf:
    case ClassRelation::IntersectionOf:
    case ClassRelation::DisjointUnionOf:
      for (const auto& [cid, _] : doc.classes) out.insert(cid);
      return out;
  }
  return out;
}

// Instance validation --------------------------------------------------------

namespace {

class InstanceLookup {
 public:
  InstanceLookup(const OntologyDoc& doc, const InstanceGraph& graph) : doc_(doc), graph_(graph) {}

  const InstanceDef* find(std::string_view id) const {
    auto it = graph_.instances.find(Identifier(id));
    if (it != graph_.instances.end()) return &it->second;
    return doc_.find_instance(id);
  }

  // Value conforms to a class (via the asserted hierarchy) or a datatype.
  bool conforms(const Value& v, const Identifier& target) const {
    if (auto dt = datatype_from_name(target)) {
      const auto* lit = std::get_if<Literal>(&v);
      return lit && lit->datatype == *dt && literal_is_valid(*lit);
    }
    const auto* ref = std::get_if<InstanceRef>(&v);
    if (!ref) return false;
    const InstanceDef* inst = find(ref->id);
    return inst && is_subclass_or_self(doc_, inst->class_id, target);
  }

 private:
  const OntologyDoc& doc_;
  const InstanceGraph& graph_;
};

std::string count_text(std::size_t n) { return std::to_string(n) + (n == 1 ? " value" : " values"); }

}  // namespace

std::vector<Violation> validate_instance(const OntologyDoc& doc, const InstanceGraph& graph,
                                         std::string_view instance_id) {
  const InstanceLookup lookup(doc, graph);
  const InstanceDef* inst = lookup.find(instance_id);
  if (!inst) throw Error(ErrorCode::UnknownInstance, "unknown instance " + std::string(instance_id));
  const Identifier& iid = inst->id;

  std::vector<Violation> out;
  if (!doc.classes.contains(inst->class_id)) {
    out.push_back({ViolationCode::DanglingReference, {iid, inst->class_id},
                   "instance of undeclared class " + inst->class_id});
    return out;
  }

  // distinct values per property, in first-seen order
  std::map<Identifier, std::vector<Value>> values;
  for (const auto& a : inst->assertions) {
    auto& vs = values[a.property];
    if (std::find(vs.begin(), vs.end(), a.value) == vs.end()) vs.push_back(a.value);
  }

  for (const auto& [pid, vs] : values) {
    const PropertyDef* prop = doc.find_property(pid);
    if (!prop) {
      out.push_back({ViolationCode::DanglingReference, {iid, pid}, "undeclared property " + pid});
      continue;
    }
    if (!prop->domain.empty()) {
      const bool in_domain = std::any_of(prop->domain.begin(), prop->domain.end(), [&](const Identifier& d) {
        return is_subclass_or_self(doc, inst->class_id, d);
      });
      if (!in_domain) {
        out.push_back({ViolationCode::DomainViolation, {iid, pid},
                       inst->class_id + " is outside the domain of " + pid});
      }
    }
    for (const auto& v : vs) {
      const std::string& text = value_text(v);
      if (prop->kind == PropertyKind::Object) {
        const auto* ref = std::get_if<InstanceRef>(&v);
        if (!ref) {
          out.push_back({ViolationCode::RangeViolation, {iid, pid, text},
                         "object property " + pid + " needs an instance reference"});
          continue;
        }
        if (!lookup.find(ref->id)) {
          out.push_back({ViolationCode::DanglingReference, {iid, pid, text},
                         "reference to undeclared instance " + text});
          continue;
        }
      } else {
        const auto* lit = std::get_if<Literal>(&v);
        if (!lit) {
          out.push_back({ViolationCode::RangeViolation, {iid, pid, text},
                         "datatype property " + pid + " needs a literal"});
          continue;
        }
        if (!literal_is_valid(*lit)) {
          out.push_back({ViolationCode::RangeViolation, {iid, pid, text},
                         "'" + text + "' is not a valid " + std::string(to_string(lit->datatype))});
          continue;
        }
      }
      if (!prop->range.empty()) {
        const bool fits = std::any_of(prop->range.begin(), prop->range.end(),
                                      [&](const Identifier& r) { return lookup.conforms(v, r); });
        if (!fits) {
          out.push_back({ViolationCode::RangeViolation, {iid, pid, text},
                         text + " is outside the range of " + pid});
        }
      }
    }
    if (prop->unique && vs.size() > 1) {
      out.push_back({ViolationCode::UniquePropertyViolation, {iid, pid},
                     pid + " is unique but has " + count_text(vs.size())});
    }
  }

  static const std::vector<Value> kNone;
  for (const auto& er : effective_restrictions(doc, inst->class_id)) {
    const Restriction& r = er.restriction;
    const auto it = values.find(r.on_property);
    const std::vector<Value>& vs = it == values.end() ? kNone : it->second;
    const std::size_t n = vs.size();
    const std::vector<std::string> subjects{iid, r.on_property};
    const std::string origin = " (restriction " + r.id + " on " + er.declared_on + ")";

    if (r.c && n < *r.c) {
      out.push_back({ViolationCode::CardinalityUnmet, subjects,
                     r.on_property + " needs exactly " + std::to_string(*r.c) + ", has " + count_text(n) + origin});
    }
    if (r.c && n > *r.c) {
      out.push_back({ViolationCode::CardinalityExceeded, subjects,
                     r.on_property + " allows exactly " + std::to_string(*r.c) + ", has " + count_text(n) + origin});
    }
    if (r.min_c && n < *r.min_c) {
      out.push_back({ViolationCode::CardinalityUnmet, subjects,
                     r.on_property + " needs at least " + std::to_string(*r.min_c) + ", has " + count_text(n) +
                         origin});
    }
    if (r.max_c && n > *r.max_c) {
      out.push_back({ViolationCode::CardinalityExceeded, subjects,
                     r.on_property + " allows at most " + std::to_string(*r.max_c) + ", has " + count_text(n) +
                         origin});
    }
    if (r.to_class) {
      for (const auto& v : vs) {
        if (!lookup.conforms(v, *r.to_class)) {
          out.push_back({ViolationCode::RangeViolation, {iid, r.on_property, value_text(v)},
                         value_text(v) + " is not a " + *r.to_class + origin});
        }
      }
    }
    if (r.has_class) {
      const bool some = std::any_of(vs.begin(), vs.end(), [&](const Value& v) { return lookup.conforms(v, *r.has_class); });
      if (!some) {
        out.push_back({ViolationCode::HasValueMissing, subjects,
                       r.on_property + " needs a value of class " + *r.has_class + origin});
      }
    }
    if (r.has_value) {
      const std::string& wanted = value_text(*r.has_value);
      const bool present =
          std::any_of(vs.begin(), vs.end(), [&](const Value& v) { return value_text(v) == wanted; });
      if (!present) {
        out.push_back({ViolationCode::HasValueMissing, subjects, r.on_property + " must include " + wanted + origin});
      }
    }
    if (r.qualifier) {
      const Qualifier& q = *r.qualifier;
      const auto qn = static_cast<std::size_t>(
          std::count_if(vs.begin(), vs.end(), [&](const Value& v) { return lookup.conforms(v, q.has_class_q); }));
      const bool bad = (q.cq && qn != *q.cq) || (q.min_cq && qn < *q.min_cq) || (q.max_cq && qn > *q.max_cq);
      if (bad) {
        out.push_back({ViolationCode::QualifiedCardinality, subjects,
                       r.on_property + " has " + count_text(qn) + " of class " + q.has_class_q + origin});
      }
    }
  }

  normalize(out);
  return out;
}

std::vector<Violation> validate_graph(const OntologyDoc& doc, const InstanceGraph& graph) {
  std::vector<Violation> out;
  for (const auto& [id, _] : graph.instances) {
    auto vs = validate_instance(doc, graph, id);
    out.insert(out.end(), vs.begin(), vs.end());
  }
  normalize(out);
  return out;
}

}  // namespace imagespace
