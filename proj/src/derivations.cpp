// SPDX-License-Identifier: Apache-2.0
#include "imagespace/derivations.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>

#include "imagespace/error.hpp"

namespace imagespace {
namespace {

const ClassDef& require_class(const OntologyDoc& doc, std::string_view class_id) {
  const ClassDef* cls = doc.find_class(class_id);
  if (!cls) throw Error(ErrorCode::UnknownClass, "unknown class " + std::string(class_id));
  return *cls;
}

// "_:r2" sorts before "_:r10".
bool restriction_id_less(const Identifier& a, const Identifier& b) {
  auto number = [](const Identifier& id) -> std::optional<unsigned long> {
    if (!is_restriction_id(id)) return std::nullopt;
    unsigned long n = 0;
    const char* first = id.data() + kRestrictionPrefix.size();
    const char* last = id.data() + id.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return n;
  };
  auto na = number(a);
  auto nb = number(b);
  if (na && nb && *na != *nb) return *na < *nb;
  return a < b;
}

// Named parents that exist in the document.
std::vector<Identifier> named_parents(const OntologyDoc& doc, const ClassDef& cls) {
  std::vector<Identifier> out;
  for (const auto& p : cls.sub_class_of) {
    if (doc.classes.contains(p)) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<Identifier> ancestors(const OntologyDoc& doc, std::string_view class_id) {
  const ClassDef& start = require_class(doc, class_id);

  // Topological order of the reachable subgraph by DFS post-order; edges
  // closing a cycle are ignored so malformed input still terminates.
  std::vector<Identifier> post;
  std::map<Identifier, int> state;  // 1 = on stack, 2 = done
  std::function<void(const Identifier&)> visit = [&](const Identifier& id) {
    state[id] = 1;
    for (const auto& p : named_parents(doc, doc.classes.at(id))) {
      if (!state.contains(p)) visit(p);
    }
    state[id] = 2;
    post.push_back(id);
  };
  visit(start.id);

  std::map<Identifier, int> depth;
  depth[start.id] = 0;
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    auto d = depth.find(*it);
    if (d == depth.end()) continue;
    for (const auto& p : named_parents(doc, doc.classes.at(*it))) {
      if (p == start.id) continue;
      auto& slot = depth[p];
      slot = std::max(slot, d->second + 1);
    }
  }

  std::vector<std::pair<int, Identifier>> ordered;
  for (const auto& [id, d] : depth) {
    if (id != start.id) ordered.emplace_back(d, id);
  }
  std::sort(ordered.begin(), ordered.end());
  std::vector<Identifier> out;
  out.reserve(ordered.size());
  for (auto& [d, id] : ordered) out.push_back(std::move(id));
  return out;
}

std::set<Identifier> descendants(const OntologyDoc& doc, std::string_view class_id) {
  require_class(doc, class_id);
  std::map<Identifier, std::vector<Identifier>> children;
  for (const auto& [id, cls] : doc.classes) {
    for (const auto& p : named_parents(doc, cls)) children[p].push_back(id);
  }
  std::set<Identifier> out;
  std::vector<Identifier> stack{Identifier(class_id)};
  while (!stack.empty()) {
    Identifier cur = std::move(stack.back());
    stack.pop_back();
    for (const auto& child : children[cur]) {
      if (out.insert(child).second) stack.push_back(child);
    }
  }
  out.erase(Identifier(class_id));
  return out;
}

bool is_subclass_or_self(const OntologyDoc& doc, std::string_view class_id, std::string_view target) {
  if (class_id == target) return true;
  if (!doc.find_class(class_id)) return false;
  std::set<Identifier> seen{Identifier(class_id)};
  std::vector<Identifier> stack{Identifier(class_id)};
  while (!stack.empty()) {
    Identifier cur = std::move(stack.back());
    stack.pop_back();
    for (const auto& p : named_parents(doc, doc.classes.at(cur))) {
      if (p == target) return true;
      if (seen.insert(p).second) stack.push_back(p);
    }
  }
  return false;
}

std::vector<EffectiveRestriction> effective_restrictions(const OntologyDoc& doc,
                                                         std::string_view class_id) {
  require_class(doc, class_id);
  std::vector<Identifier> chain{Identifier(class_id)};
  for (auto& a : ancestors(doc, class_id)) chain.push_back(std::move(a));

  auto declared = [&](const Identifier& cid) {
    std::vector<const Restriction*> out;
    for (const auto& m : doc.classes.at(cid).sub_class_of) {
      if (const Restriction* r = doc.find_restriction(m)) out.push_back(r);
    }
    std::sort(out.begin(), out.end(),
              [](const Restriction* a, const Restriction* b) { return restriction_id_less(a->id, b->id); });
    return out;
  };

  std::map<Identifier, std::set<Identifier>> restricted_props;
  std::map<Identifier, std::set<Identifier>> chain_ancestors;
  for (const auto& cid : chain) {
    for (const Restriction* r : declared(cid)) restricted_props[cid].insert(r->on_property);
    auto anc = ancestors(doc, cid);
    chain_ancestors[cid] = std::set<Identifier>(anc.begin(), anc.end());
  }

  auto overridden = [&](const Identifier& declared_on, const Identifier& prop) {
    for (const auto& other : chain) {
      if (other == declared_on) continue;
      if (!restricted_props[other].contains(prop)) continue;
      if (chain_ancestors[other].contains(declared_on)) return true;
    }
    return false;
  };

  std::vector<EffectiveRestriction> out;
  for (const auto& cid : chain) {
    const bool inherited = cid != class_id;
    for (const Restriction* r : declared(cid)) {
      if (inherited && overridden(cid, r->on_property)) continue;
      out.push_back({*r, cid, inherited});
    }
  }
  return out;
}

std::string_view to_string(WidgetHint w) {
  switch (w) {
    case WidgetHint::Scalar: return "scalar";
    case WidgetHint::ReferenceList: return "reference-list";
    case WidgetHint::NestedCreate: return "nested-create";
  }
  return "scalar";
}

bool has_required_properties(const OntologyDoc& doc, std::string_view class_id) {
  for (const auto& er : effective_restrictions(doc, class_id)) {
    const Restriction& r = er.restriction;
    if (r.has_class || r.has_value) return true;
    if ((r.min_c && *r.min_c > 0) || (r.c && *r.c > 0)) return true;
    if (r.qualifier) {
      const Qualifier& q = *r.qualifier;
      if ((q.min_cq && *q.min_cq > 0) || (q.cq && *q.cq > 0)) return true;
    }
  }
  return false;
}

FormSpec annotation_form_spec(const OntologyDoc& doc, std::string_view class_id) {
  require_class(doc, class_id);
  const auto effective = effective_restrictions(doc, class_id);
  const auto anc = ancestors(doc, class_id);
  const std::set<Identifier> lineage(anc.begin(), anc.end());

  // property -> inherited flag from the domain match
  std::map<Identifier, bool> applicable;
  for (const auto& [pid, prop] : doc.properties) {
    if (prop.domain.contains(Identifier(class_id))) {
      applicable[pid] = false;
      continue;
    }
    for (const auto& d : prop.domain) {
      if (lineage.contains(d)) {
        applicable[pid] = true;
        break;
      }
    }
  }
  for (const auto& er : effective) {
    const auto& pid = er.restriction.on_property;
    if (!doc.properties.contains(pid)) {
      throw Error(ErrorCode::UnknownProperty,
                  "restriction " + er.restriction.id + " is on unknown property " + pid);
    }
    applicable.try_emplace(pid, er.inherited);
  }

  FormSpec spec;
  spec.class_id = Identifier(class_id);
  for (const auto& [pid, domain_inherited] : applicable) {
    const PropertyDef& prop = doc.properties.at(pid);
    FormField field;
    field.property = pid;
    field.kind = prop.kind;

    std::vector<const EffectiveRestriction*> on_prop;
    for (const auto& er : effective) {
      if (er.restriction.on_property == pid) on_prop.push_back(&er);
    }

    for (const auto* er : on_prop) {
      const Restriction& r = er->restriction;
      if (r.c && !field.c) field.c = r.c;
      if (r.min_c) field.min_c = field.min_c ? std::max(*field.min_c, *r.min_c) : *r.min_c;
      if (r.max_c) field.max_c = field.max_c ? std::min(*field.max_c, *r.max_c) : *r.max_c;
      if (r.to_class && field.range_hint.empty()) field.range_hint = *r.to_class;
    }
    if (prop.unique) field.max_c = field.max_c ? std::min<Count>(*field.max_c, 1) : 1;
    if (field.range_hint.empty() && !prop.range.empty()) field.range_hint = *prop.range.begin();

    field.inherited = on_prop.empty()
                          ? domain_inherited
                          : std::all_of(on_prop.begin(), on_prop.end(),
                                        [](const EffectiveRestriction* er) { return er->inherited; });

    if (prop.kind == PropertyKind::Datatype) {
      field.widget = WidgetHint::Scalar;
    } else if (doc.find_class(field.range_hint) && has_required_properties(doc, field.range_hint)) {
      field.widget = WidgetHint::NestedCreate;
    } else {
      field.widget = WidgetHint::ReferenceList;
    }
    spec.fields.push_back(std::move(field));
  }
  return spec;
}

}  // namespace imagespace
