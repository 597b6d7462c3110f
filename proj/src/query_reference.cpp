// SPDX-License-Identifier: Apache-2.0
//
// Naive evaluator used as an oracle for the SQL path. It shares no code with
// the compiler beyond the query AST.
#include <algorithm>
#include <map>
#include <optional>

#include "imagespace/derivations.hpp"
#include "imagespace/query.hpp"

namespace imagespace {
namespace {

struct Evaluator {
  const InstanceGraph& graph;
  const OntologyDoc& doc;
  const TripleQuery& q;
  bool closure;

  std::vector<std::string> domain;
  std::vector<std::string> vars;  // first-occurrence order
  std::map<std::string, std::string> binding;
  std::vector<std::vector<std::size_t>> ready;  // atoms checkable once vars[k] is bound
  std::map<Identifier, std::set<Identifier>> class_sets;
  Bindings result;

  void collect_var(const Term& t) {
    if (const auto* v = std::get_if<Var>(&t)) {
      if (std::find(vars.begin(), vars.end(), v->name) == vars.end()) vars.push_back(v->name);
    }
  }

  std::optional<std::string> resolve(const Term& t) const {
    if (const auto* v = std::get_if<Var>(&t)) {
      auto it = binding.find(v->name);
      if (it == binding.end()) return std::nullopt;
      return it->second;
    }
    if (const auto* c = std::get_if<Const>(&t)) return c->text;
    return std::get<Lit>(t).text;
  }

  std::size_t last_var_index(const Atom& a) const {
    std::size_t k = 0;
    auto consider = [&](const Term& t) {
      if (const auto* v = std::get_if<Var>(&t)) {
        k = std::max(k, static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v->name) - vars.begin()) + 1);
      }
    };
    if (const auto* io = std::get_if<InstanceOfAtom>(&a)) {
      consider(io->subject);
    } else {
      consider(std::get<PropAtom>(a).subject);
      consider(std::get<PropAtom>(a).value);
    }
    return k;  // 0: ground atom
  }

  bool holds(const Atom& a) {
    if (const auto* io = std::get_if<InstanceOfAtom>(&a)) {
      const auto subject = resolve(io->subject);
      auto it = graph.instances.find(*subject);
      if (it == graph.instances.end()) return false;
      auto cs = class_sets.find(io->class_id);
      if (cs == class_sets.end()) {
        std::set<Identifier> s{io->class_id};
        if (closure && doc.find_class(io->class_id)) {
          for (const auto& d : descendants(doc, io->class_id)) s.insert(d);
        }
        cs = class_sets.emplace(io->class_id, std::move(s)).first;
      }
      return cs->second.contains(it->second.class_id);
    }
    const auto& pa = std::get<PropAtom>(a);
    const auto subject = resolve(pa.subject);
    const auto value = resolve(pa.value);
    auto it = graph.instances.find(*subject);
    if (it == graph.instances.end()) return false;
    for (const auto& as : it->second.assertions) {
      if (as.property == pa.property && value_text(as.value) == *value) return true;
    }
    return false;
  }

  void search(std::size_t k) {
    if (k == vars.size()) {
      std::vector<std::string> row;
      for (const auto& h : q.head_vars) row.push_back(binding.at(h));
      result.rows.insert(std::move(row));
      return;
    }
    for (const auto& d : domain) {
      binding[vars[k]] = d;
      bool ok = true;
      for (std::size_t ai : ready[k + 1]) {
        if (!holds(q.atoms[ai])) {
          ok = false;
          break;
        }
      }
      if (ok) search(k + 1);
    }
    binding.erase(vars[k]);
  }

  Bindings run() {
    result.vars = q.head_vars;
    std::set<std::string> values;
    for (const auto& [iid, inst] : graph.instances) {
      values.insert(iid);
      for (const auto& a : inst.assertions) values.insert(value_text(a.value));
    }
    domain.assign(values.begin(), values.end());

    for (const auto& a : q.atoms) {
      if (const auto* io = std::get_if<InstanceOfAtom>(&a)) {
        collect_var(io->subject);
      } else {
        collect_var(std::get<PropAtom>(a).subject);
        collect_var(std::get<PropAtom>(a).value);
      }
    }
    ready.assign(vars.size() + 1, {});
    for (std::size_t i = 0; i < q.atoms.size(); ++i) ready[last_var_index(q.atoms[i])].push_back(i);
    for (std::size_t ai : ready[0]) {
      if (!holds(q.atoms[ai])) return result;
    }
    search(0);
    return result;
  }
};

}  // namespace

Bindings eval_reference(const InstanceGraph& graph, const OntologyDoc& doc, const TripleQuery& q, bool closure) {
  Evaluator e{graph, doc, q, closure, {}, {}, {}, {}, {}, {}};
  return e.run();
}

}  // namespace imagespace
