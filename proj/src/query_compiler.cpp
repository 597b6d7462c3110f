// SPDX-License-Identifier: Apache-2.0
#include <map>

#include "imagespace/derivations.hpp"
#include "imagespace/error.hpp"
#include "imagespace/query.hpp"

namespace imagespace {
namespace {

const std::string& term_text(const Term& t) {
  if (const auto* c = std::get_if<Const>(&t)) return c->text;
  return std::get<Lit>(t).text;
}

}  // namespace

SqlPlan compile_query(const TripleQuery& q, const Catalog& catalog, const OntologyDoc& doc,
                      const CompileOptions& options) {
  SqlPlan plan;
  std::vector<std::string> from;
  std::vector<std::string> where;
  std::map<std::string, std::string> columns;  // variable -> first column

  auto constrain = [&](const std::string& column, const Term& t) {
    if (const auto* v = std::get_if<Var>(&t)) {
      auto [it, fresh] = columns.emplace(v->name, column);
      if (!fresh) where.push_back(column + " = " + it->second);
      return;
    }
    plan.params.push_back(term_text(t));
    where.push_back(column + " = ?");
  };

  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    const std::string alias = "t" + std::to_string(i);
    if (const auto* io = std::get_if<InstanceOfAtom>(&q.atoms[i])) {
      if (!doc.find_class(io->class_id)) throw Error(ErrorCode::UnknownClass, "unknown class " + io->class_id);
      from.push_back("Instance AS " + alias);
      constrain(alias + ".instanceID", io->subject);
      std::set<Identifier> classes{io->class_id};
      if (options.closure) {
        auto d = descendants(doc, io->class_id);
        classes.insert(d.begin(), d.end());
      }
      std::string in = alias + ".classID IN (";
      bool first = true;
      for (const auto& c : classes) {
        in += first ? "?" : ", ?";
        first = false;
        plan.params.push_back(c);
      }
      where.push_back(in + ")");
      continue;
    }
    const auto& pa = std::get<PropAtom>(q.atoms[i]);
    if (options.strict && !doc.find_property(pa.property)) {
      throw Error(ErrorCode::UnknownProperty, "unknown property " + pa.property);
    }
    const auto table = catalog.table_for(pa.property);
    if (!table) {
      plan.provably_empty = true;
      continue;
    }
    from.push_back(sql::quote_identifier(*table) + " AS " + alias);
    constrain(alias + ".subject", pa.subject);
    constrain(alias + ".value", pa.value);
  }

  for (std::size_t i = 0; i < q.head_vars.size(); ++i) {
    plan.projection.emplace_back(q.head_vars[i], "h" + std::to_string(i));
  }
  plan.alias_count = from.size();
  if (plan.provably_empty) {
    plan.params.clear();
    return plan;
  }

  std::string sql = "SELECT DISTINCT ";
  if (plan.projection.empty()) sql += "1";
  for (std::size_t i = 0; i < plan.projection.size(); ++i) {
    if (i) sql += ", ";
    sql += columns.at(plan.projection[i].first) + " AS " + plan.projection[i].second;
  }
  sql += " FROM ";
  for (std::size_t i = 0; i < from.size(); ++i) sql += (i ? ", " : "") + from[i];
  for (std::size_t i = 0; i < where.size(); ++i) sql += (i ? " AND " : " WHERE ") + where[i];
  plan.sql = std::move(sql);
  return plan;
}

Bindings run_plan(sql::Database& db, const SqlPlan& plan) {
  Bindings out;
  for (const auto& [var, alias] : plan.projection) out.vars.push_back(var);
  if (plan.provably_empty) return out;
  auto st = db.prepare(plan.sql);
  for (std::size_t i = 0; i < plan.params.size(); ++i) st.bind(static_cast<int>(i + 1), plan.params[i]);
  while (st.step()) {
    std::vector<std::string> row;
    for (std::size_t i = 0; i < plan.projection.size(); ++i) row.push_back(st.column_text(static_cast<int>(i)));
    out.rows.insert(std::move(row));
  }
  return out;
}

Bindings execute_query(Store& store, std::string_view ontology_id, const TripleQuery& q,
                       const CompileOptions& options) {
  const OntologyDoc doc = store.load_ontology(ontology_id);
  return run_plan(store.database(), compile_query(q, store.catalog(), doc, options));
}

}  // namespace imagespace
