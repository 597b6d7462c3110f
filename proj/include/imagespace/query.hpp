// SPDX-License-Identifier: Apache-2.0
//
// Conjunctive triple queries:
//
//   Answer($img) :- instanceOf($img, Vacation), hasActor($img, $a),
//                   hasAction($a, smiles).
//
// Queries compile to a single SELECT DISTINCT over the split property
// tables. eval_reference is a brute-force evaluator over an in-memory graph,
// kept independent of the SQL path for differential testing.
#pragma once

#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "imagespace/ontology.hpp"
#include "imagespace/sqlite.hpp"
#include "imagespace/store.hpp"

namespace imagespace {

struct Var {
  std::string name;  // without the '$'
  bool operator==(const Var&) const = default;
};

/// Bare identifier, e.g. `Vacation` or `smiles`.
struct Const {
  std::string text;
  bool operator==(const Const&) const = default;
};

/// Double-quoted string.
struct Lit {
  std::string text;
  bool operator==(const Lit&) const = default;
};

using Term = std::variant<Var, Const, Lit>;

struct InstanceOfAtom {
  Term subject;
  Identifier class_id;
  bool operator==(const InstanceOfAtom&) const = default;
};

struct PropAtom {
  Identifier property;
  Term subject;
  Term value;
  bool operator==(const PropAtom&) const = default;
};

using Atom = std::variant<InstanceOfAtom, PropAtom>;

struct TripleQuery {
  std::string head_name = "Answer";
  std::vector<std::string> head_vars;
  std::vector<Atom> atoms;

  bool operator==(const TripleQuery&) const = default;
};

/// Throws Error(SyntaxError) with the offending position, or
/// Error(UnsafeQuery) when a head variable occurs in no atom.
TripleQuery parse_query(std::string_view text);

std::string to_string(const TripleQuery& q);

struct CompileOptions {
  /// Expand instanceOf to the subclass closure of the named class.
  bool closure = true;
  /// Unknown properties are errors instead of empty results.
  bool strict = false;
};

struct SqlPlan {
  std::string sql;
  std::vector<std::string> params;
  /// Output column alias per head variable, in head order.
  std::vector<std::pair<std::string, std::string>> projection;
  /// Number of table aliases in the FROM clause.
  std::size_t alias_count = 0;
  /// Some atom can never match; `sql` is empty and execution returns no rows.
  bool provably_empty = false;
};

/// Throws Error(UnknownClass), Error(UnknownProperty) in strict mode.
SqlPlan compile_query(const TripleQuery& q, const Catalog& catalog, const OntologyDoc& doc,
                      const CompileOptions& options = {});

struct Bindings {
  std::vector<std::string> vars;
  std::set<std::vector<std::string>> rows;

  bool operator==(const Bindings&) const = default;
};

Bindings run_plan(sql::Database& db, const SqlPlan& plan);

/// Compiles against the stored ontology and runs the plan.
Bindings execute_query(Store& store, std::string_view ontology_id, const TripleQuery& q,
                       const CompileOptions& options = {});

/// Enumerates substitutions over the active domain (instance identifiers and
/// value texts), checking each atom once its variables are bound.
Bindings eval_reference(const InstanceGraph& graph, const OntologyDoc& doc, const TripleQuery& q,
                        bool closure);

}  // namespace imagespace
