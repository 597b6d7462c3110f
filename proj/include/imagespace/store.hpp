// SPDX-License-Identifier: Apache-2.0
//
// Relational persistence of ontologies and annotations. Assertions live in
// one (subject, value) table per property; PropertyTable maps property
// identifiers to those physical tables.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imagespace/ontology.hpp"
#include "imagespace/sqlite.hpp"

namespace imagespace {

/// The base tables, in creation order.
const std::vector<std::string>& base_table_names();
inline constexpr std::string_view kCatalogTable = "PropertyTable";

/// propertyID <-> physical table name. Table names compare
/// case-insensitively, matching SQL identifier semantics.
class Catalog {
 public:
  std::optional<std::string> table_for(std::string_view property_id) const;
  std::optional<Identifier> property_for(std::string_view table_name) const;
  bool table_taken(std::string_view table_name) const;

  void add(const Identifier& property_id, const std::string& table_name);
  const std::map<Identifier, std::string>& entries() const { return tables_; }

 private:
  std::map<Identifier, std::string> tables_;
  std::map<std::string, Identifier> properties_;  // lower-cased table name
};

/// Physical table for a property, registering it when new. The local name
/// (after the last '#' or '/') is reduced to [A-Za-z0-9_]; a "p_" prefix is
/// added for empty names, names starting with a digit and reserved names;
/// a clash with a different property appends "_" and 8 hex digits of the
/// FNV-1a hash of the full identifier.
std::string property_table_name(Catalog& catalog, std::string_view property_id);

/// FNV-1a, 32 bit.
std::uint32_t fnv1a32(std::string_view text);

struct OntologySummary {
  Identifier id;
  std::string version_info;
  std::string comment;
};

class Store {
 public:
  explicit Store(sql::Database& db);

  /// Creates the base tables and the catalog. With `force`, drops any
  /// existing schema first. Throws Error(AlreadyInitialized).
  void init_schema(bool force = false);
  bool initialized();

  /// Throws Error(InconsistentDoc) or Error(ConstraintViolation).
  Identifier save_ontology(const OntologyDoc& doc);
  /// Throws Error(UnknownOntology).
  OntologyDoc load_ontology(std::string_view ontology_id);
  /// Removes the ontology with its classes, properties, restrictions and
  /// instances. Throws Error(UnknownOntology).
  void delete_ontology(std::string_view ontology_id);
  /// delete + save in one transaction.
  void replace_ontology(const OntologyDoc& doc);
  std::vector<OntologySummary> list_ontologies();
  bool has_ontology(std::string_view ontology_id);

  /// Validates every instance against the stored ontology and writes them
  /// all, or nothing. Throws Error(ValidationFailed) carrying the
  /// violations, Error(ConstraintViolation), Error(UnknownOntology).
  void save_instances(std::string_view ontology_id, const InstanceGraph& graph);
  /// Instances whose class belongs to the ontology.
  InstanceGraph load_instances(std::string_view ontology_id);

  const Catalog& catalog() const { return catalog_; }
  void reload_catalog();

  sql::Database& database() { return db_; }

 private:
  void write_ontology(const OntologyDoc& doc);
  void write_instances(const std::map<Identifier, InstanceDef>& instances);
  void erase_ontology(std::string_view ontology_id);
  std::string ensure_property_table(const Identifier& property_id);

  sql::Database& db_;
  Catalog catalog_;
};

}  // namespace imagespace
