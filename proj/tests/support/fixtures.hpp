// SPDX-License-Identifier: Apache-2.0
//
// Shared fixture loading and the reference annotation used as an oracle.
#pragma once

#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "imagespace/ontology.hpp"
#include "imagespace/sqlite.hpp"
#include "imagespace/store.hpp"

namespace imagespace::testing {

std::string fixture_path(const std::string& name);
std::string read_file(const std::string& path);
std::string read_fixture(const std::string& name);

OntologyDoc family_album();
InstanceGraph kathleen_kevin(const OntologyDoc& doc);

inline constexpr const char* kExampleImage = "http://www.cs.wayne.edu/example.jpg";

using Row2 = std::pair<std::string, std::string>;
using Row3 = std::tuple<std::string, std::string, std::string>;

/// Instance table of the reference annotation (instanceID, classID).
std::set<Row2> reference_instance_rows();
/// InstanceRelationship rows of the reference annotation (subject, property, value).
std::set<Row3> reference_split_rows();

/// In-memory database holding the fixture ontology and, optionally, the
/// Kathleen/Kevin annotation.
struct FixtureDb {
  explicit FixtureDb(bool annotated = true);
  sql::Database db;
  std::unique_ptr<Store> store;
};

/// Instance rows of a database.
std::set<Row2> instance_rows(sql::Database& db);
/// Rows of every split property table, labelled with the property.
std::set<Row3> split_rows(sql::Database& db, const Catalog& catalog);

/// Runs the five staged statements of the Kathleen/Kevin search as temporary
/// tables and returns the final subjects. `statements` receives the
/// intermediate result sets in order.
std::set<std::string> run_staged_sql(sql::Database& db,
                                     std::vector<std::set<std::string>>* statements = nullptr);

}  // namespace imagespace::testing
