// SPDX-License-Identifier: Apache-2.0
#include "support/fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "imagespace/daml_io.hpp"
#include "imagespace/json_codec.hpp"

namespace imagespace::testing {

std::string fixture_path(const std::string& name) { return std::string(IMAGESPACE_FIXTURE_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_fixture(const std::string& name) { return read_file(fixture_path(name)); }

OntologyDoc family_album() { return parse_ontology(read_fixture("family_album.daml"), true).doc; }

InstanceGraph kathleen_kevin(const OntologyDoc& doc) {
  return json::annotations_from_json(nlohmann::json::parse(read_fixture("kathleen_kevin.json")), doc);
}

std::set<Row2> reference_instance_rows() {
  return {
      {"Kathleen", "Person"},
      {"Kevin", "Person"},
      {"http://www.cs.wayne.edu/example.jpg", "Vacation"},
      {"Kathleen-actor1", "Actor"},
      {"Kevin-actor1", "Actor"},
  };
}

std::set<Row3> reference_split_rows() {
  return {
      {"http://www.cs.wayne.edu/example.jpg", "hasActor", "Kathleen-actor1"},
      {"http://www.cs.wayne.edu/example.jpg", "hasActor", "Kevin-actor1"},
      {"Kathleen-actor1", "hugs", "Kevin-actor1"},
      {"Kathleen-actor1", "hasAction", "smiles"},
      {"Kevin-actor1", "hasAction", "cries"},
      {"Kathleen", "hasName", "Kathleen"},
      {"Kevin", "hasName", "Kevin"},
      {"Kathleen-actor1", "isSnapshotOf", "Kathleen"},
      {"Kevin-actor1", "isSnapshotOf", "Kevin"},
  };
}

FixtureDb::FixtureDb(bool annotated) : db(":memory:") {
  store = std::make_unique<Store>(db);
  store->init_schema();
  const OntologyDoc doc = family_album();
  store->save_ontology(doc);
  if (annotated) store->save_instances(doc.id, kathleen_kevin(doc));
}

std::set<Row2> instance_rows(sql::Database& db) {
  std::set<Row2> out;
  auto st = db.prepare("SELECT instanceID, classID FROM Instance");
  while (st.step()) out.emplace(st.column_text(0), st.column_text(1));
  return out;
}

std::set<Row3> split_rows(sql::Database& db, const Catalog& catalog) {
  std::set<Row3> out;
  for (const auto& [pid, table] : catalog.entries()) {
    auto st = db.prepare("SELECT subject, value FROM " + sql::quote_identifier(table));
    while (st.step()) out.emplace(st.column_text(0), pid, st.column_text(1));
  }
  return out;
}

std::set<std::string> run_staged_sql(sql::Database& db, std::vector<std::set<std::string>>* statements) {
  // The staged statements verbatim; the only repair is the comma missing
  // after "Hugs" in the final FROM list.
  const char* staged[][2] = {
      {"KathleenActor",
       "SELECT isSnapshotOf.subject FROM isSnapshotOf, hasName "
       "WHERE isSnapshotOf.value = hasName.subject AND hasName.value = 'Kathleen'"},
      {"KevinActor",
       "SELECT isSnapshotOf.subject FROM isSnapshotOf, hasName "
       "WHERE isSnapshotOf.value = hasName.subject AND hasName.value = 'Kevin'"},
      {"SmilingKathleenActor",
       "SELECT hasAction.subject FROM KathleenActor, hasAction "
       "WHERE KathleenActor.subject = hasAction.subject AND hasAction.value = 'smiles'"},
      {"CryingKevinActor",
       "SELECT hasAction.subject FROM KevinActor, hasAction "
       "WHERE KevinActor.subject = hasAction.subject AND hasAction.value = 'cries'"},
  };
  const char* final_select =
      "SELECT H1.subject FROM hasActor H1, hasActor H2, Hugs, SmilingKathleenActor, CryingKevinActor "
      "WHERE H1.subject = H2.subject AND H1.value = SmilingKathleenActor.subject AND "
      "H2.value = CryingKevinActor.subject AND Hugs.subject = SmilingKathleenActor.subject "
      "AND Hugs.value = CryingKevinActor.subject";

  auto collect = [&](const std::string& sql) {
    std::set<std::string> rows;
    auto st = db.prepare(sql);
    while (st.step()) rows.insert(st.column_text(0));
    return rows;
  };
  for (const auto& [name, select] : staged) {
    db.exec(std::string("DROP TABLE IF EXISTS temp.") + name);
    db.exec(std::string("CREATE TEMP TABLE ") + name + " AS " + select);
    if (statements) statements->push_back(collect(std::string("SELECT subject FROM temp.") + name));
  }
  auto result = collect(final_select);
  if (statements) statements->push_back(result);
  return result;
}

}  // namespace imagespace::testing
