// SPDX-License-Identifier: Apache-2.0
#include "imagespace/store.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <tuple>

#include "imagespace/consistency.hpp"
#include "imagespace/error.hpp"
#include "schema_sql.hpp"

namespace imagespace {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

// Restriction identifiers are blank nodes and only unique per document, so
// rows carry the owning ontology as a suffix.
std::string scoped(const Identifier& id, std::string_view ontology_id) {
  if (!is_restriction_id(id)) return id;
  return id + "@" + std::string(ontology_id);
}

Identifier unscoped(const std::string& stored, std::string_view ontology_id) {
  const std::string suffix = "@" + std::string(ontology_id);
  if (is_restriction_id(stored) && stored.size() > suffix.size() && stored.ends_with(suffix)) {
    return stored.substr(0, stored.size() - suffix.size());
  }
  return stored;
}

struct RelationTable {
  ClassRelation relation;
  const char* table;
  const char* other_column;
};

constexpr RelationTable kClassRelationTables[] = {
    {ClassRelation::SubClassOf, "SubClassOf", "parentClassID"},
    {ClassRelation::DisjointWith, "DisjointWith", "otherClassID"},
    {ClassRelation::SameClassAs, "SameClassAs", "otherClassID"},
    {ClassRelation::ComplementOf, "ComplementOf", "otherClassID"},
    {ClassRelation::UnionOf, "UnionOf", "otherClassID"},
    {ClassRelation::IntersectionOf, "IntersectionOf", "otherClassID"},
    {ClassRelation::DisjointUnionOf, "DisjointUnionOf", "otherClassID"},
};

struct PropertyRelationTable {
  std::set<Identifier> PropertyDef::*member;
  const char* table;
  const char* other_column;
};

const PropertyRelationTable kPropertyRelationTables[] = {
    {&PropertyDef::sub_property_of, "SubPropertyOf", "parentPropertyID"},
    {&PropertyDef::domain, "PropertyDomain", "classID"},
    {&PropertyDef::range, "PropertyRange", "classID"},
    {&PropertyDef::same_property_as, "SamePropertyAs", "otherPropertyID"},
    {&PropertyDef::inverse_of, "InverseOf", "otherPropertyID"},
};

std::string property_type(const PropertyDef& p) {
  std::string t = p.kind == PropertyKind::Datatype ? "DatatypeProperty" : "ObjectProperty";
  if (p.transitive) t += ";TransitiveProperty";
  if (p.unique) t += ";UniqueProperty";
  return t;
}

void apply_property_type(PropertyDef& p, std::string_view type) {
  std::size_t start = 0;
  while (start <= type.size()) {
    auto end = type.find(';', start);
    if (end == std::string_view::npos) end = type.size();
    const auto part = type.substr(start, end - start);
    if (part == "DatatypeProperty") p.kind = PropertyKind::Datatype;
    if (part == "ObjectProperty") p.kind = PropertyKind::Object;
    if (part == "TransitiveProperty") p.transitive = true;
    if (part == "UniqueProperty") p.unique = true;
    start = end + 1;
  }
}

std::optional<Count> to_count(std::optional<std::int64_t> v) {
  if (!v) return std::nullopt;
  return static_cast<Count>(*v);
}

std::optional<std::int64_t> from_count(std::optional<Count> v) {
  if (!v) return std::nullopt;
  return static_cast<std::int64_t>(*v);
}

// Literal typing is not stored: it follows the property's first datatype
// range entry, and object properties hold instance references.
Value typed_value(const PropertyDef* p, const std::string& text) {
  if (p && p->kind == PropertyKind::Object) return InstanceRef{text};
  Literal lit{text, Datatype::String};
  if (p) {
    for (const auto& r : p->range) {
      if (auto dt = datatype_from_name(r)) {
        lit.datatype = *dt;
        break;
      }
    }
  }
  return lit;
}

void require_storable(const OntologyDoc& doc) {
  if (!is_valid_identifier(doc.id)) throw Error(ErrorCode::InvalidArgument, "invalid ontology identifier");
  if (auto violations = check_ontology(doc); !violations.empty()) {
    const std::string message = format_violation(violations.front());
    throw Error(ErrorCode::InconsistentDoc, message, std::move(violations));
  }
  std::map<Identifier, int> anchors;
  for (const auto& [cid, cls] : doc.classes) {
    for (ClassRelation rel : kAllClassRelations) {
      for (const auto& m : members(cls, rel)) {
        if (doc.restrictions.contains(m)) ++anchors[m];
      }
    }
  }
  for (const auto& [rid, r] : doc.restrictions) {
    if (anchors[rid] != 1) {
      throw Error(ErrorCode::InconsistentDoc, "restriction " + rid + " must have exactly one anchor");
    }
  }
}

}  // namespace

const std::vector<std::string>& base_table_names() {
  static const std::vector<std::string> names = {
      "Ontology",       "Import",          "Class",          "SubClassOf",     "DisjointWith",
      "DisjointUnionOf", "UnionOf",        "SameClassAs",    "IntersectionOf", "ComplementOf",
      "OneOf",          "Property",        "SubPropertyOf",  "PropertyDomain", "PropertyRange",
      "SamePropertyAs", "InverseOf",       "Restriction",    "HasClass",       "HasValue",
      "HasClassQ",      "Instance",        "DifferentIndividualFrom", "SameIndividualAs",
  };
  return names;
}

std::optional<std::string> Catalog::table_for(std::string_view property_id) const {
  auto it = tables_.find(std::string(property_id));
  if (it == tables_.end()) return std::nullopt;
  return it->second;
}

std::optional<Identifier> Catalog::property_for(std::string_view table_name) const {
  auto it = properties_.find(lower(table_name));
  if (it == properties_.end()) return std::nullopt;
  return it->second;
}

bool Catalog::table_taken(std::string_view table_name) const { return properties_.contains(lower(table_name)); }

void Catalog::add(const Identifier& property_id, const std::string& table_name) {
  tables_[property_id] = table_name;
  properties_[lower(table_name)] = property_id;
}

std::uint32_t fnv1a32(std::string_view text) {
  std::uint32_t h = 2166136261u;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 16777619u;
  }
  return h;
}

std::string property_table_name(Catalog& catalog, std::string_view property_id) {
  if (auto existing = catalog.table_for(property_id)) return *existing;

  std::string_view local = property_id;
  if (auto pos = local.find_last_of("#/"); pos != std::string_view::npos) local = local.substr(pos + 1);
  std::string name;
  for (char ch : local) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') name += ch;
  }

  const std::string low = lower(name);
  bool reserved = low == lower(kCatalogTable) || low.starts_with("sqlite_");
  for (const auto& base : base_table_names()) reserved = reserved || low == lower(base);
  if (name.empty() || std::isdigit(static_cast<unsigned char>(name.front())) || reserved) name = "p_" + name;

  if (catalog.table_taken(name)) {
    char hash[16];
    std::snprintf(hash, sizeof hash, "_%08x", fnv1a32(property_id));
    const std::string hashed = name + hash;
    name = hashed;
    for (int n = 2; catalog.table_taken(name); ++n) name = hashed + "_" + std::to_string(n);
  }
  catalog.add(Identifier(property_id), name);
  return name;
}

Store::Store(sql::Database& db) : db_(db) {
  if (initialized()) reload_catalog();
}

bool Store::initialized() { return db_.table_exists("Ontology") && db_.table_exists(kCatalogTable); }

void Store::init_schema(bool force) {
  if (initialized() && !force) {
    throw Error(ErrorCode::AlreadyInitialized, "database already holds an ontology store; use force to reset it");
  }
  sql::Transaction tx(db_);
  if (force) {
    std::vector<std::string> tables;
    auto st = db_.prepare("SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%'");
    while (st.step()) tables.push_back(st.column_text(0));
    for (const auto& t : tables) db_.exec("DROP TABLE " + sql::quote_identifier(t));
  }
  db_.exec(detail::kSchemaSql);
  tx.commit();
  catalog_ = Catalog{};
}

void Store::reload_catalog() {
  catalog_ = Catalog{};
  auto st = db_.prepare("SELECT propertyID, tableName FROM PropertyTable");
  while (st.step()) catalog_.add(st.column_text(0), st.column_text(1));
}

bool Store::has_ontology(std::string_view ontology_id) {
  auto st = db_.prepare("SELECT 1 FROM Ontology WHERE OntologyID = ?");
  st.bind(1, ontology_id);
  return st.step();
}

std::vector<OntologySummary> Store::list_ontologies() {
  std::vector<OntologySummary> out;
  auto st = db_.prepare("SELECT OntologyID, versionInfo, comment FROM Ontology ORDER BY OntologyID");
  while (st.step()) out.push_back({st.column_text(0), st.column_text(1), st.column_text(2)});
  return out;
}

std::string Store::ensure_property_table(const Identifier& property_id) {
  if (auto existing = catalog_.table_for(property_id)) return *existing;
  const std::string name = property_table_name(catalog_, property_id);
  db_.exec("CREATE TABLE IF NOT EXISTS " + sql::quote_identifier(name) +
           " (subject TEXT NOT NULL, value TEXT NOT NULL, PRIMARY KEY (subject, value))");
  auto st = db_.prepare("INSERT INTO PropertyTable (propertyID, tableName) VALUES (?, ?)");
  st.bind(1, property_id).bind(2, name);
  st.run();
  return name;
}

Identifier Store::save_ontology(const OntologyDoc& doc) {
  require_storable(doc);
  if (has_ontology(doc.id)) throw Error(ErrorCode::ConstraintViolation, "ontology " + doc.id + " already exists");
  try {
    sql::Transaction tx(db_);
    write_ontology(doc);
    tx.commit();
  } catch (...) {
    reload_catalog();
    throw;
  }
  return doc.id;
}

void Store::replace_ontology(const OntologyDoc& doc) {
  require_storable(doc);
  if (!has_ontology(doc.id)) throw Error(ErrorCode::UnknownOntology, "unknown ontology " + doc.id);
  try {
    sql::Transaction tx(db_);
    erase_ontology(doc.id);
    write_ontology(doc);
    tx.commit();
  } catch (...) {
    reload_catalog();
    throw;
  }
  reload_catalog();
}

void Store::delete_ontology(std::string_view ontology_id) {
  if (!has_ontology(ontology_id)) throw Error(ErrorCode::UnknownOntology, "unknown ontology " + std::string(ontology_id));
  try {
    sql::Transaction tx(db_);
    erase_ontology(ontology_id);
    tx.commit();
  } catch (...) {
    reload_catalog();
    throw;
  }
  reload_catalog();
}

void Store::write_ontology(const OntologyDoc& doc) {
  const std::string& oid = doc.id;
  {
    auto st = db_.prepare("INSERT INTO Ontology (OntologyID, versionInfo, comment) VALUES (?, ?, ?)");
    st.bind(1, oid).bind(2, doc.version_info).bind(3, doc.comment);
    st.run();
  }
  {
    auto st = db_.prepare("INSERT INTO Import (OntologyID, importedOntologyID) VALUES (?, ?)");
    for (const auto& imp : doc.imports) {
      st.reset();
      st.bind(1, oid).bind(2, imp);
      st.run();
    }
  }

  auto insert_class = db_.prepare("INSERT INTO Class (classID, ontologyID, type, label, comment) VALUES (?, ?, ?, ?, ?)");
  for (const auto& [cid, cls] : doc.classes) {
    insert_class.reset();
    insert_class.bind(1, cid).bind(2, oid).bind(3, std::string_view("class")).bind(4, cls.label).bind(5, cls.comment);
    insert_class.run();
  }

  auto insert_restriction =
      db_.prepare("INSERT INTO Restriction (restrictionID, onProp, toClass, minC, maxC, C) VALUES (?, ?, ?, ?, ?, ?)");
  auto insert_has_class = db_.prepare("INSERT INTO HasClass (restrictionID, classID) VALUES (?, ?)");
  auto insert_has_value = db_.prepare("INSERT INTO HasValue (restrictionID, value) VALUES (?, ?)");
  auto insert_has_class_q =
      db_.prepare("INSERT INTO HasClassQ (restrictionID, classID, minC, maxC, C) VALUES (?, ?, ?, ?, ?)");
  for (const auto& [rid, r] : doc.restrictions) {
    const std::string sid = scoped(rid, oid);
    insert_class.reset();
    insert_class.bind(1, sid).bind(2, oid).bind(3, std::string_view("restriction")).bind(4, "").bind(5, "");
    insert_class.run();

    insert_restriction.reset();
    insert_restriction.bind(1, sid).bind(2, r.on_property);
    if (r.to_class) {
      insert_restriction.bind(3, *r.to_class);
    } else {
      insert_restriction.bind_null(3);
    }
    insert_restriction.bind(4, from_count(r.min_c)).bind(5, from_count(r.max_c)).bind(6, from_count(r.c));
    insert_restriction.run();

    if (r.has_class) {
      insert_has_class.reset();
      insert_has_class.bind(1, sid).bind(2, *r.has_class);
      insert_has_class.run();
    }
    if (r.has_value) {
      insert_has_value.reset();
      insert_has_value.bind(1, sid).bind(2, value_text(*r.has_value));
      insert_has_value.run();
    }
    if (r.qualifier) {
      insert_has_class_q.reset();
      insert_has_class_q.bind(1, sid).bind(2, r.qualifier->has_class_q);
      insert_has_class_q.bind(3, from_count(r.qualifier->min_cq))
          .bind(4, from_count(r.qualifier->max_cq))
          .bind(5, from_count(r.qualifier->cq));
      insert_has_class_q.run();
    }
  }

  for (const auto& rt : kClassRelationTables) {
    auto st = db_.prepare(std::string("INSERT INTO ") + rt.table + " (classID, " + rt.other_column + ") VALUES (?, ?)");
    for (const auto& [cid, cls] : doc.classes) {
      for (const auto& m : members(cls, rt.relation)) {
        st.reset();
        st.bind(1, cid).bind(2, scoped(m, oid));
        st.run();
      }
    }
  }
  {
    auto st = db_.prepare("INSERT INTO OneOf (classID, instanceID) VALUES (?, ?)");
    for (const auto& [cid, cls] : doc.classes) {
      for (const auto& m : cls.one_of) {
        st.reset();
        st.bind(1, cid).bind(2, m);
        st.run();
      }
    }
  }

  auto insert_property = db_.prepare("INSERT INTO Property (propertyID, ontologyID, type, comment) VALUES (?, ?, ?, ?)");
  for (const auto& [pid, p] : doc.properties) {
    insert_property.reset();
    insert_property.bind(1, pid).bind(2, oid).bind(3, property_type(p)).bind(4, p.comment);
    insert_property.run();
    ensure_property_table(pid);
  }
  for (const auto& rt : kPropertyRelationTables) {
    auto st = db_.prepare(std::string("INSERT INTO ") + rt.table + " (propertyID, " + rt.other_column + ") VALUES (?, ?)");
    for (const auto& [pid, p] : doc.properties) {
      for (const auto& m : p.*(rt.member)) {
        st.reset();
        st.bind(1, pid).bind(2, m);
        st.run();
      }
    }
  }

  write_instances(doc.instances);
}

void Store::write_instances(const std::map<Identifier, InstanceDef>& instances) {
  // One sequence across all split tables keeps assertion order on reload.
  std::int64_t seq = 0;
  for (const auto& [pid, table] : catalog_.entries()) {
    auto st = db_.prepare("SELECT COALESCE(MAX(rowid), 0) FROM " + sql::quote_identifier(table));
    if (st.step()) seq = std::max(seq, st.column_int(0));
  }

  auto insert_instance = db_.prepare("INSERT INTO Instance (instanceID, classID) VALUES (?, ?)");
  auto insert_different =
      db_.prepare("INSERT INTO DifferentIndividualFrom (instanceID, otherInstanceID) VALUES (?, ?)");
  auto insert_same = db_.prepare("INSERT INTO SameIndividualAs (instanceID, otherInstanceID) VALUES (?, ?)");
  std::map<std::string, sql::Statement> inserts;

  for (const auto& [iid, inst] : instances) {
    insert_instance.reset();
    insert_instance.bind(1, iid).bind(2, inst.class_id);
    insert_instance.run();
    for (const auto& a : inst.assertions) {
      const std::string table = ensure_property_table(a.property);
      auto it = inserts.find(table);
      if (it == inserts.end()) {
        it = inserts
                 .emplace(table, db_.prepare("INSERT OR IGNORE INTO " + sql::quote_identifier(table) +
                                             " (rowid, subject, value) VALUES (?, ?, ?)"))
                 .first;
      }
      it->second.reset();
      it->second.bind(1, ++seq).bind(2, iid).bind(3, value_text(a.value));
      it->second.run();
    }
    for (const auto& o : inst.different_from) {
      insert_different.reset();
      insert_different.bind(1, iid).bind(2, o);
      insert_different.run();
    }
    for (const auto& o : inst.same_as) {
      insert_same.reset();
      insert_same.bind(1, iid).bind(2, o);
      insert_same.run();
    }
  }
}

void Store::erase_ontology(std::string_view ontology_id) {
  const std::string instances_of =
      "SELECT i.instanceID FROM Instance i JOIN Class c ON c.classID = i.classID WHERE c.ontologyID = ?1";
  auto run = [&](const std::string& sql) {
    auto st = db_.prepare(sql);
    st.bind(1, ontology_id);
    st.run();
  };

  std::vector<std::pair<Identifier, std::string>> owned_tables;
  {
    auto st = db_.prepare(
        "SELECT t.propertyID, t.tableName FROM PropertyTable t JOIN Property p ON p.propertyID = t.propertyID "
        "WHERE p.ontologyID = ?");
    st.bind(1, ontology_id);
    while (st.step()) owned_tables.emplace_back(st.column_text(0), st.column_text(1));
  }
  for (const auto& [pid, table] : catalog_.entries()) {
    run("DELETE FROM " + sql::quote_identifier(table) + " WHERE subject IN (" + instances_of + ")");
  }
  run("DELETE FROM DifferentIndividualFrom WHERE instanceID IN (" + instances_of + ")");
  run("DELETE FROM SameIndividualAs WHERE instanceID IN (" + instances_of + ")");
  run("DELETE FROM Instance WHERE classID IN (SELECT classID FROM Class WHERE ontologyID = ?1)");

  const std::string restrictions_of = "SELECT classID FROM Class WHERE ontologyID = ?1 AND type = 'restriction'";
  for (const char* t : {"HasClass", "HasValue", "HasClassQ", "Restriction"}) {
    run(std::string("DELETE FROM ") + t + " WHERE restrictionID IN (" + restrictions_of + ")");
  }
  for (const auto& rt : kClassRelationTables) {
    run(std::string("DELETE FROM ") + rt.table + " WHERE classID IN (SELECT classID FROM Class WHERE ontologyID = ?1)");
  }
  run("DELETE FROM OneOf WHERE classID IN (SELECT classID FROM Class WHERE ontologyID = ?1)");
  for (const auto& rt : kPropertyRelationTables) {
    run(std::string("DELETE FROM ") + rt.table +
        " WHERE propertyID IN (SELECT propertyID FROM Property WHERE ontologyID = ?1)");
  }
  for (const auto& [pid, table] : owned_tables) {
    db_.exec("DROP TABLE IF EXISTS " + sql::quote_identifier(table));
    auto st = db_.prepare("DELETE FROM PropertyTable WHERE propertyID = ?");
    st.bind(1, pid);
    st.run();
  }
  run("DELETE FROM Property WHERE ontologyID = ?1");
  run("DELETE FROM Class WHERE ontologyID = ?1");
  run("DELETE FROM Import WHERE OntologyID = ?1");
  run("DELETE FROM Ontology WHERE OntologyID = ?1");

  // Keep the in-memory catalog in step with the dropped tables so a
  // following write in the same transaction recreates them.
  Catalog remaining;
  for (const auto& [pid, table] : catalog_.entries()) {
    const bool dropped = std::any_of(owned_tables.begin(), owned_tables.end(),
                                     [&](const auto& o) { return o.first == pid; });
    if (!dropped) remaining.add(pid, table);
  }
  catalog_ = std::move(remaining);
}

OntologyDoc Store::load_ontology(std::string_view ontology_id) {
  OntologyDoc doc;
  {
    auto st = db_.prepare("SELECT OntologyID, versionInfo, comment FROM Ontology WHERE OntologyID = ?");
    st.bind(1, ontology_id);
    if (!st.step()) throw Error(ErrorCode::UnknownOntology, "unknown ontology " + std::string(ontology_id));
    doc.id = st.column_text(0);
    doc.version_info = st.column_text(1);
    doc.comment = st.column_text(2);
  }
  const std::string& oid = doc.id;
  auto query = [&](const std::string& sql) {
    auto st = db_.prepare(sql);
    st.bind(1, oid);
    return st;
  };

  {
    auto st = query("SELECT importedOntologyID FROM Import WHERE OntologyID = ?1");
    while (st.step()) doc.imports.insert(st.column_text(0));
  }
  {
    auto st = query("SELECT classID, label, comment FROM Class WHERE ontologyID = ?1 AND type = 'class'");
    while (st.step()) {
      ClassDef c;
      c.id = st.column_text(0);
      c.label = st.column_text(1);
      c.comment = st.column_text(2);
      doc.classes.emplace(c.id, std::move(c));
    }
  }
  {
    auto st = query(
        "SELECT propertyID, type, comment FROM Property WHERE ontologyID = ?1");
    while (st.step()) {
      PropertyDef p;
      p.id = st.column_text(0);
      apply_property_type(p, st.column_text(1));
      p.comment = st.column_text(2);
      doc.properties.emplace(p.id, std::move(p));
    }
  }
  for (const auto& rt : kPropertyRelationTables) {
    auto st = query(std::string("SELECT t.propertyID, t.") + rt.other_column + " FROM " + rt.table +
                    " t JOIN Property p ON p.propertyID = t.propertyID WHERE p.ontologyID = ?1");
    while (st.step()) (doc.properties.at(st.column_text(0)).*(rt.member)).insert(st.column_text(1));
  }

  {
    auto st = query(
        "SELECT r.restrictionID, r.onProp, r.toClass, r.minC, r.maxC, r.C FROM Restriction r "
        "JOIN Class c ON c.classID = r.restrictionID WHERE c.ontologyID = ?1");
    while (st.step()) {
      Restriction r;
      r.id = unscoped(st.column_text(0), oid);
      r.on_property = st.column_text(1);
      if (!st.column_is_null(2)) r.to_class = st.column_text(2);
      r.min_c = to_count(st.column_optional_int(3));
      r.max_c = to_count(st.column_optional_int(4));
      r.c = to_count(st.column_optional_int(5));
      doc.restrictions.emplace(r.id, std::move(r));
    }
  }
  {
    auto st = query(
        "SELECT h.restrictionID, h.classID FROM HasClass h JOIN Class c ON c.classID = h.restrictionID "
        "WHERE c.ontologyID = ?1");
    while (st.step()) doc.restrictions.at(unscoped(st.column_text(0), oid)).has_class = st.column_text(1);
  }
  {
    auto st = query(
        "SELECT h.restrictionID, h.value FROM HasValue h JOIN Class c ON c.classID = h.restrictionID "
        "WHERE c.ontologyID = ?1");
    while (st.step()) {
      Restriction& r = doc.restrictions.at(unscoped(st.column_text(0), oid));
      r.has_value = typed_value(doc.find_property(r.on_property), st.column_text(1));
    }
  }
  {
    auto st = query(
        "SELECT h.restrictionID, h.classID, h.minC, h.maxC, h.C FROM HasClassQ h "
        "JOIN Class c ON c.classID = h.restrictionID WHERE c.ontologyID = ?1");
    while (st.step()) {
      Qualifier q;
      q.has_class_q = st.column_text(1);
      q.min_cq = to_count(st.column_optional_int(2));
      q.max_cq = to_count(st.column_optional_int(3));
      q.cq = to_count(st.column_optional_int(4));
      doc.restrictions.at(unscoped(st.column_text(0), oid)).qualifier = q;
    }
  }

  for (const auto& rt : kClassRelationTables) {
    auto st = query(std::string("SELECT t.classID, t.") + rt.other_column + " FROM " + rt.table +
                    " t JOIN Class c ON c.classID = t.classID WHERE c.ontologyID = ?1 AND c.type = 'class'");
    while (st.step()) {
      members(doc.classes.at(st.column_text(0)), rt.relation).insert(unscoped(st.column_text(1), oid));
    }
  }
  {
    auto st = query(
        "SELECT t.classID, t.instanceID FROM OneOf t JOIN Class c ON c.classID = t.classID "
        "WHERE c.ontologyID = ?1 ORDER BY t.rowid");
    while (st.step()) doc.classes.at(st.column_text(0)).one_of.push_back(st.column_text(1));
  }

  doc.instances = load_instances(oid).instances;
  return doc;
}

InstanceGraph Store::load_instances(std::string_view ontology_id) {
  if (!has_ontology(ontology_id)) throw Error(ErrorCode::UnknownOntology, "unknown ontology " + std::string(ontology_id));
  InstanceGraph graph;
  const std::string instances_of =
      " JOIN Instance i ON i.instanceID = t.{col} JOIN Class c ON c.classID = i.classID WHERE c.ontologyID = ?1";
  auto joined = [&](const std::string& column) {
    std::string s = instances_of;
    s.replace(s.find("{col}"), 5, column);
    return s;
  };
  {
    auto st = db_.prepare(
        "SELECT i.instanceID, i.classID FROM Instance i JOIN Class c ON c.classID = i.classID WHERE c.ontologyID = ?1");
    st.bind(1, ontology_id);
    while (st.step()) {
      InstanceDef inst;
      inst.id = st.column_text(0);
      inst.class_id = st.column_text(1);
      graph.instances.emplace(inst.id, std::move(inst));
    }
  }
  if (graph.instances.empty()) return graph;

  // Property typing may come from any stored ontology.
  std::map<Identifier, std::optional<PropertyDef>> typing;
  auto property = [&](const Identifier& pid) -> const PropertyDef* {
    auto it = typing.find(pid);
    if (it == typing.end()) {
      std::optional<PropertyDef> def;
      auto st = db_.prepare("SELECT type FROM Property WHERE propertyID = ?");
      st.bind(1, pid);
      if (st.step()) {
        def.emplace();
        def->id = pid;
        apply_property_type(*def, st.column_text(0));
        auto rs = db_.prepare("SELECT classID FROM PropertyRange WHERE propertyID = ?");
        rs.bind(1, pid);
        while (rs.step()) def->range.insert(rs.column_text(0));
      }
      it = typing.emplace(pid, std::move(def)).first;
    }
    return it->second ? &*it->second : nullptr;
  };

  std::vector<std::tuple<std::int64_t, Identifier, Identifier, std::string>> rows;
  for (const auto& [pid, table] : catalog_.entries()) {
    auto st = db_.prepare("SELECT t.rowid, t.subject, t.value FROM " + sql::quote_identifier(table) + " t" +
                          joined("subject"));
    st.bind(1, ontology_id);
    while (st.step()) rows.emplace_back(st.column_int(0), st.column_text(1), pid, st.column_text(2));
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [rowid, subject, pid, value] : rows) {
    graph.instances.at(subject).assertions.push_back({pid, typed_value(property(pid), value)});
  }

  for (const auto& [table, member] :
       {std::pair{"DifferentIndividualFrom", &InstanceDef::different_from},
        std::pair{"SameIndividualAs", &InstanceDef::same_as}}) {
    auto st = db_.prepare(std::string("SELECT t.instanceID, t.otherInstanceID FROM ") + table + " t" +
                          joined("instanceID"));
    st.bind(1, ontology_id);
    while (st.step()) (graph.instances.at(st.column_text(0)).*member).insert(st.column_text(1));
  }
  return graph;
}

void Store::save_instances(std::string_view ontology_id, const InstanceGraph& graph) {
  OntologyDoc doc = load_ontology(ontology_id);
  InstanceGraph merged;
  merged.instances = doc.instances;
  for (const auto& [iid, inst] : graph.instances) merged.instances[iid] = inst;
  OntologyDoc schema = doc;
  schema.instances.clear();

  std::vector<Violation> violations;
  for (const auto& [iid, inst] : graph.instances) {
    if (iid != inst.id) throw Error(ErrorCode::InvalidArgument, "instance key " + iid + " differs from its id");
    auto vs = validate_instance(schema, merged, iid);
    violations.insert(violations.end(), vs.begin(), vs.end());
  }
  normalize(violations);
  if (!violations.empty()) {
    const std::string message = format_violation(violations.front());
    throw Error(ErrorCode::ValidationFailed, message, std::move(violations));
  }

  try {
    sql::Transaction tx(db_);
    auto owner = db_.prepare(
        "SELECT c.ontologyID FROM Instance i JOIN Class c ON c.classID = i.classID WHERE i.instanceID = ?");
    for (const auto& [iid, inst] : graph.instances) {
      owner.reset();
      owner.bind(1, iid);
      if (owner.step() && owner.column_text(0) != doc.id) {
        throw Error(ErrorCode::ConstraintViolation, "instance " + iid + " belongs to ontology " + owner.column_text(0));
      }
      owner.reset();
      auto del = [&](const std::string& sql) {
        auto st = db_.prepare(sql);
        st.bind(1, iid);
        st.run();
      };
      // Resubmitting an instance replaces its previous annotation.
      for (const auto& [pid, table] : catalog_.entries()) {
        del("DELETE FROM " + sql::quote_identifier(table) + " WHERE subject = ?1");
      }
      del("DELETE FROM DifferentIndividualFrom WHERE instanceID = ?1");
      del("DELETE FROM SameIndividualAs WHERE instanceID = ?1");
      del("DELETE FROM Instance WHERE instanceID = ?1");
    }
    write_instances(graph.instances);
    tx.commit();
  } catch (...) {
    reload_catalog();
    throw;
  }
}

}  // namespace imagespace
