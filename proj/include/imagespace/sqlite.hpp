// SPDX-License-Identifier: Apache-2.0
//
// Minimal RAII layer over the SQLite C API.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

struct sqlite3;
struct sqlite3_stmt;

namespace imagespace::sql {

class Statement;

class Database {
 public:
  /// ":memory:" opens a private in-memory database.
  /// Throws Error(ConnectionFailure).
  explicit Database(const std::string& path = ":memory:");
  ~Database();

  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;
  Database(Database&& other) noexcept;
  Database& operator=(Database&& other) noexcept;

  void exec(std::string_view sql);
  Statement prepare(std::string_view sql);

  bool table_exists(std::string_view name);
  std::int64_t changes() const;

  sqlite3* handle() const { return db_; }

 private:
  sqlite3* db_ = nullptr;
};

class Statement {
 public:
  Statement(Database& db, std::string_view sql);
  ~Statement();

  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  Statement(Statement&& other) noexcept;
  Statement& operator=(Statement&&) = delete;

  // Parameters are 1-based, as in SQLite.
  Statement& bind(int index, std::string_view text);
  Statement& bind(int index, std::int64_t value);
  Statement& bind(int index, std::optional<std::int64_t> value);
  Statement& bind_null(int index);

  /// True while a row is available.
  bool step();
  /// Steps to completion; for INSERT/UPDATE/DELETE/DDL.
  void run();
  void reset();

  int column_count() const;
  std::string column_text(int index) const;
  std::int64_t column_int(int index) const;
  std::optional<std::int64_t> column_optional_int(int index) const;
  bool column_is_null(int index) const;

 private:
  Database* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

/// Rolls back unless commit() was called.
class Transaction {
 public:
  explicit Transaction(Database& db);
  ~Transaction();

  Transaction(const Transaction&) = delete;
  Transaction& operator=(const Transaction&) = delete;

  void commit();

 private:
  Database& db_;
  bool done_ = false;
};

/// Double-quoted SQL identifier.
std::string quote_identifier(std::string_view name);

}  // namespace imagespace::sql
