// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <regex>
#include <string>

#include "imagespace/ontology.hpp"

namespace imagespace {
namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

// YYYY-MM-DD, optionally Thh:mm[:ss[.fff]] and a Z or +hh:mm zone.
bool valid_date_time(const std::string& s) {
  static const std::regex kPattern(
      R"(^(-?\d{4,})-(\d{2})-(\d{2})(?:T(\d{2}):(\d{2})(?::(\d{2})(?:\.\d+)?)?)?(Z|[+-](\d{2}):(\d{2}))?$)");
  std::smatch m;
  if (!std::regex_match(s, m, kPattern)) return false;
  const int year = std::stoi(m[1].str());
  const int month = std::stoi(m[2].str());
  const int day = std::stoi(m[3].str());
  if (month < 1 || month > 12) return false;
  if (day < 1 || day > days_in_month(year, month)) return false;
  if (m[4].matched) {
    if (std::stoi(m[4].str()) > 23 || std::stoi(m[5].str()) > 59) return false;
    if (m[6].matched && std::stoi(m[6].str()) > 60) return false;
  }
  if (m[8].matched) {
    if (std::stoi(m[8].str()) > 14 || std::stoi(m[9].str()) > 59) return false;
  }
  return true;
}

}  // namespace

bool literal_is_valid(const Literal& lit) {
  const std::string& s = lit.lexical;
  switch (lit.datatype) {
    case Datatype::String:
      return true;
    case Datatype::DateTime:
      return valid_date_time(s);
    case Datatype::Integer: {
      static const std::regex kInt(R"(^[+-]?\d+$)");
      return std::regex_match(s, kInt);
    }
    case Datatype::Decimal: {
      static const std::regex kDec(R"(^[+-]?(\d+(\.\d*)?|\.\d+)$)");
      return std::regex_match(s, kDec);
    }
    case Datatype::Boolean:
      return s == "true" || s == "false" || s == "1" || s == "0";
    case Datatype::AnyUri:
      for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch))) return false;
      }
      return true;
  }
  return false;
}

}  // namespace imagespace
