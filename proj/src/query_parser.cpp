// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <set>

#include "imagespace/error.hpp"
#include "imagespace/query.hpp"

namespace imagespace {
namespace {

bool is_token_char(char ch) {
  return !std::isspace(static_cast<unsigned char>(ch)) && ch != ',' && ch != '(' && ch != ')' && ch != '"' &&
         ch != '$';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  TripleQuery parse() {
    TripleQuery q;
    q.head_name = name("query head");
    expect('(');
    skip_space();
    if (peek() != ')') {
      do {
        skip_space();
        if (peek() != '$') fail("head arguments must be variables");
        q.head_vars.push_back(std::get<Var>(term()).name);
        skip_space();
      } while (accept(','));
    }
    expect(')');
    skip_space();
    if (text_.substr(pos_, 2) != ":-") fail("expected ':-'");
    pos_ += 2;
    do {
      q.atoms.push_back(atom());
      skip_space();
    } while (accept(','));
    skip_space();
    accept('.');
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");

    std::set<std::string> body_vars;
    auto note = [&](const Term& t) {
      if (const auto* v = std::get_if<Var>(&t)) body_vars.insert(v->name);
    };
    for (const auto& a : q.atoms) {
      if (const auto* io = std::get_if<InstanceOfAtom>(&a)) {
        note(io->subject);
      } else {
        const auto& pa = std::get<PropAtom>(a);
        note(pa.subject);
        note(pa.value);
      }
    }
    for (const auto& v : q.head_vars) {
      if (!body_vars.contains(v)) throw Error(ErrorCode::UnsafeQuery, "head variable $" + v + " occurs in no atom");
    }
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::SyntaxError, "at offset " + std::to_string(pos_) + ": " + what);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip_space();
    if (peek() != ch) return false;
    ++pos_;
    return true;
  }

  void expect(char ch) {
    if (!accept(ch)) fail(std::string("expected '") + ch + "'");
  }

  std::string name(const char* what) {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_token_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail(std::string("expected ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  Term term() {
    skip_space();
    if (peek() == '$') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      if (pos_ == start) fail("expected a variable name after '$'");
      return Var{std::string(text_.substr(start, pos_ - start))};
    }
    if (peek() == '"') {
      ++pos_;
      std::string out;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated string");
        char ch = text_[pos_++];
        if (ch == '"') break;
        if (ch == '\\') {
          if (pos_ >= text_.size()) fail("unterminated string");
          ch = text_[pos_++];
        }
        out += ch;
      }
      return Lit{std::move(out)};
    }
    return Const{name("a term")};
  }

  Atom atom() {
    const std::string predicate = name("an atom");
    expect('(');
    Term subject = term();
    expect(',');
    if (predicate == "instanceOf") {
      Term cls = term();
      const auto* c = std::get_if<Const>(&cls);
      if (!c) fail("instanceOf needs a class name");
      expect(')');
      return InstanceOfAtom{std::move(subject), c->text};
    }
    Term value = term();
    expect(')');
    return PropAtom{predicate, std::move(subject), std::move(value)};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string term_text(const Term& t) {
  if (const auto* v = std::get_if<Var>(&t)) return "$" + v->name;
  if (const auto* c = std::get_if<Const>(&t)) return c->text;
  std::string out = "\"";
  for (char ch : std::get<Lit>(t).text) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

TripleQuery parse_query(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const TripleQuery& q) {
  std::string out = q.head_name + "(";
  for (std::size_t i = 0; i < q.head_vars.size(); ++i) out += (i ? ", $" : "$") + q.head_vars[i];
  out += ") :- ";
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    if (i) out += ", ";
    if (const auto* io = std::get_if<InstanceOfAtom>(&q.atoms[i])) {
      out += "instanceOf(" + term_text(io->subject) + ", " + io->class_id + ")";
    } else {
      const auto& pa = std::get<PropAtom>(q.atoms[i]);
      out += pa.property + "(" + term_text(pa.subject) + ", " + term_text(pa.value) + ")";
    }
  }
  return out + ".";
}

}  // namespace imagespace
