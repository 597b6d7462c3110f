// SPDX-License-Identifier: Apache-2.0
#include "imagespace/daml_io.hpp"

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <sstream>

#include "imagespace/consistency.hpp"
#include "imagespace/error.hpp"

namespace imagespace {
namespace {

constexpr char kNsSeparator = '\x1f';
constexpr std::string_view kXmlNs = "http://www.w3.org/XML/1998/namespace";
constexpr std::string_view kDefaultOntologyId = "untitled";

struct XmlNode {
  std::string ns;
  std::string local;
  std::vector<std::pair<std::pair<std::string, std::string>, std::string>> attrs;
  std::vector<std::unique_ptr<XmlNode>> children;
  std::string text;
  int line = 0;
  int column = 0;

  bool is(std::string_view nspace, std::string_view name) const { return ns == nspace && local == name; }

  const std::string* attr(std::string_view nspace, std::string_view name) const {
    for (const auto& [key, value] : attrs) {
      if (key.first == nspace && key.second == name) return &value;
    }
    return nullptr;
  }

  std::string qualified() const { return ns.empty() ? local : ns + local; }
};

std::pair<std::string, std::string> split_name(const XML_Char* name) {
  std::string_view s(name);
  auto pos = s.find(kNsSeparator);
  if (pos == std::string_view::npos) return {"", std::string(s)};
  return {std::string(s.substr(0, pos)), std::string(s.substr(pos + 1))};
}

class DomBuilder {
 public:
  std::unique_ptr<XmlNode> parse(std::string_view xml) {
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(
        XML_ParserCreateNS("UTF-8", kNsSeparator), &XML_ParserFree);
    if (!parser) throw Error(ErrorCode::MalformedXml, "cannot create XML parser");
    parser_ = parser.get();
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &DomBuilder::on_start, &DomBuilder::on_end);
    XML_SetCharacterDataHandler(parser_, &DomBuilder::on_text);
    if (XML_Parse(parser_, xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
      std::ostringstream msg;
      msg << "line " << XML_GetCurrentLineNumber(parser_) << ", column " << XML_GetCurrentColumnNumber(parser_)
          << ": " << XML_ErrorString(XML_GetErrorCode(parser_));
      throw Error(ErrorCode::MalformedXml, msg.str());
    }
    if (!root_) throw Error(ErrorCode::MalformedXml, "empty document");
    return std::move(root_);
  }

 private:
  static void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
    auto* self = static_cast<DomBuilder*>(data);
    auto node = std::make_unique<XmlNode>();
    std::tie(node->ns, node->local) = split_name(name);
    for (int i = 0; atts[i]; i += 2) node->attrs.emplace_back(split_name(atts[i]), atts[i + 1]);
    node->line = static_cast<int>(XML_GetCurrentLineNumber(self->parser_));
    node->column = static_cast<int>(XML_GetCurrentColumnNumber(self->parser_));
    XmlNode* raw = node.get();
    if (self->stack_.empty()) {
      self->root_ = std::move(node);
    } else {
      self->stack_.back()->children.push_back(std::move(node));
    }
    self->stack_.push_back(raw);
  }

  static void on_end(void* data, const XML_Char*) { static_cast<DomBuilder*>(data)->stack_.pop_back(); }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<DomBuilder*>(data);
    if (!self->stack_.empty()) self->stack_.back()->text.append(s, static_cast<std::size_t>(len));
  }

  XML_Parser parser_ = nullptr;
  std::unique_ptr<XmlNode> root_;
  std::vector<XmlNode*> stack_;
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

class Reader {
 public:
  explicit Reader(bool strict) : strict_(strict) {}

  ParseReport read(std::string_view xml) {
    auto root = DomBuilder().parse(xml);
    if (!root->is(ns::kRdf, "RDF")) {
      throw Error(ErrorCode::MalformedXml, "root element must be rdf:RDF, found " + root->local);
    }
    if (const auto* base = root->attr(kXmlNs, "base")) base_ = *base;

    std::vector<const XmlNode*> typed;
    for (const auto& child : root->children) {
      const XmlNode& n = *child;
      if (n.is(ns::kDaml, "Ontology")) {
        read_ontology(n);
      } else if (n.is(ns::kDaml, "Class")) {
        read_class(n);
      } else if (n.is(ns::kDaml, "ObjectProperty") || n.is(ns::kDaml, "DatatypeProperty") ||
                 n.is(ns::kDaml, "TransitiveProperty") || n.is(ns::kDaml, "UniqueProperty")) {
        read_property(n);
      } else if (is_vocabulary(n.ns)) {
        unknown(n);
      } else {
        typed.push_back(&n);
      }
    }
    for (const XmlNode* n : typed) read_instance(*n);

    resolve_literals();
    if (report_.doc.id.empty()) report_.doc.id = base_.empty() ? std::string(kDefaultOntologyId) : base_;

    std::vector<Violation> dangling;
    for (auto& v : check_ontology(report_.doc)) {
      if (v.code == ViolationCode::DanglingReference) dangling.push_back(std::move(v));
    }
    if (!dangling.empty()) {
      const std::string message = format_violation(dangling.front());
      throw Error(ErrorCode::DanglingReference, message, std::move(dangling));
    }
    return std::move(report_);
  }

 private:
  static bool is_vocabulary(std::string_view nspace) {
    return nspace == ns::kRdf || nspace == ns::kRdfs || nspace == ns::kDaml;
  }

  static std::string describe(const XmlNode& n) {
    std::string prefix = n.ns == ns::kRdf    ? "rdf:"
                         : n.ns == ns::kRdfs ? "rdfs:"
                         : n.ns == ns::kDaml ? "daml:"
                                             : n.ns;
    return prefix + n.local;
  }

  void unknown(const XmlNode& n) {
    const std::string msg = "unsupported construct " + describe(n);
    if (strict_) {
      throw Error(ErrorCode::UnknownConstruct,
                  msg + " at line " + std::to_string(n.line) + ", column " + std::to_string(n.column));
    }
    report_.warnings.push_back({n.line, n.column, msg});
  }

  [[noreturn]] static void malformed(const XmlNode& n, const std::string& msg) {
    throw Error(ErrorCode::MalformedXml, "line " + std::to_string(n.line) + ": " + msg);
  }

  Identifier localize(std::string_view iri) const {
    if (iri.starts_with('#')) return Identifier(iri.substr(1));
    for (std::string_view xsd : {ns::kXsd, ns::kXsd2001}) {
      if (iri.starts_with(xsd) && is_datatype_name(iri.substr(xsd.size()))) return Identifier(iri.substr(xsd.size()));
    }
    if (!base_.empty() && iri.size() > base_.size() && iri.starts_with(base_) && iri[base_.size()] == '#') {
      return Identifier(iri.substr(base_.size() + 1));
    }
    return Identifier(iri);
  }

  Identifier element_id(const XmlNode& n) const {
    if (n.ns.empty() || (!base_.empty() && n.ns == base_ + "#")) return n.local;
    return localize(n.ns + n.local);
  }

  Identifier checked(const XmlNode& n, Identifier id) const {
    if (!is_valid_identifier(id)) malformed(n, "invalid identifier '" + id + "'");
    return id;
  }

  // rdf:ID or rdf:about
  Identifier subject_id(const XmlNode& n) const {
    if (const auto* id = n.attr(ns::kRdf, "ID")) return checked(n, *id);
    if (const auto* about = n.attr(ns::kRdf, "about")) return checked(n, localize(*about));
    malformed(n, describe(n) + " needs rdf:ID or rdf:about");
  }

  std::optional<Identifier> resource(const XmlNode& n) const {
    if (const auto* r = n.attr(ns::kRdf, "resource")) return checked(n, localize(*r));
    return std::nullopt;
  }

  // rdf:resource, or a nested <daml:Class rdf:about=.../>
  Identifier class_reference(const XmlNode& n) {
    if (auto r = resource(n)) return *r;
    for (const auto& c : n.children) {
      if (c->is(ns::kDaml, "Class")) return read_class(*c);
      unknown(*c);
    }
    malformed(n, describe(n) + " names no class");
  }

  void read_ontology(const XmlNode& n) {
    OntologyDoc& doc = report_.doc;
    if (const auto* about = n.attr(ns::kRdf, "about"); about && !about->empty()) {
      doc.id = checked(n, about->starts_with('#') ? about->substr(1) : *about);
    } else if (const auto* id = n.attr(ns::kRdf, "ID")) {
      doc.id = checked(n, *id);
    }
    for (const auto& c : n.children) {
      if (c->is(ns::kDaml, "versionInfo")) {
        doc.version_info = c->text;
      } else if (c->is(ns::kRdfs, "comment")) {
        doc.comment = c->text;
      } else if (c->is(ns::kDaml, "imports")) {
        auto r = c->attr(ns::kRdf, "resource");
        if (!r) malformed(*c, "daml:imports needs rdf:resource");
        doc.imports.insert(checked(*c, *r));
      } else {
        unknown(*c);
      }
    }
  }

  Identifier read_class(const XmlNode& n) {
    const Identifier id = subject_id(n);
    if (is_restriction_id(id)) malformed(n, "class identifier " + id + " uses the reserved prefix _:r");
    if (is_datatype_name(id)) malformed(n, "class identifier " + id + " is a datatype name");
    report_.doc.classes[id].id = id;

    for (const auto& child : n.children) {
      const XmlNode& c = *child;
      auto& cls = report_.doc.classes[id];
      if (c.is(ns::kRdfs, "label")) {
        cls.label = c.text;
      } else if (c.is(ns::kRdfs, "comment")) {
        cls.comment = c.text;
      } else if (c.is(ns::kDaml, "oneOf")) {
        for (const auto& m : c.children) {
          Identifier member = m->attr(ns::kRdf, "resource") ? *resource(*m) : subject_id(*m);
          auto& list = report_.doc.classes[id].one_of;
          if (std::find(list.begin(), list.end(), member) == list.end()) list.push_back(member);
        }
      } else if (auto rel = relation_of(c)) {
        read_class_expressions(c, id, *rel);
      } else {
        unknown(c);
      }
    }
    return id;
  }

  static std::optional<ClassRelation> relation_of(const XmlNode& n) {
    if (n.is(ns::kRdfs, "subClassOf")) return ClassRelation::SubClassOf;
    if (n.ns != ns::kDaml) return std::nullopt;
    if (n.local == "sameClassAs") return ClassRelation::SameClassAs;
    if (n.local == "disjointWith") return ClassRelation::DisjointWith;
    if (n.local == "complementOf") return ClassRelation::ComplementOf;
    if (n.local == "unionOf") return ClassRelation::UnionOf;
    if (n.local == "intersectionOf") return ClassRelation::IntersectionOf;
    if (n.local == "disjointUnionOf") return ClassRelation::DisjointUnionOf;
    return std::nullopt;
  }

  void read_class_expressions(const XmlNode& n, const Identifier& owner, ClassRelation rel) {
    std::vector<Identifier> found;
    if (auto r = resource(n)) found.push_back(*r);
    for (const auto& c : n.children) {
      if (c->is(ns::kDaml, "Class")) {
        found.push_back(read_class(*c));
      } else if (c->is(ns::kDaml, "Restriction")) {
        found.push_back(read_restriction(*c));
      } else {
        unknown(*c);
      }
    }
    if (found.empty() && n.children.empty()) malformed(n, describe(n) + " names no class");
    auto& set = members(report_.doc.classes[owner], rel);
    set.insert(found.begin(), found.end());
  }

  static std::optional<Count> parse_count(const XmlNode& n, std::string_view text) {
    const std::string t = trim(text);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      malformed(n, "cardinality '" + std::string(text) + "' is not a non-negative integer");
    }
    try {
      const unsigned long v = std::stoul(t);
      if (v > 0xffffffffUL) throw std::out_of_range("count");
      return static_cast<Count>(v);
    } catch (const std::exception&) {
      malformed(n, "cardinality '" + t + "' is out of range");
    }
  }

  Identifier read_restriction(const XmlNode& n) {
    Restriction r;
    r.id = std::string(kRestrictionPrefix) + std::to_string(++restriction_counter_);
    Qualifier q;
    bool qualified = false;

    auto set_count = [&](const XmlNode& at, std::string_view name, std::string_view text) {
      static constexpr std::string_view kCounts[] = {"cardinality",  "minCardinality",  "maxCardinality",
                                                     "cardinalityQ", "minCardinalityQ", "maxCardinalityQ"};
      if (std::find(std::begin(kCounts), std::end(kCounts), name) == std::end(kCounts)) return false;
      auto v = parse_count(at, text);
      if (name == "cardinality") r.c = v;
      else if (name == "minCardinality") r.min_c = v;
      else if (name == "maxCardinality") r.max_c = v;
      else if (name == "cardinalityQ") q.cq = v, qualified = true;
      else if (name == "minCardinalityQ") q.min_cq = v, qualified = true;
      else if (name == "maxCardinalityQ") q.max_cq = v, qualified = true;
      else return false;
      return true;
    };

    for (const auto& [key, value] : n.attrs) {
      if (key.first == ns::kDaml && set_count(n, key.second, value)) continue;
      if (key.first == ns::kRdf) continue;
      XmlNode fake;
      fake.ns = key.first;
      fake.local = key.second;
      fake.line = n.line;
      fake.column = n.column;
      unknown(fake);
    }

    for (const auto& child : n.children) {
      const XmlNode& c = *child;
      if (c.ns == ns::kDaml && set_count(c, c.local, c.text)) continue;
      if (c.is(ns::kDaml, "onProperty")) {
        auto p = resource(c);
        if (!p) malformed(c, "daml:onProperty needs rdf:resource");
        r.on_property = *p;
      } else if (c.is(ns::kDaml, "toClass")) {
        r.to_class = class_reference(c);
      } else if (c.is(ns::kDaml, "hasClass")) {
        r.has_class = class_reference(c);
      } else if (c.is(ns::kDaml, "hasClassQ")) {
        q.has_class_q = class_reference(c);
        qualified = true;
      } else if (c.is(ns::kDaml, "hasValue")) {
        if (auto v = resource(c)) {
          r.has_value = InstanceRef{*v};
        } else {
          r.has_value = Literal{c.text, Datatype::String};
          pending_values_.push_back(r.id);
        }
      } else {
        unknown(c);
      }
    }

    if (r.on_property.empty()) malformed(n, "daml:Restriction without daml:onProperty");
    if (qualified) {
      if (q.has_class_q.empty()) malformed(n, "qualified cardinality without daml:hasClassQ");
      r.qualifier = q;
    }
    if (!r.has_constraint()) malformed(n, "daml:Restriction on " + r.on_property + " constrains nothing");
    const Identifier id = r.id;
    report_.doc.restrictions.emplace(id, std::move(r));
    return id;
  }

  void read_property(const XmlNode& n) {
    const Identifier id = subject_id(n);
    PropertyDef& p = report_.doc.properties[id];
    p.id = id;
    auto mark = [&](std::string_view construct) {
      if (construct == "DatatypeProperty") datatype_properties_.insert(id);
      if (construct == "TransitiveProperty") report_.doc.properties[id].transitive = true;
      if (construct == "UniqueProperty") report_.doc.properties[id].unique = true;
    };
    mark(n.local);

    for (const auto& child : n.children) {
      const XmlNode& c = *child;
      PropertyDef& prop = report_.doc.properties[id];
      if (c.is(ns::kRdfs, "comment")) {
        prop.comment = c.text;
      } else if (c.is(ns::kRdfs, "subPropertyOf")) {
        prop.sub_property_of.insert(property_reference(c));
      } else if (c.is(ns::kDaml, "samePropertyAs")) {
        prop.same_property_as.insert(property_reference(c));
      } else if (c.is(ns::kDaml, "inverseOf")) {
        prop.inverse_of.insert(property_reference(c));
      } else if (c.is(ns::kRdfs, "domain")) {
        Identifier d = class_reference(c);
        report_.doc.properties[id].domain.insert(d);
      } else if (c.is(ns::kRdfs, "range")) {
        Identifier r = class_reference(c);
        report_.doc.properties[id].range.insert(r);
      } else if (c.is(ns::kRdf, "type") && c.attr(ns::kRdf, "resource") &&
                 c.attr(ns::kRdf, "resource")->starts_with(ns::kDaml)) {
        mark(std::string_view(*c.attr(ns::kRdf, "resource")).substr(ns::kDaml.size()));
      } else {
        unknown(c);
      }
    }
    report_.doc.properties[id].kind =
        datatype_properties_.contains(id) ? PropertyKind::Datatype : PropertyKind::Object;
  }

  Identifier property_reference(const XmlNode& n) const {
    auto r = resource(n);
    if (!r) malformed(n, describe(n) + " needs rdf:resource");
    return *r;
  }

  void read_instance(const XmlNode& n) {
    const Identifier class_id = element_id(n);
    if (!report_.doc.classes.contains(class_id)) {
      throw Error(ErrorCode::DanglingReference,
                  "line " + std::to_string(n.line) + ": element " + class_id + " is not a declared class",
                  {{ViolationCode::DanglingReference, {class_id}, "typed element of undeclared class"}});
    }
    const Identifier id = subject_id(n);
    InstanceDef& inst = report_.doc.instances[id];
    if (!inst.class_id.empty() && inst.class_id != class_id) {
      malformed(n, "instance " + id + " belongs to both " + inst.class_id + " and " + class_id);
    }
    inst.id = id;
    inst.class_id = class_id;

    for (const auto& child : n.children) {
      const XmlNode& c = *child;
      if (c.is(ns::kDaml, "differentIndividualFrom")) {
        inst.different_from.insert(property_reference(c));
      } else if (c.is(ns::kDaml, "sameIndividualAs")) {
        inst.same_as.insert(property_reference(c));
      } else if (is_vocabulary(c.ns)) {
        unknown(c);
      } else if (auto r = resource(c)) {
        inst.assertions.push_back({element_id(c), InstanceRef{*r}});
      } else if (!c.children.empty()) {
        unknown(c);
      } else {
        Literal lit{c.text, Datatype::String};
        if (const auto* dt = c.attr(ns::kRdf, "datatype")) {
          if (auto parsed = datatype_from_name(localize(*dt))) lit.datatype = *parsed;
        } else {
          pending_assertions_.emplace_back(id, inst.assertions.size());
        }
        inst.assertions.push_back({element_id(c), std::move(lit)});
      }
    }
  }

  Datatype range_datatype(const Identifier& property) const {
    if (const PropertyDef* p = report_.doc.find_property(property)) {
      for (const auto& r : p->range) {
        if (auto dt = datatype_from_name(r)) return *dt;
      }
    }
    return Datatype::String;
  }

  void resolve_literals() {
    OntologyDoc& doc = report_.doc;
    for (const auto& [iid, index] : pending_assertions_) {
      Assertion& a = doc.instances.at(iid).assertions.at(index);
      std::get<Literal>(a.value).datatype = range_datatype(a.property);
    }
    for (const auto& rid : pending_values_) {
      Restriction& r = doc.restrictions.at(rid);
      auto& lit = std::get<Literal>(*r.has_value);
      const PropertyDef* p = doc.find_property(r.on_property);
      if (p && p->kind == PropertyKind::Object) {
        r.has_value = InstanceRef{localize(trim(lit.lexical))};
      } else {
        lit.datatype = range_datatype(r.on_property);
      }
    }
  }

  bool strict_;
  std::string base_;
  ParseReport report_;
  int restriction_counter_ = 0;
  std::set<Identifier> datatype_properties_;
  std::vector<std::pair<Identifier, std::size_t>> pending_assertions_;
  std::vector<Identifier> pending_values_;
};

// Writer ----------------------------------------------------------------------

bool is_ncname(std::string_view s) {
  if (s.empty()) return false;
  auto start = [](unsigned char ch) { return std::isalpha(ch) || ch == '_' || ch >= 0x80; };
  auto rest = [&](unsigned char ch) { return start(ch) || std::isdigit(ch) || ch == '-' || ch == '.'; };
  if (!start(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char ch) { return rest(static_cast<unsigned char>(ch)); });
}

std::string escape(std::string_view s, bool attribute) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      case '\n': out += attribute ? "&#10;" : "\n"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += attribute ? "&#9;" : "\t"; break;
      default: out += ch;
    }
  }
  return out;
}

class Writer {
 public:
  explicit Writer(const OntologyDoc& doc) : doc_(doc) { collect_namespaces(); }

  std::string write() {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ << "<rdf:RDF\n  xmlns:rdf=\"" << ns::kRdf << "\"\n  xmlns:rdfs=\"" << ns::kRdfs << "\"\n  xmlns:daml=\""
         << ns::kDaml << "\"";
    for (const auto& [nspace, prefix] : prefixes_) out_ << "\n  xmlns:" << prefix << "=\"" << escape(nspace, true) << "\"";
    out_ << ">\n";

    write_ontology();
    for (const auto& [id, cls] : doc_.classes) write_class(cls);
    for (const auto& [id, prop] : doc_.properties) write_property(prop);
    for (const auto& [id, inst] : doc_.instances) write_instance(inst);
    out_ << "</rdf:RDF>\n";
    return out_.str();
  }

 private:
  // Element names for identifiers: NCNames stay unqualified, IRIs are split
  // at the last '#' or '/' into a declared namespace and a local part.
  void collect_namespaces() {
    std::set<std::string> spaces;
    auto need = [&](const Identifier& id) {
      if (is_ncname(id)) return;
      auto [nspace, local] = split_iri(id);
      spaces.insert(nspace);
    };
    for (const auto& [id, inst] : doc_.instances) {
      need(inst.class_id);
      for (const auto& a : inst.assertions) need(a.property);
    }
    int n = 0;
    for (const auto& s : spaces) prefixes_[s] = "ns" + std::to_string(++n);
  }

  static std::pair<std::string, std::string> split_iri(const Identifier& id) {
    auto pos = id.find_last_of("#/");
    if (pos == std::string::npos || !is_ncname(std::string_view(id).substr(pos + 1))) {
      throw Error(ErrorCode::InvalidArgument, "identifier " + id + " cannot be written as an element name");
    }
    return {id.substr(0, pos + 1), id.substr(pos + 1)};
  }

  std::string element_name(const Identifier& id) const {
    if (is_ncname(id)) return id;
    auto [nspace, local] = split_iri(id);
    return prefixes_.at(nspace) + ":" + local;
  }

  static std::string reference(const Identifier& id) {
    if (is_datatype_name(id)) return std::string(ns::kXsd) + id;
    if (is_ncname(id) || id.starts_with('#')) return "#" + id;
    return id;
  }

  static std::string subject_attr(const Identifier& id) {
    if (is_ncname(id)) return "rdf:ID=\"" + escape(id, true) + "\"";
    return "rdf:about=\"" + escape(reference(id), true) + "\"";
  }

  static std::string resource_attr(const Identifier& id) {
    return "rdf:resource=\"" + escape(reference(id), true) + "\"";
  }

  void indent(int depth) { out_ << std::string(static_cast<std::size_t>(depth) * 2, ' '); }

  void text_element(int depth, std::string_view name, std::string_view text) {
    indent(depth);
    out_ << "<" << name << ">" << escape(text, false) << "</" << name << ">\n";
  }

  void resource_element(int depth, std::string_view name, const Identifier& id) {
    indent(depth);
    out_ << "<" << name << " " << resource_attr(id) << "/>\n";
  }

  void write_ontology() {
    indent(1);
    out_ << "<daml:Ontology rdf:about=\"" << escape(doc_.id, true) << "\">\n";
    if (!doc_.version_info.empty()) text_element(2, "daml:versionInfo", doc_.version_info);
    if (!doc_.comment.empty()) text_element(2, "rdfs:comment", doc_.comment);
    for (const auto& imp : doc_.imports) {
      indent(2);
      out_ << "<daml:imports rdf:resource=\"" << escape(imp, true) << "\"/>\n";
    }
    indent(1);
    out_ << "</daml:Ontology>\n";
  }

  static std::string_view relation_element(ClassRelation rel) {
    switch (rel) {
      case ClassRelation::SubClassOf: return "rdfs:subClassOf";
      case ClassRelation::DisjointWith: return "daml:disjointWith";
      case ClassRelation::SameClassAs: return "daml:sameClassAs";
      case ClassRelation::ComplementOf: return "daml:complementOf";
      case ClassRelation::UnionOf: return "daml:unionOf";
      case ClassRelation::IntersectionOf: return "daml:intersectionOf";
      case ClassRelation::DisjointUnionOf: return "daml:disjointUnionOf";
    }
    return "rdfs:subClassOf";
  }

  static bool is_collection(ClassRelation rel) {
    return rel == ClassRelation::UnionOf || rel == ClassRelation::IntersectionOf ||
           rel == ClassRelation::DisjointUnionOf;
  }

  void write_class(const ClassDef& cls) {
    indent(1);
    out_ << "<daml:Class " << subject_attr(cls.id) << ">\n";
    if (!cls.label.empty()) text_element(2, "rdfs:label", cls.label);
    if (!cls.comment.empty()) text_element(2, "rdfs:comment", cls.comment);
    for (ClassRelation rel : kAllClassRelations) {
      const auto& set = members(cls, rel);
      if (set.empty()) continue;
      const std::string_view name = relation_element(rel);
      if (is_collection(rel)) {
        indent(2);
        out_ << "<" << name << " rdf:parseType=\"daml:collection\">\n";
        for (const auto& m : set) write_class_member(3, m);
        indent(2);
        out_ << "</" << name << ">\n";
        continue;
      }
      for (const auto& m : set) {
        if (const Restriction* r = doc_.find_restriction(m)) {
          indent(2);
          out_ << "<" << name << ">\n";
          write_restriction(3, *r);
          indent(2);
          out_ << "</" << name << ">\n";
        } else {
          resource_element(2, name, m);
        }
      }
    }
    if (!cls.one_of.empty()) {
      indent(2);
      out_ << "<daml:oneOf rdf:parseType=\"daml:collection\">\n";
      for (const auto& m : cls.one_of) {
        indent(3);
        out_ << "<" << element_name(doc_.instances.at(m).class_id) << " rdf:about=\"" << escape(reference(m), true)
             << "\"/>\n";
      }
      indent(2);
      out_ << "</daml:oneOf>\n";
    }
    indent(1);
    out_ << "</daml:Class>\n";
  }

  void write_class_member(int depth, const Identifier& m) {
    if (const Restriction* r = doc_.find_restriction(m)) {
      write_restriction(depth, *r);
      return;
    }
    indent(depth);
    out_ << "<daml:Class rdf:about=\"" << escape(reference(m), true) << "\"/>\n";
  }

  void write_restriction(int depth, const Restriction& r) {
    indent(depth);
    out_ << "<daml:Restriction";
    auto count_attr = [&](std::string_view name, const std::optional<Count>& v) {
      if (v) out_ << " daml:" << name << "=\"" << *v << "\"";
    };
    count_attr("cardinality", r.c);
    count_attr("minCardinality", r.min_c);
    count_attr("maxCardinality", r.max_c);
    if (r.qualifier) {
      count_attr("cardinalityQ", r.qualifier->cq);
      count_attr("minCardinalityQ", r.qualifier->min_cq);
      count_attr("maxCardinalityQ", r.qualifier->max_cq);
    }
    out_ << ">\n";
    resource_element(depth + 1, "daml:onProperty", r.on_property);
    if (r.to_class) resource_element(depth + 1, "daml:toClass", *r.to_class);
    if (r.has_class) resource_element(depth + 1, "daml:hasClass", *r.has_class);
    if (r.has_value) {
      if (const auto* ref = std::get_if<InstanceRef>(&*r.has_value)) {
        resource_element(depth + 1, "daml:hasValue", ref->id);
      } else {
        text_element(depth + 1, "daml:hasValue", std::get<Literal>(*r.has_value).lexical);
      }
    }
    if (r.qualifier) resource_element(depth + 1, "daml:hasClassQ", r.qualifier->has_class_q);
    indent(depth);
    out_ << "</daml:Restriction>\n";
  }

  void write_property(const PropertyDef& p) {
    const std::string_view kind = p.kind == PropertyKind::Datatype ? "daml:DatatypeProperty" : "daml:ObjectProperty";
    indent(1);
    out_ << "<" << kind << " " << subject_attr(p.id) << ">\n";
    if (!p.comment.empty()) text_element(2, "rdfs:comment", p.comment);
    for (const auto& x : p.sub_property_of) resource_element(2, "rdfs:subPropertyOf", x);
    for (const auto& x : p.domain) resource_element(2, "rdfs:domain", x);
    for (const auto& x : p.range) resource_element(2, "rdfs:range", x);
    for (const auto& x : p.same_property_as) resource_element(2, "daml:samePropertyAs", x);
    for (const auto& x : p.inverse_of) resource_element(2, "daml:inverseOf", x);
    indent(1);
    out_ << "</" << kind << ">\n";
    const std::string about = "rdf:about=\"" + escape(reference(p.id), true) + "\"";
    if (p.transitive) {
      indent(1);
      out_ << "<daml:TransitiveProperty " << about << "/>\n";
    }
    if (p.unique) {
      indent(1);
      out_ << "<daml:UniqueProperty " << about << "/>\n";
    }
  }

  void write_instance(const InstanceDef& inst) {
    const std::string type = element_name(inst.class_id);
    indent(1);
    out_ << "<" << type << " " << subject_attr(inst.id) << ">\n";
    for (const auto& a : inst.assertions) {
      const std::string name = element_name(a.property);
      if (const auto* ref = std::get_if<InstanceRef>(&a.value)) {
        resource_element(2, name, ref->id);
      } else {
        text_element(2, name, std::get<Literal>(a.value).lexical);
      }
    }
    for (const auto& o : inst.different_from) resource_element(2, "daml:differentIndividualFrom", o);
    for (const auto& o : inst.same_as) resource_element(2, "daml:sameIndividualAs", o);
    indent(1);
    out_ << "</" << type << ">\n";
  }

  const OntologyDoc& doc_;
  std::map<std::string, std::string> prefixes_;
  std::ostringstream out_;
};

}  // namespace

ParseReport parse_ontology(std::string_view xml, bool strict) { return Reader(strict).read(xml); }

std::string serialize_ontology(const OntologyDoc& doc) {
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
      throw Error(ErrorCode::InconsistentDoc,
                  "restriction " + rid + " has " + std::to_string(anchors[rid]) + " anchors; exactly one is required");
    }
  }
  return Writer(doc).write();
}

}  // namespace imagespace
