// SPDX-License-Identifier: Apache-2.0
//
// Reader and writer for the DAML+OIL subset that the relational schema can
// hold. Namespaces are matched by IRI, so documents are free to bind their
// own prefixes.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "imagespace/ontology.hpp"

namespace imagespace {

namespace ns {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kDaml = "http://www.daml.org/2001/03/daml+oil#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2000/10/XMLSchema#";
inline constexpr std::string_view kXsd2001 = "http://www.w3.org/2001/XMLSchema#";
}  // namespace ns

struct ParseWarning {
  int line = 0;
  int column = 0;
  std::string message;
};

struct ParseReport {
  OntologyDoc doc;
  std::vector<ParseWarning> warnings;
};

/// Unknown constructs are errors in strict mode and warnings otherwise.
/// Anonymous restrictions are numbered "_:r1", "_:r2", ... in document
/// order. Throws Error with MalformedXml, UnknownConstruct or
/// DanglingReference.
ParseReport parse_ontology(std::string_view xml, bool strict);

/// Emits classes, then properties, then instances, each sorted by
/// identifier; restrictions are nested inside the class relation that
/// anchors them. Throws Error(InconsistentDoc) unless check_ontology finds
/// nothing and every restriction has exactly one anchor.
std::string serialize_ontology(const OntologyDoc& doc);

}  // namespace imagespace
