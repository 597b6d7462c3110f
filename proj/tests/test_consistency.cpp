// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <deque>

#include "imagespace/consistency.hpp"
#include "imagespace/derivations.hpp"
#include "imagespace/error.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

namespace imagespace {
namespace {

bool has_code(const std::vector<Violation>& vs, ViolationCode code) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.code == code; });
}

OntologyDoc two_classes() {
  OntologyDoc doc;
  doc.id = "t";
  doc.classes["A"] = ClassDef{.id = "A"};
  doc.classes["B"] = ClassDef{.id = "B", .sub_class_of = {"A"}};
  doc.properties["p"] = PropertyDef{.id = "p", .kind = PropertyKind::Object};
  return doc;
}

TEST(CheckOntology, FixtureIsConsistent) { EXPECT_TRUE(check_ontology(testing::family_album()).empty()); }

TEST(CheckOntology, MinAboveMax) {
  OntologyDoc doc = two_classes();
  doc.restrictions["_:r1"] = Restriction{.id = "_:r1", .on_property = "p", .min_c = 3, .max_c = 1};
  doc.classes["A"].sub_class_of.insert("_:r1");
  const auto vs = check_ontology(doc);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].code, ViolationCode::CardinalityBounds);
  EXPECT_EQ(vs[0].subjects, (std::vector<std::string>{"_:r1"}));
}

TEST(CheckOntology, ExactCountOutsideBounds) {
  OntologyDoc doc = two_classes();
  doc.restrictions["_:r1"] = Restriction{.id = "_:r1", .on_property = "p", .max_c = 1, .c = 2};
  doc.classes["A"].sub_class_of.insert("_:r1");
  EXPECT_TRUE(has_code(check_ontology(doc), ViolationCode::CardinalityBounds));
}

TEST(CheckOntology, ToClassWithHasClass) {
  OntologyDoc doc = two_classes();
  doc.restrictions["_:r1"] = Restriction{.id = "_:r1", .on_property = "p", .to_class = "A", .has_class = "B"};
  doc.classes["A"].sub_class_of.insert("_:r1");
  const auto vs = check_ontology(doc);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].code, ViolationCode::ToClassExclusion);
}

TEST(CheckOntology, AncestorInDisjointWith) {
  OntologyDoc doc = two_classes();
  doc.classes["B"].disjoint_with.insert("A");
  const auto vs = check_ontology(doc);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].code, ViolationCode::AncestorInDisjointWith);
  EXPECT_EQ(vs[0].subjects, (std::vector<std::string>{"B", "A"}));
}

TEST(CheckOntology, SelfInDisjointWith) {
  OntologyDoc doc = two_classes();
  doc.classes["A"].disjoint_with.insert("A");
  EXPECT_TRUE(has_code(check_ontology(doc), ViolationCode::AncestorInDisjointWith));
}

TEST(CheckOntology, AncestorInComplementOf) {
  OntologyDoc doc = two_classes();
  doc.classes["B"].complement_of.insert("A");
  const auto vs = check_ontology(doc);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].code, ViolationCode::AncestorInComplementOf);
}

TEST(CheckOntology, DescendantInComplementOf) {
  OntologyDoc doc = two_classes();
  doc.classes["A"].complement_of.insert("B");
  EXPECT_TRUE(has_code(check_ontology(doc), ViolationCode::AncestorInComplementOf));
}

TEST(CheckOntology, SubClassCycle) {
  OntologyDoc doc = two_classes();
  doc.classes["C"] = ClassDef{.id = "C", .sub_class_of = {"B"}};
  doc.classes["A"].sub_class_of.insert("C");
  const auto vs = check_ontology(doc);
  ASSERT_TRUE(has_code(vs, ViolationCode::SubClassCycle));
  const auto it = std::find_if(vs.begin(), vs.end(), [](const Violation& v) { return v.code == ViolationCode::SubClassCycle; });
  std::vector<std::string> subjects = it->subjects;
  std::sort(subjects.begin(), subjects.end());
  EXPECT_EQ(subjects, (std::vector<std::string>{"A", "B", "C"}));
}

TEST(CheckOntology, SubPropertyCycle) {
  OntologyDoc doc = two_classes();
  doc.properties["q"] = PropertyDef{.id = "q", .sub_property_of = {"p"}};
  doc.properties["p"].sub_property_of.insert("q");
  EXPECT_TRUE(has_code(check_ontology(doc), ViolationCode::SubPropertyCycle));
}

TEST(CheckOntology, DanglingReferences) {
  OntologyDoc doc = two_classes();
  doc.classes["B"].sub_class_of.insert("Nowhere");
  doc.properties["p"].range.insert("Missing");
  const auto vs = check_ontology(doc);
  EXPECT_EQ(std::count_if(vs.begin(), vs.end(), [](const Violation& v) { return v.code == ViolationCode::DanglingReference; }),
            2);
}

TEST(CheckOntology, ReportIsNormalized) {
  OntologyDoc doc = two_classes();
  doc.classes["B"].disjoint_with.insert("A");
  doc.restrictions["_:r1"] = Restriction{.id = "_:r1", .on_property = "p", .min_c = 3, .max_c = 1};
  doc.classes["A"].sub_class_of.insert("_:r1");
  auto vs = check_ontology(doc);
  auto sorted = vs;
  normalize(sorted);
  EXPECT_EQ(vs, sorted);
  EXPECT_EQ(vs.front().code, ViolationCode::CardinalityBounds);
}

// Crafted edits against the fixture ------------------------------------------

EditOutcome edit(const OntologyDoc& doc, Edit e) { return apply_edit(doc, e); }

TEST(ApplyEdit, RejectsSubClassCycle) {
  const OntologyDoc doc = testing::family_album();
  const auto out = edit(doc, TupleEdit{EditOp::Insert, "subClassOf", "Pictures", "Vacation"});
  ASSERT_TRUE(std::holds_alternative<Rejected>(out));
  EXPECT_TRUE(has_code(std::get<Rejected>(out).violations, ViolationCode::SubClassCycle));
}

TEST(ApplyEdit, RejectsAncestorInDisjointWith) {
  const auto out = edit(testing::family_album(), TupleEdit{EditOp::Insert, "disjointWith", "Vacation", "Pictures"});
  ASSERT_TRUE(std::holds_alternative<Rejected>(out));
  EXPECT_TRUE(has_code(std::get<Rejected>(out).violations, ViolationCode::AncestorInDisjointWith));
}

TEST(ApplyEdit, RejectsMinAboveMax) {
  Restriction r{.on_property = "PicturePlace", .min_c = 2, .max_c = 1};
  const auto out = edit(testing::family_album(), RestrictionEdit{EditOp::Insert, r, "Person", ClassRelation::SubClassOf});
  ASSERT_TRUE(std::holds_alternative<Rejected>(out));
  EXPECT_TRUE(has_code(std::get<Rejected>(out).violations, ViolationCode::CardinalityBounds));
}

TEST(ApplyEdit, AcceptsDisjointSiblings) {
  const auto out = edit(testing::family_album(), TupleEdit{EditOp::Insert, "disjointWith", "Vacation", "Birthday_Party"});
  ASSERT_TRUE(std::holds_alternative<Applied>(out));
  EXPECT_TRUE(std::get<Applied>(out).doc.classes.at("Vacation").disjoint_with.contains("Birthday_Party"));
}

TEST(ApplyEdit, DeleteClassCascades) {
  const OntologyDoc doc = testing::family_album();
  ClassEdit del{EditOp::Delete, ClassDef{.id = "Actor"}};
  const auto out = edit(doc, del);
  ASSERT_TRUE(std::holds_alternative<Cascaded>(out));
  const auto& c = std::get<Cascaded>(out);
  EXPECT_FALSE(c.doc.classes.contains("Actor"));
  EXPECT_TRUE(check_ontology(c.doc).empty());
  EXPECT_FALSE(c.removed.empty());
  EXPECT_FALSE(c.doc.properties.at("hugs").domain.contains("Actor"));
}

TEST(ApplyEdit, InputMustBeConsistent) {
  OntologyDoc doc = two_classes();
  doc.classes["B"].disjoint_with.insert("A");
  try {
    apply_edit(doc, ClassEdit{EditOp::Insert, ClassDef{.id = "C"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentInputDoc);
  }
}

TEST(ApplyEdit, MalformedEditsThrow) {
  const OntologyDoc doc = testing::family_album();
  EXPECT_THROW(apply_edit(doc, ClassEdit{EditOp::Insert, ClassDef{.id = "Pictures"}}), Error);
  EXPECT_THROW(apply_edit(doc, TupleEdit{EditOp::Delete, "subClassOf", "Person", "Pictures"}), Error);
  EXPECT_THROW(apply_edit(doc, TupleEdit{EditOp::Insert, "bogus", "Person", "Pictures"}), Error);
}

TEST(ApplyEdit, InputIsNotMutated) {
  const OntologyDoc doc = testing::family_album();
  const OntologyDoc copy = doc;
  edit(doc, ClassEdit{EditOp::Delete, ClassDef{.id = "Pictures"}});
  EXPECT_EQ(doc, copy);
}

TEST(ApplyEdit, RandomEditSequencesStayConsistent) {
  testing::Rng rng(7);
  int applied = 0;
  int total = 0;
  for (int run = 0; run < 20; ++run) {
    OntologyDoc doc = testing::random_ontology(rng);
    for (int i = 0; i < 60; ++i, ++total) {
      const Edit e = testing::random_edit(rng, doc);
      EditOutcome out;
      try {
        out = apply_edit(doc, e);
      } catch (const Error& err) {
        ASSERT_EQ(err.code(), ErrorCode::InvalidEdit) << err.what();
        continue;
      }
      if (auto* a = std::get_if<Applied>(&out)) {
        doc = a->doc;
        ++applied;
      } else if (auto* c = std::get_if<Cascaded>(&out)) {
        doc = c->doc;
        ++applied;
      } else {
        ASSERT_FALSE(std::get<Rejected>(out).violations.empty());
      }
      ASSERT_TRUE(check_ontology(doc).empty());
    }
  }
  EXPECT_GE(total, 1000);
  EXPECT_GT(applied, total / 10);
}

TEST(ApplyEdit, DeleteReportsDisjointTuple) {
  OntologyDoc doc = testing::family_album();
  doc.classes.at("Person").disjoint_with.insert("Actor");
  const auto out = edit(doc, ClassEdit{EditOp::Delete, ClassDef{.id = "Actor"}});
  ASSERT_TRUE(std::holds_alternative<Cascaded>(out));
  const auto& removed = std::get<Cascaded>(out).removed;
  EXPECT_NE(std::find(removed.begin(), removed.end(), RemovedTuple{"disjointWith", "Person", "Actor"}), removed.end());
}

TEST(ApplyEdit, RejectsSubClassOfComplement) {
  OntologyDoc doc = two_classes();
  doc.classes["C"] = ClassDef{.id = "C", .complement_of = {"A"}};
  ASSERT_TRUE(check_ontology(doc).empty());
  const auto out = edit(doc, TupleEdit{EditOp::Insert, "subClassOf", "C", "A"});
  ASSERT_TRUE(std::holds_alternative<Rejected>(out));
  EXPECT_EQ(std::get<Rejected>(out).violations.at(0).code, ViolationCode::AncestorInComplementOf);
}

// Candidates ------------------------------------------------------------------

bool accepted(const OntologyDoc& doc, const Identifier& cls, ClassRelation rel, const Identifier& other) {
  try {
    const auto out = apply_edit(doc, TupleEdit{EditOp::Insert, std::string(to_string(rel)), cls, other});
    return !std::holds_alternative<Rejected>(out);
  } catch (const Error&) {
    return false;
  }
}

TEST(Candidates, FixtureDisjointWith) {
  const auto c = candidate_classes(testing::family_album(), "Vacation", ClassRelation::DisjointWith);
  EXPECT_EQ(c, (std::set<Identifier>{"Actor", "Birthday_Party", "Person"}));
}

TEST(Candidates, FixtureSubClassOf) {
  const auto c = candidate_classes(testing::family_album(), "Pictures", ClassRelation::SubClassOf);
  EXPECT_EQ(c, (std::set<Identifier>{"Actor", "Person"}));
}

TEST(Candidates, BirthdayPartyDisjointWithExcludesPictures) {
  const auto c = candidate_classes(testing::family_album(), "Birthday_Party", ClassRelation::DisjointWith);
  EXPECT_FALSE(c.contains("Pictures"));
  EXPECT_FALSE(c.contains("Birthday_Party"));
  EXPECT_TRUE(c.contains("Vacation"));
}

TEST(Candidates, UnknownClass) {
  EXPECT_THROW(candidate_classes(testing::family_album(), "Nope", ClassRelation::SubClassOf), Error);
}

TEST(Candidates, MatchEditSimulation) {
  testing::Rng rng(11);
  for (int run = 0; run < 25; ++run) {
    const OntologyDoc doc = testing::random_ontology(rng, {.classes = 7, .properties = 3, .restrictions = 2, .instances = 0});
    for (const auto& [cid, _] : doc.classes) {
      for (ClassRelation rel : kAllClassRelations) {
        std::set<Identifier> simulated;
        for (const auto& [other, __] : doc.classes) {
          if (accepted(doc, cid, rel, other)) simulated.insert(other);
        }
        ASSERT_EQ(candidate_classes(doc, cid, rel), simulated) << cid << " " << to_string(rel);
      }
    }
  }
}

// Hierarchy closure -------------------------------------------------------------

std::set<Identifier> bfs_ancestors(const OntologyDoc& doc, const Identifier& start) {
  std::set<Identifier> seen;
  std::deque<Identifier> queue{start};
  while (!queue.empty()) {
    const Identifier cur = queue.front();
    queue.pop_front();
    for (const auto& p : doc.classes.at(cur).sub_class_of) {
      if (doc.classes.contains(p) && seen.insert(p).second) queue.push_back(p);
    }
  }
  return seen;
}

TEST(Closure, AncestorsMatchBreadthFirstSearch) {
  testing::Rng rng(5);
  for (int run = 0; run < 40; ++run) {
    const OntologyDoc doc = testing::random_ontology(rng);
    for (const auto& [cid, _] : doc.classes) {
      const auto anc = ancestors(doc, cid);
      const std::set<Identifier> got(anc.begin(), anc.end());
      ASSERT_EQ(got.size(), anc.size());
      ASSERT_EQ(got, bfs_ancestors(doc, cid));
      for (const auto& a : anc) ASSERT_TRUE(descendants(doc, a).contains(cid));
      // every class precedes its own ancestors
      for (std::size_t i = 0; i < anc.size(); ++i) {
        for (std::size_t j = i + 1; j < anc.size(); ++j) ASSERT_FALSE(bfs_ancestors(doc, anc[j]).contains(anc[i]));
      }
    }
  }
}

// Instance validation ---------------------------------------------------------

TEST(ValidateInstance, ReferenceAnnotationIsValid) {
  const OntologyDoc doc = testing::family_album();
  EXPECT_TRUE(validate_graph(doc, testing::kathleen_kevin(doc)).empty());
}

TEST(ValidateInstance, MissingPictureDate) {
  const OntologyDoc doc = testing::family_album();
  InstanceGraph g;
  g.instances["pic"] = InstanceDef{.id = "pic", .class_id = "Birthday_Party"};
  const auto vs = validate_instance(doc, g, "pic");
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].code, ViolationCode::CardinalityUnmet);
  EXPECT_EQ(vs[0].subjects, (std::vector<std::string>{"pic", "PictureDate"}));
  g.instances["pic"].class_id = "Vacation";
  EXPECT_TRUE(validate_instance(doc, g, "pic").empty());
}

TEST(ValidateInstance, DatedPictureIsValid) {
  const OntologyDoc doc = testing::family_album();
  InstanceGraph g;
  g.instances["pic"] = InstanceDef{
      .id = "pic", .class_id = "Pictures", .assertions = {{"PictureDate", Literal{"2002-06-01", Datatype::DateTime}}}};
  EXPECT_TRUE(validate_instance(doc, g, "pic").empty());
  g.instances["pic"].assertions.push_back({"PictureDate", Literal{"2002-06-02", Datatype::DateTime}});
  EXPECT_TRUE(has_code(validate_instance(doc, g, "pic"), ViolationCode::CardinalityExceeded));
}

TEST(ValidateInstance, RangeDomainAndUniqueness) {
  const OntologyDoc doc = testing::family_album();
  InstanceGraph g = testing::kathleen_kevin(doc);
  auto& actor = g.instances.at("Kevin-actor1");
  actor.assertions.push_back({"isSnapshotOf", InstanceRef{"Kathleen"}});
  EXPECT_TRUE(has_code(validate_instance(doc, g, "Kevin-actor1"), ViolationCode::UniquePropertyViolation));
  actor.assertions.pop_back();
  actor.assertions.push_back({"hugs", InstanceRef{"Kevin"}});
  EXPECT_TRUE(has_code(validate_instance(doc, g, "Kevin-actor1"), ViolationCode::RangeViolation));
  actor.assertions.pop_back();
  actor.assertions.push_back({"hasName", Literal{"K"}});
  EXPECT_TRUE(has_code(validate_instance(doc, g, "Kevin-actor1"), ViolationCode::DomainViolation));
  actor.assertions.pop_back();
  actor.assertions.push_back({"hugs", InstanceRef{"ghost"}});
  EXPECT_TRUE(has_code(validate_instance(doc, g, "Kevin-actor1"), ViolationCode::DanglingReference));
}

TEST(ValidateInstance, InvalidLiteral) {
  const OntologyDoc doc = testing::family_album();
  InstanceGraph g;
  g.instances["pic"] = InstanceDef{
      .id = "pic", .class_id = "Vacation", .assertions = {{"PictureDate", Literal{"yesterday", Datatype::DateTime}}}};
  EXPECT_TRUE(has_code(validate_instance(doc, g, "pic"), ViolationCode::RangeViolation));
}

TEST(ValidateInstance, HasValueAndQualified) {
  OntologyDoc doc = two_classes();
  doc.instances["a1"] = InstanceDef{.id = "a1", .class_id = "A"};
  doc.restrictions["_:r1"] = Restriction{.id = "_:r1", .on_property = "p", .has_value = InstanceRef{"a1"}};
  doc.restrictions["_:r2"] = Restriction{.id = "_:r2", .on_property = "p", .qualifier = Qualifier{"B", 1, std::nullopt, std::nullopt}};
  doc.classes["B"].sub_class_of.insert({"_:r1", "_:r2"});
  ASSERT_TRUE(check_ontology(doc).empty());
  InstanceGraph g;
  g.instances["b"] = InstanceDef{.id = "b", .class_id = "B"};
  const auto vs = validate_instance(doc, g, "b");
  EXPECT_TRUE(has_code(vs, ViolationCode::HasValueMissing));
  EXPECT_TRUE(has_code(vs, ViolationCode::QualifiedCardinality));
  g.instances["b2"] = InstanceDef{.id = "b2", .class_id = "B"};
  g.instances["b"].assertions = {{"p", InstanceRef{"a1"}}, {"p", InstanceRef{"b2"}}};
  EXPECT_TRUE(validate_instance(doc, g, "b").empty());
}

TEST(ValidateInstance, UnknownInstance) {
  EXPECT_THROW(validate_instance(testing::family_album(), {}, "nobody"), Error);
}

}  // namespace
}  // namespace imagespace
