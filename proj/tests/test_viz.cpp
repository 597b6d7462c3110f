// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "imagespace/error.hpp"
#include "imagespace/viz.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

namespace imagespace {
namespace {

OntologyDoc annotated() {
  const OntologyDoc doc = testing::family_album();
  return with_instances(doc, testing::kathleen_kevin(doc));
}

bool has_edge(const ViewGraph& g, const std::string& from, const std::string& to, EdgeKind k) {
  return std::find(g.edges.begin(), g.edges.end(), ViewEdge{from, to, k}) != g.edges.end();
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void expect_hierarchy_spacing(const ViewGraph& g, const LayoutResult& l) {
  for (const auto& e : g.edges) {
    if (!is_hierarchy_edge(e.kind)) continue;
    EXPECT_GE(l.positions.at(e.from).y - l.positions.at(e.to).y, kLayerSpacing) << e.from << " -> " << e.to;
  }
}

void expect_no_coincident_nodes(const LayoutResult& l) {
  for (auto a = l.positions.begin(); a != l.positions.end(); ++a) {
    EXPECT_TRUE(std::isfinite(a->second.x) && std::isfinite(a->second.y));
    for (auto b = std::next(a); b != l.positions.end(); ++b) {
      EXPECT_FALSE(a->second == b->second) << a->first << " and " << b->first;
    }
  }
}

TEST(Views, ClassView) {
  const ViewGraph g = build_view(testing::family_album(), ViewKind::Class);
  ASSERT_EQ(g.nodes.size(), 5u);
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_TRUE(has_edge(g, "Birthday_Party", "Pictures", EdgeKind::SubClassOf));
  EXPECT_TRUE(has_edge(g, "Vacation", "Pictures", EdgeKind::SubClassOf));
  EXPECT_TRUE(std::is_sorted(g.nodes.begin(), g.nodes.end(), [](auto& a, auto& b) { return a.id < b.id; }));
  EXPECT_EQ(g.find("Actor")->color, color_key(NodeKind::Class));
}

TEST(Views, ClassWithRestrictions) {
  const ViewGraph g = build_view(testing::family_album(), ViewKind::ClassWithRestrictions);
  const ViewNode* r1 = g.find("_:r1");
  ASSERT_NE(r1, nullptr);
  EXPECT_EQ(r1->kind, NodeKind::Restriction);
  EXPECT_NE(r1->label.find("PictureDate"), std::string::npos);
  EXPECT_TRUE(has_edge(g, "Pictures", "_:r1", EdgeKind::RestrictionAnchor));
  EXPECT_TRUE(has_edge(g, "_:r1", "PictureDate", EdgeKind::OnProperty));
  EXPECT_TRUE(has_edge(g, "Actor", "_:r6", EdgeKind::RestrictionAnchor));
  EXPECT_EQ(g.find("PictureDate")->kind, NodeKind::Property);
}

TEST(Views, IndividualView) {
  const ViewGraph g = build_view(annotated(), ViewKind::Individual);
  ASSERT_NE(g.find("Kathleen-actor1"), nullptr);
  ASSERT_NE(g.find("Kevin-actor1"), nullptr);
  EXPECT_EQ(g.find("Kevin-actor1")->kind, NodeKind::Individual);
  EXPECT_TRUE(has_edge(g, "Kathleen-actor1", "Actor", EdgeKind::InstanceOf));
  EXPECT_TRUE(has_edge(g, "Kevin-actor1", "Actor", EdgeKind::InstanceOf));
  EXPECT_TRUE(has_edge(g, testing::kExampleImage, "Vacation", EdgeKind::InstanceOf));
}

TEST(Views, PropertyView) {
  OntologyDoc doc = testing::family_album();
  doc.properties.at("hugs").sub_property_of.insert("hasActor");
  const ViewGraph g = build_view(doc, ViewKind::Property);
  EXPECT_EQ(g.nodes.size(), 9u);
  EXPECT_TRUE(has_edge(g, "hugs", "hasActor", EdgeKind::SubPropertyOf));
}

TEST(Views, NamesRoundTrip) {
  for (ViewKind k : {ViewKind::Class, ViewKind::ClassWithRestrictions, ViewKind::Property, ViewKind::Individual}) {
    EXPECT_EQ(view_kind_from_string(to_string(k)), k);
  }
  EXPECT_FALSE(view_kind_from_string("orthogonal"));
  std::set<std::string_view> colors;
  for (NodeKind k : {NodeKind::Class, NodeKind::Restriction, NodeKind::Property, NodeKind::Individual}) {
    colors.insert(color_key(k));
    EXPECT_EQ(node_kind_from_string(to_string(k)), k);
  }
  EXPECT_EQ(colors.size(), 4u);
}

TEST(Hierarchical, FixtureLayers) {
  const ViewGraph g = build_view(testing::family_album(), ViewKind::Class);
  const LayoutResult l = layout_hierarchical(g);
  EXPECT_EQ(l.positions.size(), g.nodes.size());
  EXPECT_EQ(l.positions.at("Pictures").y, 0.0);
  EXPECT_EQ(l.positions.at("Vacation").y, kLayerSpacing);
  expect_hierarchy_spacing(g, l);
  expect_no_coincident_nodes(l);
}

TEST(Hierarchical, LongestPathLayering) {
  ViewGraph g;
  for (const char* id : {"A", "B", "C", "D"}) g.nodes.push_back({id, NodeKind::Class, id, "#000"});
  g.edges = {{"B", "A", EdgeKind::SubClassOf}, {"C", "B", EdgeKind::SubClassOf}, {"D", "A", EdgeKind::SubClassOf},
             {"D", "C", EdgeKind::SubClassOf}};
  const LayoutResult l = layout_hierarchical(g);
  EXPECT_EQ(l.positions.at("D").y, 3 * kLayerSpacing);
  expect_hierarchy_spacing(g, l);
}

TEST(Hierarchical, CycleIsRejected) {
  ViewGraph g;
  for (const char* id : {"A", "B"}) g.nodes.push_back({id, NodeKind::Class, id, "#000"});
  g.edges = {{"A", "B", EdgeKind::SubClassOf}, {"B", "A", EdgeKind::SubClassOf}};
  try {
    layout_hierarchical(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CyclicHierarchy);
  }
}

TEST(Hierarchical, RandomOntologies) {
  testing::Rng rng(8);
  for (int i = 0; i < 40; ++i) {
    const OntologyDoc doc = testing::random_ontology(rng, {.classes = 14, .instances = 8});
    for (ViewKind k : {ViewKind::Class, ViewKind::ClassWithRestrictions, ViewKind::Property, ViewKind::Individual}) {
      const ViewGraph g = build_view(doc, k);
      const LayoutResult l = layout_hierarchical(g);
      ASSERT_EQ(l.positions.size(), g.nodes.size());
      expect_hierarchy_spacing(g, l);
      expect_no_coincident_nodes(l);
      const LayoutResult again = layout_hierarchical(g);
      ASSERT_EQ(again.positions, l.positions);
    }
  }
}

TEST(Organic, BitIdenticalForSeed) {
  const ViewGraph g = build_view(annotated(), ViewKind::ClassWithRestrictions);
  const LayoutResult a = layout_organic(g, 42);
  const LayoutResult b = layout_organic(g, 42);
  ASSERT_EQ(a.positions.size(), b.positions.size());
  for (const auto& [id, p] : a.positions) {
    const Point& q = b.positions.at(id);
    EXPECT_EQ(std::memcmp(&p.x, &q.x, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&p.y, &q.y, sizeof(double)), 0);
  }
  EXPECT_NE(layout_organic(g, 43).positions, a.positions);
}

TEST(Organic, ConnectedPairsAreCloser) {
  const ViewGraph g = build_view(testing::family_album(), ViewKind::ClassWithRestrictions);
  const LayoutResult l = layout_organic(g, 42);
  std::set<std::pair<Identifier, Identifier>> connected;
  for (const auto& e : g.edges) {
    connected.insert({std::min(e.from, e.to), std::max(e.from, e.to)});
  }
  double near = 0, far = 0;
  int n_near = 0, n_far = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      const auto& a = g.nodes[i].id;
      const auto& b = g.nodes[j].id;
      const double d = distance(l.positions.at(a), l.positions.at(b));
      if (connected.contains({std::min(a, b), std::max(a, b)})) {
        near += d;
        ++n_near;
      } else {
        far += d;
        ++n_far;
      }
    }
  }
  ASSERT_GT(n_near, 0);
  ASSERT_GT(n_far, 0);
  EXPECT_LT(near / n_near, far / n_far);
}

TEST(Organic, DisconnectedNodesKeepApart) {
  ViewGraph g;
  g.nodes = {{"a", NodeKind::Class, "a", "#000"}, {"b", NodeKind::Class, "b", "#000"}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LayoutResult l = layout_organic(g, seed);
    EXPECT_GE(distance(l.positions.at("a"), l.positions.at("b")), kOrganicMinDistance);
  }
}

TEST(Organic, RandomGraphsAreSeparated) {
  testing::Rng rng(19);
  for (int i = 0; i < 15; ++i) {
    const OntologyDoc doc = testing::random_ontology(rng);
    const ViewGraph g = build_view(doc, ViewKind::ClassWithRestrictions);
    const LayoutResult l = layout_organic(g, static_cast<std::uint64_t>(i));
    ASSERT_EQ(l.positions.size(), g.nodes.size());
    expect_no_coincident_nodes(l);
  }
}

TEST(Organic, EmptyAndSingleton) {
  EXPECT_TRUE(layout_organic(ViewGraph{}, 1).positions.empty());
  ViewGraph g;
  g.nodes = {{"a", NodeKind::Class, "a", "#000"}};
  EXPECT_EQ(layout_organic(g, 1).positions.size(), 1u);
  EXPECT_EQ(layout_hierarchical(g).positions.size(), 1u);
}

TEST(Export, JsonRoundTripIsLossless) {
  const ViewGraph g = build_view(annotated(), ViewKind::ClassWithRestrictions);
  for (const LayoutResult& l : {layout_hierarchical(g), layout_organic(g, 7)}) {
    const std::string text = export_graph(g, l, GraphFormat::Json);
    const ParsedGraph back = parse_graph_json(text);
    EXPECT_EQ(back.graph.view, g.view);
    EXPECT_EQ(back.graph.nodes, g.nodes);
    EXPECT_EQ(back.graph.edges, g.edges);
    EXPECT_EQ(back.layout.positions, l.positions);
    EXPECT_EQ(export_graph(back.graph, back.layout, GraphFormat::Json), text);
  }
}

TEST(Export, Dot) {
  const ViewGraph g = build_view(testing::family_album(), ViewKind::ClassWithRestrictions);
  const std::string dot = export_graph(g, layout_hierarchical(g), GraphFormat::Dot);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("Birthday_Party -> Pictures"), std::string::npos);
  EXPECT_NE(dot.find("\"_:r1\""), std::string::npos);
  EXPECT_NE(dot.find("pos="), std::string::npos);
  EXPECT_EQ(dot.back(), '\n');
}

TEST(Export, MissingPosition) {
  const ViewGraph g = build_view(testing::family_album(), ViewKind::Class);
  LayoutResult l = layout_hierarchical(g);
  l.positions.erase("Actor");
  try {
    export_graph(g, l, GraphFormat::Json);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingPosition);
  }
}

}  // namespace
}  // namespace imagespace
