// SPDX-License-Identifier: Apache-2.0
//
// Graph views of an ontology and deterministic layouts for them.
// Hierarchy edges point from child to parent.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imagespace/ontology.hpp"

namespace imagespace {

enum class ViewKind { Class, ClassWithRestrictions, Property, Individual };
enum class NodeKind { Class, Restriction, Property, Individual };
enum class EdgeKind {
  SubClassOf,
  RestrictionAnchor,
  OnProperty,
  SubPropertyOf,
  Domain,
  Range,
  InstanceOf,
};

std::string_view to_string(ViewKind k);
std::string_view to_string(NodeKind k);
std::string_view to_string(EdgeKind k);
std::optional<ViewKind> view_kind_from_string(std::string_view name);
std::optional<NodeKind> node_kind_from_string(std::string_view name);
std::optional<EdgeKind> edge_kind_from_string(std::string_view name);

/// Hex colour per node kind.
std::string_view color_key(NodeKind k);
bool is_hierarchy_edge(EdgeKind k);

struct ViewNode {
  Identifier id;
  NodeKind kind;
  std::string label;
  std::string color;

  bool operator==(const ViewNode&) const = default;
};

struct ViewEdge {
  Identifier from;
  Identifier to;
  EdgeKind kind;

  bool operator==(const ViewEdge&) const = default;
};

struct ViewGraph {
  ViewKind view = ViewKind::Class;
  std::vector<ViewNode> nodes;  // sorted by id
  std::vector<ViewEdge> edges;  // sorted by (from, to, kind)

  const ViewNode* find(std::string_view id) const;
};

ViewGraph build_view(const OntologyDoc& doc, ViewKind kind);

struct Point {
  double x = 0;
  double y = 0;
  bool operator==(const Point&) const = default;
};

struct LayoutResult {
  std::map<Identifier, Point> positions;
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

/// Abstract units between adjacent layers and slots.
inline constexpr double kLayerSpacing = 100.0;

/// Longest-path layering over hierarchy edges, four barycenter sweeps
/// within layers, identifier tiebreak. Throws Error(CyclicHierarchy).
LayoutResult layout_hierarchical(const ViewGraph& g);

inline constexpr int kOrganicIterations = 300;
inline constexpr double kOrganicEdgeLength = 100.0;
inline constexpr double kOrganicMinDistance = 30.0;

/// Fruchterman-Reingold style spring embedding with a linear cooling
/// schedule, seeded from a mt19937_64.
LayoutResult layout_organic(const ViewGraph& g, std::uint64_t seed);

enum class GraphFormat { Json, Dot };

/// Throws Error(MissingPosition).
std::string export_graph(const ViewGraph& g, const LayoutResult& layout, GraphFormat format);

struct ParsedGraph {
  ViewGraph graph;
  LayoutResult layout;
};

/// Reads the JSON produced by export_graph.
ParsedGraph parse_graph_json(std::string_view json);

}  // namespace imagespace
