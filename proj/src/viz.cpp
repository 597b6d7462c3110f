// SPDX-License-Identifier: Apache-2.0
#include "imagespace/viz.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

#include "imagespace/error.hpp"

namespace imagespace {
namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::pair<E, std::string_view> (&table)[N], std::string_view name) {
  for (const auto& [e, n] : table) {
    if (n == name) return e;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::pair<E, std::string_view> (&table)[N], E e) {
  for (const auto& [x, n] : table) {
    if (x == e) return n;
  }
  return "";
}

constexpr std::pair<ViewKind, std::string_view> kViewNames[] = {
    {ViewKind::Class, "class"},
    {ViewKind::ClassWithRestrictions, "classWithRestrictions"},
    {ViewKind::Property, "property"},
    {ViewKind::Individual, "individual"},
};

constexpr std::pair<NodeKind, std::string_view> kNodeNames[] = {
    {NodeKind::Class, "class"},
    {NodeKind::Restriction, "restriction"},
    {NodeKind::Property, "property"},
    {NodeKind::Individual, "individual"},
};

constexpr std::pair<EdgeKind, std::string_view> kEdgeNames[] = {
    {EdgeKind::SubClassOf, "subClassOf"},       {EdgeKind::RestrictionAnchor, "restrictionAnchor"},
    {EdgeKind::OnProperty, "onProperty"},       {EdgeKind::SubPropertyOf, "subPropertyOf"},
    {EdgeKind::Domain, "domain"},               {EdgeKind::Range, "range"},
    {EdgeKind::InstanceOf, "instanceOf"},
};

std::string count_text(std::string_view name, const std::optional<Count>& c) {
  return c ? " " + std::string(name) + "=" + std::to_string(*c) : "";
}

std::string restriction_label(const Restriction& r) {
  std::string s = r.on_property;
  s += count_text("C", r.c) + count_text("min", r.min_c) + count_text("max", r.max_c);
  if (r.to_class) s += " toClass " + *r.to_class;
  if (r.has_class) s += " hasClass " + *r.has_class;
  if (r.has_value) s += " hasValue " + value_text(*r.has_value);
  if (r.qualifier) {
    s += " hasClassQ " + r.qualifier->has_class_q + count_text("Cq", r.qualifier->cq) +
         count_text("minQ", r.qualifier->min_cq) + count_text("maxQ", r.qualifier->max_cq);
  }
  return s;
}

ViewNode make_node(const Identifier& id, NodeKind kind, std::string label) {
  return {id, kind, label.empty() ? id : std::move(label), std::string(color_key(kind))};
}

void finish_bounds(LayoutResult& r) {
  bool first = true;
  for (const auto& [id, p] : r.positions) {
    if (first) {
      r.min_x = r.max_x = p.x;
      r.min_y = r.max_y = p.y;
      first = false;
      continue;
    }
    r.min_x = std::min(r.min_x, p.x);
    r.max_x = std::max(r.max_x, p.x);
    r.min_y = std::min(r.min_y, p.y);
    r.max_y = std::max(r.max_y, p.y);
  }
}

double unit_interval(std::mt19937_64& rng) {
  // 53 random bits; std::uniform_real_distribution is not portable bit-for-bit.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool is_dot_id(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  if (!std::all_of(s.begin(), s.end(), [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; })) {
    return false;
  }
  std::string low(s);
  for (char& ch : low) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return low != "node" && low != "edge" && low != "graph" && low != "digraph" && low != "subgraph" && low != "strict";
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out + "\"";
}

std::string dot_id(std::string_view s) { return is_dot_id(s) ? std::string(s) : dot_quote(s); }

std::string number(double v) { return nlohmann::json(v).dump(); }

}  // namespace

std::string_view to_string(ViewKind k) { return name_of(kViewNames, k); }
std::string_view to_string(NodeKind k) { return name_of(kNodeNames, k); }
std::string_view to_string(EdgeKind k) { return name_of(kEdgeNames, k); }
std::optional<ViewKind> view_kind_from_string(std::string_view name) { return lookup(kViewNames, name); }
std::optional<NodeKind> node_kind_from_string(std::string_view name) { return lookup(kNodeNames, name); }
std::optional<EdgeKind> edge_kind_from_string(std::string_view name) { return lookup(kEdgeNames, name); }

std::string_view color_key(NodeKind k) {
  switch (k) {
    case NodeKind::Class: return "#4e79a7";
    case NodeKind::Restriction: return "#f28e2b";
    case NodeKind::Property: return "#59a14f";
    case NodeKind::Individual: return "#e15759";
  }
  return "#000000";
}

bool is_hierarchy_edge(EdgeKind k) {
  return k == EdgeKind::SubClassOf || k == EdgeKind::SubPropertyOf || k == EdgeKind::InstanceOf;
}

const ViewNode* ViewGraph::find(std::string_view id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const ViewNode& n, std::string_view key) { return n.id < key; });
  return it != nodes.end() && it->id == id ? &*it : nullptr;
}

ViewGraph build_view(const OntologyDoc& doc, ViewKind kind) {
  ViewGraph g;
  g.view = kind;
  std::map<Identifier, ViewNode> nodes;
  std::set<std::tuple<Identifier, Identifier, int>> edges;

  auto add_classes = [&] {
    for (const auto& [cid, cls] : doc.classes) {
      nodes.emplace(cid, make_node(cid, NodeKind::Class, cls.label));
      for (const auto& parent : cls.sub_class_of) {
        if (doc.classes.contains(parent)) edges.emplace(cid, parent, static_cast<int>(EdgeKind::SubClassOf));
      }
    }
  };

  switch (kind) {
    case ViewKind::Class:
      add_classes();
      break;
    case ViewKind::ClassWithRestrictions:
      add_classes();
      for (const auto& [rid, r] : doc.restrictions) {
        nodes.emplace(rid, make_node(rid, NodeKind::Restriction, restriction_label(r)));
        if (doc.properties.contains(r.on_property)) {
          nodes.emplace(r.on_property, make_node(r.on_property, NodeKind::Property, ""));
          edges.emplace(rid, r.on_property, static_cast<int>(EdgeKind::OnProperty));
        }
      }
      for (const auto& [cid, cls] : doc.classes) {
        for (ClassRelation rel : kAllClassRelations) {
          for (const auto& m : members(cls, rel)) {
            if (doc.restrictions.contains(m)) edges.emplace(cid, m, static_cast<int>(EdgeKind::RestrictionAnchor));
          }
        }
      }
      break;
    case ViewKind::Property:
      for (const auto& [pid, p] : doc.properties) {
        nodes.emplace(pid, make_node(pid, NodeKind::Property, ""));
        for (const auto& parent : p.sub_property_of) {
          if (doc.properties.contains(parent)) edges.emplace(pid, parent, static_cast<int>(EdgeKind::SubPropertyOf));
        }
      }
      break;
    case ViewKind::Individual:
      for (const auto& [iid, inst] : doc.instances) {
        nodes.emplace(iid, make_node(iid, NodeKind::Individual, ""));
        if (const ClassDef* c = doc.find_class(inst.class_id)) {
          nodes.emplace(c->id, make_node(c->id, NodeKind::Class, c->label));
          edges.emplace(iid, c->id, static_cast<int>(EdgeKind::InstanceOf));
        }
      }
      break;
  }

  for (auto& [id, n] : nodes) g.nodes.push_back(std::move(n));
  for (const auto& [from, to, k] : edges) g.edges.push_back({from, to, static_cast<EdgeKind>(k)});
  return g;
}

LayoutResult layout_hierarchical(const ViewGraph& g) {
  const std::size_t n = g.nodes.size();
  std::map<Identifier, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[g.nodes[i].id] = i;

  std::vector<std::vector<std::size_t>> parents(n), neighbours(n);
  for (const auto& e : g.edges) {
    auto f = index.find(e.from);
    auto t = index.find(e.to);
    if (f == index.end() || t == index.end()) continue;
    neighbours[f->second].push_back(t->second);
    neighbours[t->second].push_back(f->second);
    if (is_hierarchy_edge(e.kind)) parents[f->second].push_back(t->second);
  }

  // layer = longest path to a root; roots have no parents
  std::vector<int> layer(n, -1);
  std::vector<char> state(n, 0);  // 0 new, 1 on stack, 2 done
  for (std::size_t start = 0; start < n; ++start) {
    if (state[start]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    state[start] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < parents[v].size()) {
        const std::size_t p = parents[v][next++];
        if (state[p] == 1) throw Error(ErrorCode::CyclicHierarchy, "hierarchy cycle through " + g.nodes[p].id);
        if (state[p] == 0) {
          state[p] = 1;
          stack.emplace_back(p, 0);
        }
        continue;
      }
      int l = 0;
      for (std::size_t p : parents[v]) l = std::max(l, layer[p] + 1);
      layer[v] = l;
      state[v] = 2;
      stack.pop_back();
    }
  }

  const int depth = n ? *std::max_element(layer.begin(), layer.end()) + 1 : 0;
  std::vector<std::vector<std::size_t>> layers(static_cast<std::size_t>(depth));
  for (std::size_t i = 0; i < n; ++i) layers[static_cast<std::size_t>(layer[i])].push_back(i);  // id order
  std::vector<double> slot(n, 0);
  auto renumber = [&](const std::vector<std::size_t>& l) {
    for (std::size_t s = 0; s < l.size(); ++s) slot[l[s]] = static_cast<double>(s);
  };
  for (const auto& l : layers) renumber(l);

  auto sweep = [&](std::size_t li, int reference_layer) {
    auto& l = layers[li];
    std::vector<std::pair<double, std::size_t>> keyed;
    for (std::size_t v : l) {
      double sum = 0;
      int count = 0;
      for (std::size_t u : neighbours[v]) {
        if (layer[u] == reference_layer) {
          sum += slot[u];
          ++count;
        }
      }
      keyed.emplace_back(count ? sum / count : slot[v], v);
    }
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return g.nodes[a.second].id < g.nodes[b.second].id;
    });
    for (std::size_t s = 0; s < keyed.size(); ++s) l[s] = keyed[s].second;
    renumber(l);
  };
  for (int pass = 0; pass < 4; ++pass) {
    if (pass % 2 == 0) {
      for (int li = 1; li < depth; ++li) sweep(static_cast<std::size_t>(li), li - 1);
    } else {
      for (int li = depth - 2; li >= 0; --li) sweep(static_cast<std::size_t>(li), li + 1);
    }
  }

  LayoutResult r;
  for (std::size_t i = 0; i < n; ++i) {
    r.positions[g.nodes[i].id] = {slot[i] * kLayerSpacing, layer[i] * kLayerSpacing};
  }
  finish_bounds(r);
  return r;
}

LayoutResult layout_organic(const ViewGraph& g, std::uint64_t seed) {
  const std::size_t n = g.nodes.size();
  LayoutResult r;
  if (n == 0) return r;

  std::map<Identifier, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[g.nodes[i].id] = i;
  std::vector<std::pair<std::size_t, std::size_t>> springs;
  for (const auto& e : g.edges) {
    auto f = index.find(e.from);
    auto t = index.find(e.to);
    if (f != index.end() && t != index.end() && f->second != t->second) springs.emplace_back(f->second, t->second);
  }

  const double k = kOrganicEdgeLength;
  const double side = k * std::ceil(std::sqrt(static_cast<double>(n)));
  std::mt19937_64 rng(seed);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = unit_interval(rng) * side;
    y[i] = unit_interval(rng) * side;
  }

  const double t0 = side / 10.0 + k;
  std::vector<double> dx(n), dy(n);
  for (int it = 0; it < kOrganicIterations; ++it) {
    const double temperature = t0 * (1.0 - static_cast<double>(it) / kOrganicIterations);
    std::fill(dx.begin(), dx.end(), 0.0);
    std::fill(dy.begin(), dy.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double ex = x[i] - x[j];
        double ey = y[i] - y[j];
        double d = std::sqrt(ex * ex + ey * ey);
        if (d < 1e-9) {
          // coincident: separate along a direction fixed by the pair
          ex = 0.01 * static_cast<double>(j - i);
          ey = 0.01;
          d = std::sqrt(ex * ex + ey * ey);
        }
        const double f = k * k / d;
        dx[i] += ex / d * f;
        dy[i] += ey / d * f;
        dx[j] -= ex / d * f;
        dy[j] -= ey / d * f;
      }
    }
    for (const auto& [a, b] : springs) {
      const double ex = x[a] - x[b];
      const double ey = y[a] - y[b];
      const double d = std::sqrt(ex * ex + ey * ey);
      if (d < 1e-9) continue;
      const double f = d * d / k;
      dx[a] -= ex / d * f;
      dy[a] -= ey / d * f;
      dx[b] += ex / d * f;
      dy[b] += ey / d * f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double len = std::sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
      if (len < 1e-12) continue;
      const double step = std::min(len, temperature);
      x[i] += dx[i] / len * step;
      y[i] += dy[i] / len * step;
    }
  }

  // Final separation pass so no two nodes end closer than the minimum.
  for (int round = 0; round < 100; ++round) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double ex = x[j] - x[i];
        double ey = y[j] - y[i];
        double d = std::sqrt(ex * ex + ey * ey);
        if (d >= kOrganicMinDistance) continue;
        if (d < 1e-9) {
          ex = 1.0;
          ey = static_cast<double>(j - i) * 0.5;
          d = std::sqrt(ex * ex + ey * ey);
        }
        const double push = (kOrganicMinDistance - d) / 2.0 + 1e-6;
        x[i] -= ex / d * push;
        y[i] -= ey / d * push;
        x[j] += ex / d * push;
        y[j] += ey / d * push;
        moved = true;
      }
    }
    if (!moved) break;
  }

  for (std::size_t i = 0; i < n; ++i) r.positions[g.nodes[i].id] = {x[i], y[i]};
  finish_bounds(r);
  return r;
}

std::string export_graph(const ViewGraph& g, const LayoutResult& layout, GraphFormat format) {
  for (const auto& node : g.nodes) {
    if (!layout.positions.contains(node.id)) {
      throw Error(ErrorCode::MissingPosition, "layout has no position for " + node.id);
    }
  }
  std::vector<const ViewNode*> nodes;
  for (const auto& node : g.nodes) nodes.push_back(&node);
  std::sort(nodes.begin(), nodes.end(), [](const ViewNode* a, const ViewNode* b) { return a->id < b->id; });
  std::vector<const ViewEdge*> edges;
  for (const auto& e : g.edges) edges.push_back(&e);
  std::sort(edges.begin(), edges.end(), [](const ViewEdge* a, const ViewEdge* b) {
    return std::tie(a->from, a->to, a->kind) < std::tie(b->from, b->to, b->kind);
  });

  if (format == GraphFormat::Json) {
    nlohmann::json j;
    j["view"] = to_string(g.view);
    j["nodes"] = nlohmann::json::array();
    j["edges"] = nlohmann::json::array();
    for (const ViewNode* node : nodes) {
      const Point& p = layout.positions.at(node->id);
      j["nodes"].push_back({{"id", node->id},
                            {"kind", to_string(node->kind)},
                            {"label", node->label},
                            {"color", node->color},
                            {"x", p.x},
                            {"y", p.y}});
    }
    for (const ViewEdge* e : edges) {
      j["edges"].push_back({{"from", e->from}, {"to", e->to}, {"kind", to_string(e->kind)}});
    }
    return j.dump(2) + "\n";
  }

  std::string out = "digraph " + dot_quote(to_string(g.view)) + " {\n";
  for (const ViewNode* node : nodes) {
    const Point& p = layout.positions.at(node->id);
    out += "  " + dot_id(node->id) + " [label=" + dot_quote(node->label) + ", kind=" +
           dot_quote(to_string(node->kind)) + ", color=" + dot_quote(node->color) + ", pos=" +
           dot_quote(number(p.x) + "," + number(p.y)) + "];\n";
  }
  for (const ViewEdge* e : edges) {
    out += "  " + dot_id(e->from) + " -> " + dot_id(e->to) + " [kind=" + dot_quote(to_string(e->kind)) + "];\n";
  }
  return out + "}\n";
}

ParsedGraph parse_graph_json(std::string_view text) {
  ParsedGraph out;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.contains("view")) {
      auto v = view_kind_from_string(j.at("view").get<std::string>());
      if (!v) throw Error(ErrorCode::InvalidArgument, "unknown view kind");
      out.graph.view = *v;
    }
    for (const auto& n : j.at("nodes")) {
      auto kind = node_kind_from_string(n.at("kind").get<std::string>());
      if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown node kind");
      ViewNode node{n.at("id").get<std::string>(), *kind, n.value("label", std::string()),
                    n.value("color", std::string(color_key(*kind)))};
      out.layout.positions[node.id] = {n.at("x").get<double>(), n.at("y").get<double>()};
      out.graph.nodes.push_back(std::move(node));
    }
    for (const auto& e : j.at("edges")) {
      auto kind = edge_kind_from_string(e.at("kind").get<std::string>());
      if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown edge kind");
      out.graph.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(), *kind});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed graph JSON: ") + ex.what());
  }
  std::sort(out.graph.nodes.begin(), out.graph.nodes.end(),
            [](const ViewNode& a, const ViewNode& b) { return a.id < b.id; });
  finish_bounds(out.layout);
  return out;
}

}  // namespace imagespace
