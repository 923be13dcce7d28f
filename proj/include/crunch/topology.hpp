#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "crunch/units.hpp"

namespace crunch {

using NodeId = int;
using LinkId = int;

struct Link {
  NodeId a = -1;  // a < b always
  NodeId b = -1;
  Bandwidth capacity;

  NodeId other(NodeId n) const { return n == a ? b : a; }
};

/// Undirected multigraph-free network topology. Links have a single shared
/// capacity pool; at most one link per node pair, no self loops. The graph
/// is not required to be connected.
class Topology {
 public:
  NodeId add_node(const std::string& name) {
    if (by_name_.count(name)) {
      throw std::invalid_argument("duplicate node name: " + name);
    }
    NodeId id = static_cast<NodeId>(node_names_.size());
    node_names_.push_back(name);
    by_name_.emplace(name, id);
    adj_.emplace_back();
    return id;
  }

  LinkId add_link(NodeId a, NodeId b, Bandwidth capacity) {
    if (a == b) throw std::invalid_argument("self-loop link");
    if (a > b) std::swap(a, b);
    check_node(a);
    check_node(b);
    if (link_index_.count({a, b})) {
      throw std::invalid_argument("duplicate link " + node_names_[a] + "-" +
                                  node_names_[b]);
    }
    if (!capacity.positive()) throw std::invalid_argument("capacity must be positive");
    LinkId id = static_cast<LinkId>(links_.size());
    links_.push_back(Link{a, b, capacity});
    link_index_.emplace(std::make_pair(a, b), id);
    adj_[a].emplace_back(b, id);
    adj_[b].emplace_back(a, id);
    std::sort(adj_[a].begin(), adj_[a].end());
    std::sort(adj_[b].begin(), adj_[b].end());
    return id;
  }

  int node_count() const { return static_cast<int>(node_names_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }

  const Link& link(LinkId id) const { return links_.at(static_cast<size_t>(id)); }
  const std::vector<Link>& links() const { return links_; }

  const std::string& node_name(NodeId id) const {
    return node_names_.at(static_cast<size_t>(id));
  }

  NodeId node(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw std::invalid_argument("unknown node: " + name);
    return it->second;
  }

  std::optional<LinkId> find_link(NodeId a, NodeId b) const {
    if (a > b) std::swap(a, b);
    auto it = link_index_.find({a, b});
    if (it == link_index_.end()) return std::nullopt;
    return it->second;
  }

  LinkId link_between(NodeId a, NodeId b) const {
    auto l = find_link(a, b);
    if (!l) {
      throw std::invalid_argument("no link between " + node_name(a) + " and " +
                                  node_name(b));
    }
    return *l;
  }

  /// Neighbors of n as (neighbor, link) pairs, sorted by neighbor id.
  const std::vector<std::pair<NodeId, LinkId>>& neighbors(NodeId n) const {
    return adj_.at(static_cast<size_t>(n));
  }

  void set_link_capacity(LinkId id, Bandwidth capacity) {
    if (!capacity.positive()) throw std::invalid_argument("capacity must be positive");
    links_.at(static_cast<size_t>(id)).capacity = capacity;
  }

  /// Copy of this topology with every link capacity replaced.
  Topology with_uniform_capacity(Bandwidth capacity) const {
    Topology t = *this;
    for (auto& l : t.links_) l.capacity = capacity;
    return t;
  }

  static Topology from_json(const nlohmann::json& j) {
    Topology t;
    for (const auto& n : j.at("nodes")) t.add_node(n.get<std::string>());
    for (const auto& l : j.at("links")) {
      t.add_link(t.node(l.at("a").get<std::string>()),
                 t.node(l.at("b").get<std::string>()),
                 Bandwidth::from_gbps(l.at("capacity_gbps").get<double>()));
    }
    return t;
  }

  static Topology load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }

  nlohmann::json to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : node_names_) nodes.push_back(n);
    nlohmann::json links = nlohmann::json::array();
    for (const auto& l : links_) {
      links.push_back({{"a", node_name(l.a)},
                       {"b", node_name(l.b)},
                       {"capacity_gbps", l.capacity.gbps()}});
    }
    return {{"nodes", nodes}, {"links", links}};
  }

 private:
  void check_node(NodeId n) const {
    if (n < 0 || n >= node_count()) throw std::invalid_argument("unknown node id");
  }

  std::vector<std::string> node_names_;
  std::map<std::string, NodeId> by_name_;
  std::vector<Link> links_;
  std::vector<std::vector<std::pair<NodeId, LinkId>>> adj_;
  std::map<std::pair<NodeId, NodeId>, LinkId> link_index_;
};

/// Simple path: an ordered node walk with no repeated node, plus the links
/// it traverses. nodes.size() == links.size() + 1.
struct Path {
  std::vector<NodeId> nodes;
  std::vector<LinkId> links;

  int hops() const { return static_cast<int>(links.size()); }
  bool empty() const { return links.empty(); }

  std::string to_string(const Topology& t) const {
    std::string s;
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (i) s += "-";
      s += t.node_name(nodes[i]);
    }
    return s;
  }
};

inline Path make_path(const Topology& t, const std::vector<NodeId>& nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("path needs >= 2 nodes");
  Path p;
  p.nodes = nodes;
  std::vector<NodeId> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("path repeats a node");
  }
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    p.links.push_back(t.link_between(nodes[i], nodes[i + 1]));
  }
  return p;
}

inline Path make_path_by_name(const Topology& t,
                              const std::vector<std::string>& names) {
  std::vector<NodeId> nodes;
  nodes.reserve(names.size());
  for (const auto& n : names) nodes.push_back(t.node(n));
  return make_path(t, nodes);
}

}  // namespace crunch
