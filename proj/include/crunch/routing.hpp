#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "crunch/network_state.hpp"
#include "crunch/topology.hpp"

namespace crunch {

namespace detail {

using LinkFilter = std::function<bool(LinkId)>;

/// BFS hop distances from t over links admitted by the filter; -1 where
/// unreachable. blocked_nodes (if non-null) marks nodes to skip.
inline std::vector<int> hop_distances_to(const Topology& topo, NodeId t,
                                         const LinkFilter& admit,
                                         const std::vector<char>* blocked_nodes) {
  std::vector<int> dist(static_cast<size_t>(topo.node_count()), -1);
  if (blocked_nodes && (*blocked_nodes)[static_cast<size_t>(t)]) return dist;
  std::queue<NodeId> q;
  dist[static_cast<size_t>(t)] = 0;
  q.push(t);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (auto [nb, l] : topo.neighbors(u)) {
      if (dist[static_cast<size_t>(nb)] != -1) continue;
      if (blocked_nodes && (*blocked_nodes)[static_cast<size_t>(nb)]) continue;
      if (admit && !admit(l)) continue;
      dist[static_cast<size_t>(nb)] = dist[static_cast<size_t>(u)] + 1;
      q.push(nb);
    }
  }
  return dist;
}

/// Deterministic min-hop path s->t: walks the BFS distance field greedily,
/// choosing the smallest (or, when prefer_large, the largest) next node id
/// among those still on a shortest path. Smallest yields the
/// lexicographically first node sequence, largest the lexicographically
/// last.
inline std::optional<Path> lex_shortest_path(const Topology& topo, NodeId s, NodeId t,
                                             const LinkFilter& admit,
                                             const std::vector<char>* blocked_nodes,
                                             bool prefer_large) {
  std::vector<int> dist = hop_distances_to(topo, t, admit, blocked_nodes);
  if (blocked_nodes && (*blocked_nodes)[static_cast<size_t>(s)]) return std::nullopt;
  if (dist[static_cast<size_t>(s)] < 0) return std::nullopt;
  Path p;
  p.nodes.push_back(s);
  NodeId cur = s;
  while (cur != t) {
    int d = dist[static_cast<size_t>(cur)];
    NodeId best = -1;
    LinkId best_link = -1;
    for (auto [nb, l] : topo.neighbors(cur)) {
      if (dist[static_cast<size_t>(nb)] != d - 1) continue;
      if (blocked_nodes && (*blocked_nodes)[static_cast<size_t>(nb)]) continue;
      if (admit && !admit(l)) continue;
      if (best == -1 || (prefer_large ? nb > best : nb < best)) {
        best = nb;
        best_link = l;
      }
    }
    p.nodes.push_back(best);
    p.links.push_back(best_link);
    cur = best;
  }
  return p;
}

/// Total order on paths: fewer hops first, then node sequence in
/// descending lexicographic order. This is the enumeration order of
/// k_shortest_paths.
inline bool path_order_before(const Path& a, const Path& b) {
  if (a.hops() != b.hops()) return a.hops() < b.hops();
  return std::lexicographical_compare(b.nodes.begin(), b.nodes.end(),
                                      a.nodes.begin(), a.nodes.end());
}

}  // namespace detail

/// Minimum-hop simple path from s to t whose every link has free capacity
/// >= bw, or nullopt. Ties are broken toward the lexicographically smallest
/// node-id sequence.
inline std::optional<Path> capacitated_shortest_path(const NetworkState& state,
                                                     NodeId s, NodeId t, Bandwidth bw) {
  if (s == t) throw std::invalid_argument("source equals destination");
  if (!bw.positive()) throw std::invalid_argument("bandwidth must be positive");
  auto admit = [&state, bw](LinkId l) { return state.free_capacity(l) >= bw; };
  return detail::lex_shortest_path(state.topology(), s, t, admit, nullptr,
                                   /*prefer_large=*/false);
}

/// Up to k loopless paths between s and t on the bare topology, ordered by
/// hop count and, among equal hop counts, by descending lexicographic node
/// sequence (Yen's algorithm under that total order).
inline std::vector<Path> k_shortest_paths(const Topology& topo, NodeId s, NodeId t,
                                          int k) {
  if (s == t) throw std::invalid_argument("source equals destination");
  if (k < 1) throw std::invalid_argument("k must be >= 1");

  std::vector<Path> accepted;
  auto first = detail::lex_shortest_path(topo, s, t, nullptr, nullptr,
                                         /*prefer_large=*/true);
  if (!first) return accepted;
  accepted.push_back(*first);

  auto cmp = [](const Path& a, const Path& b) { return detail::path_order_before(a, b); };
  std::vector<Path> candidates;
  std::set<std::vector<NodeId>> seen;
  seen.insert(first->nodes);

  while (static_cast<int>(accepted.size()) < k) {
    const Path& prev = accepted.back();
    for (int j = 0; j < prev.hops(); ++j) {
      NodeId spur = prev.nodes[static_cast<size_t>(j)];
      std::set<LinkId> removed_links;
      for (const Path& p : accepted) {
        if (p.hops() > j &&
            std::equal(p.nodes.begin(), p.nodes.begin() + j + 1, prev.nodes.begin())) {
          removed_links.insert(p.links[static_cast<size_t>(j)]);
        }
      }
      std::vector<char> blocked(static_cast<size_t>(topo.node_count()), 0);
      for (int i = 0; i < j; ++i) blocked[static_cast<size_t>(prev.nodes[static_cast<size_t>(i)])] = 1;
      auto admit = [&removed_links](LinkId l) { return !removed_links.count(l); };
      auto spur_path = detail::lex_shortest_path(topo, spur, t, admit, &blocked,
                                                 /*prefer_large=*/true);
      if (!spur_path) continue;
      Path cand;
      cand.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + j);
      cand.nodes.insert(cand.nodes.end(), spur_path->nodes.begin(), spur_path->nodes.end());
      cand.links.assign(prev.links.begin(), prev.links.begin() + j);
      cand.links.insert(cand.links.end(), spur_path->links.begin(), spur_path->links.end());
      if (seen.insert(cand.nodes).second) candidates.push_back(std::move(cand));
    }
    if (candidates.empty()) break;
    auto best = std::min_element(candidates.begin(), candidates.end(), cmp);
    accepted.push_back(std::move(*best));
    candidates.erase(best);
  }
  return accepted;
}

/// Hop count of the shortest s-t path on the bare topology, or nullopt if
/// the pair is disconnected.
inline std::optional<int> shortest_hop_count(const Topology& topo, NodeId s, NodeId t) {
  if (s == t) throw std::invalid_argument("source equals destination");
  auto dist = detail::hop_distances_to(topo, t, nullptr, nullptr);
  if (dist[static_cast<size_t>(s)] < 0) return std::nullopt;
  return dist[static_cast<size_t>(s)];
}

}  // namespace crunch
