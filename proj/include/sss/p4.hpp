#pragma once

// Reduction to zero-weight simple 4-paths in a node weighted graph. The four
// representation lists become four vertex layers with weights shifted by a
// constant big enough that only one-vertex-per-layer quadruples can cancel;
// edges join consecutive layers exactly when the witnesses are disjoint.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sss/index_set.hpp"
#include "sss/int128.hpp"
#include "sss/lists.hpp"
#include "sss/meter.hpp"

namespace sss {

struct GraphVertex {
  int id = 0;
  i128 weight = 0;
  int layer = -1;          // 0..3 for built graphs, -1 for freeform
  int member_index = -1;   // position in the originating list
  IndexSet witness;
};

struct NodeWeightedGraph {
  std::vector<GraphVertex> vertices;
  std::vector<std::vector<uint64_t>> adj;  // bitset rows
  int64_t edge_count = 0;

  int add_vertex(i128 weight, int layer = -1, int member_index = -1, IndexSet witness = {}) {
    int id = (int)vertices.size();
    if (id >= 4000) throw std::length_error("NodeWeightedGraph: vertex cap 4000");
    vertices.push_back(GraphVertex{id, weight, layer, member_index, witness});
    size_t words = (vertices.size() + 63) / 64;
    for (auto& row : adj) row.resize(words, 0);
    adj.emplace_back(words, 0);
    return id;
  }

  void add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("add_edge: self-loop");
    if (!has_edge(u, v)) ++edge_count;
    adj[u][v / 64] |= 1ull << (v % 64);
    adj[v][u / 64] |= 1ull << (u % 64);
  }

  bool has_edge(int u, int v) const { return adj[u][v / 64] >> (v % 64) & 1; }

  std::vector<int> neighbors(int u) const {
    std::vector<int> out;
    for (size_t w = 0; w < adj[u].size(); ++w) {
      uint64_t bits = adj[u][w];
      while (bits) {
        out.push_back((int)(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }
};

// Weight shifts per layer: +1, +2, +4, -7 times the big constant. The only
// multiset of coefficients drawn from {1,2,4,-7} (4 draws, repetition allowed)
// that sums to zero is one of each, so any cancelling quadruple is a
// transversal of the layers.
inline NodeWeightedGraph build_p4_graph(const LevelTwoLists& lists, u128 t,
                                        MemoryMeter* meter = nullptr) {
  i128 big = (i128)(100 * lists.instance_total);
  NodeWeightedGraph g;
  const std::vector<ListMember>* layer_lists[4] = {&lists.l1, &lists.l2, &lists.r2, &lists.r1};
  i128 shift[4] = {big, 2 * big, 4 * big, -7 * big - (i128)t};
  std::vector<std::vector<int>> ids(4);
  for (int layer = 0; layer < 4; ++layer) {
    const auto& members = *layer_lists[layer];
    ids[layer].reserve(members.size());
    for (int i = 0; i < (int)members.size(); ++i)
      ids[layer].push_back(
          g.add_vertex(shift[layer] + (i128)members[i].weight, layer, i, members[i].witness));
  }
  for (int layer = 0; layer + 1 < 4; ++layer)
    for (int a : ids[layer])
      for (int b : ids[layer + 1])
        if (g.vertices[a].witness.disjoint(g.vertices[b].witness)) g.add_edge(a, b);
  if (meter) meter->add((int64_t)g.vertices.size() + 2 * g.edge_count);
  return g;
}

inline int64_t graph_entries(const NodeWeightedGraph& g) {
  return (int64_t)g.vertices.size() + 2 * g.edge_count;
}

using P4Path = std::array<int, 4>;

// Exact detector: every edge in turn as the middle of the path, endpoints
// from the two neighborhoods. First hit in (edge, v1, v4) scan order.
inline std::optional<P4Path> naive_p4_solve(const NodeWeightedGraph& g) {
  int n = (int)g.vertices.size();
  for (int u = 0; u < n; ++u) {
    auto nu = g.neighbors(u);
    for (int v = u + 1; v < n; ++v) {
      if (!g.has_edge(u, v)) continue;
      i128 mid = g.vertices[u].weight + g.vertices[v].weight;
      for (int v1 : nu) {
        if (v1 == v) continue;
        i128 three = mid + g.vertices[v1].weight;
        for (int v4 : g.neighbors(v)) {
          if (v4 == u || v4 == v1) continue;
          if (three + g.vertices[v4].weight == 0) return P4Path{v1, u, v, v4};
        }
      }
    }
  }
  return std::nullopt;
}

// Map a zero-weight path in a built graph back to the subset it encodes,
// checking the soundness conditions along the way.
inline std::pair<IndexSet, u128> decode_p4_path(const NodeWeightedGraph& g,
                                                const LevelTwoLists& lists, const P4Path& path) {
  std::array<const GraphVertex*, 4> by_layer = {nullptr, nullptr, nullptr, nullptr};
  for (int v : path) {
    const auto& vert = g.vertices[v];
    if (vert.layer < 0 || vert.layer > 3 || by_layer[vert.layer])
      throw std::logic_error("decode_p4_path: path is not a layer transversal");
    by_layer[vert.layer] = &vert;
  }
  const std::vector<ListMember>* layer_lists[4] = {&lists.l1, &lists.l2, &lists.r2, &lists.r1};
  IndexSet witness;
  u128 sum = 0;
  for (int layer = 0; layer < 4; ++layer) {
    const ListMember& mem = (*layer_lists[layer])[by_layer[layer]->member_index];
    if (!witness.disjoint(mem.witness))
      throw std::logic_error("decode_p4_path: witnesses overlap");
    witness = witness | mem.witness;
    sum += mem.weight;
  }
  if (sum != lists.target) throw std::logic_error("decode_p4_path: weights do not reach target");
  return {witness, sum};
}

// Edge-list text dump: one "id layer weight" line per vertex, one "u v" line
// per edge (u < v), both in ascending order.
inline std::string dump_graph(const NodeWeightedGraph& g) {
  std::string out;
  out += "vertices " + std::to_string(g.vertices.size()) + " edges " +
         std::to_string(g.edge_count) + "\n";
  for (const auto& v : g.vertices)
    out += std::to_string(v.id) + " " + std::to_string(v.layer) + " " + to_string(v.weight) + "\n";
  for (int u = 0; u < (int)g.vertices.size(); ++u)
    for (int v : g.neighbors(u))
      if (u < v) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

}  // namespace sss
