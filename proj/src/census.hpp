// Internal: exact cardinality of the set of accepting infinite paths in a
// finite graph under generalized Buchi conditions (node conditions and edge
// conditions that must each recur infinitely often).
//
// Classification on the reachable part:
//   - Uncountable  iff some good SCC has more edges than nodes (two distinct
//     cycles exist, so independent cycle choices embed the full binary tree);
//   - CountablyInfinite  iff not uncountable and some cyclic SCC reaches a
//     good SCC other than itself (pumping the former yields unboundedly many
//     distinct finite approaches);
//   - Finite otherwise: every good SCC is a simple cycle that no other cycle
//     reaches, so accepting paths are walks in a DAG followed by one cycle
//     repeated forever, and counting walks counts paths exactly.
// A good SCC contains, internally, a witness for every required condition.
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

namespace omega::census {

struct Graph {
  int n = 0;
  int init = 0;
  std::vector<int> edge_from, edge_to;
  std::vector<unsigned> edge_bits;
  std::vector<unsigned> node_bits;
  unsigned need_node = 0;  // node-condition mask that must recur
  unsigned need_edge = 0;  // edge-condition mask that must recur

  int add_edge(int from, int to, unsigned bits) {
    edge_from.push_back(from);
    edge_to.push_back(to);
    edge_bits.push_back(bits);
    return static_cast<int>(edge_from.size()) - 1;
  }
  std::size_t edge_count() const { return edge_from.size(); }
};

struct Result {
  enum class Kind { Finite, Aleph0, Uncountable };
  Kind kind = Kind::Finite;
  std::uint64_t count = 0;  // exact when Finite (saturated at kCountCap)
  int unc_scc_node = -1;    // a node of the fat good SCC when Uncountable
};

inline constexpr std::uint64_t kCountCap = std::uint64_t{1} << 40;

struct SccInfo {
  std::vector<int> comp;  // node -> SCC id
  int count = 0;
};

inline SccInfo tarjan(const Graph& g, const std::vector<char>& alive) {
  SccInfo out;
  out.comp.assign(g.n, -1);
  std::vector<int> idx(g.n, -1), low(g.n, 0), stk;
  std::vector<char> on(g.n, 0);
  std::vector<std::vector<std::pair<int, int>>> adj(g.n);
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (alive[g.edge_from[e]] && alive[g.edge_to[e]])
      adj[g.edge_from[e]].push_back({static_cast<int>(e), g.edge_to[e]});
  int counter = 0;
  // Iterative Tarjan to be safe on large regions.
  struct Frame {
    int v;
    std::size_t next = 0;
  };
  for (int root = 0; root < g.n; ++root) {
    if (!alive[root] || idx[root] >= 0) continue;
    std::vector<Frame> call{{root}};
    idx[root] = low[root] = counter++;
    stk.push_back(root);
    on[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.v].size()) {
        int w = adj[f.v][f.next++].second;
        if (idx[w] < 0) {
          idx[w] = low[w] = counter++;
          stk.push_back(w);
          on[w] = 1;
          call.push_back({w});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], idx[w]);
        }
      } else {
        if (low[f.v] == idx[f.v]) {
          while (true) {
            int w = stk.back();
            stk.pop_back();
            on[w] = 0;
            out.comp[w] = out.count;
            if (w == f.v) break;
          }
          ++out.count;
        }
        int v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
  return out;
}

inline Result analyze(const Graph& g) {
  Result res;
  if (g.n == 0) return res;

  std::vector<char> alive(g.n, 0);
  {
    std::deque<int> work{g.init};
    alive[g.init] = 1;
    std::vector<std::vector<int>> adj(g.n);
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      adj[g.edge_from[e]].push_back(g.edge_to[e]);
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (int w : adj[v])
        if (!alive[w]) {
          alive[w] = 1;
          work.push_back(w);
        }
    }
  }

  SccInfo scc = tarjan(g, alive);
  std::vector<unsigned> scc_node_bits(scc.count, 0), scc_edge_bits(scc.count, 0);
  std::vector<int> scc_nodes(scc.count, 0), scc_edges(scc.count, 0);
  for (int v = 0; v < g.n; ++v)
    if (alive[v]) {
      scc_nodes[scc.comp[v]]++;
      scc_node_bits[scc.comp[v]] |= g.node_bits[v];
    }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    int a = g.edge_from[e], b = g.edge_to[e];
    if (!alive[a] || !alive[b]) continue;
    if (scc.comp[a] == scc.comp[b]) {
      scc_edges[scc.comp[a]]++;
      scc_edge_bits[scc.comp[a]] |= g.edge_bits[e];
    }
  }
  std::vector<char> good(scc.count, 0), cyclic(scc.count, 0);
  for (int s = 0; s < scc.count; ++s) {
    cyclic[s] = scc_edges[s] > 0;
    good[s] = cyclic[s] && (scc_node_bits[s] & g.need_node) == g.need_node &&
              (scc_edge_bits[s] & g.need_edge) == g.need_edge;
  }

  for (int v = 0; v < g.n; ++v)
    if (alive[v] && good[scc.comp[v]] && scc_edges[scc.comp[v]] > scc_nodes[scc.comp[v]]) {
      res.kind = Result::Kind::Uncountable;
      res.unc_scc_node = v;
      return res;
    }

  // SCC DAG reachability to good SCCs.
  std::vector<char> reaches_good(scc.count, 0);
  for (int s = 0; s < scc.count; ++s) reaches_good[s] = good[s];
  // Tarjan numbers SCCs in reverse topological order: successors first.
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    int a = g.edge_from[e], b = g.edge_to[e];
    if (!alive[a] || !alive[b]) continue;
    (void)a;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      int a = g.edge_from[e], b = g.edge_to[e];
      if (!alive[a] || !alive[b]) continue;
      if (reaches_good[scc.comp[b]] && !reaches_good[scc.comp[a]]) {
        reaches_good[scc.comp[a]] = 1;
        changed = true;
      }
    }
  }

  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    int a = g.edge_from[e], b = g.edge_to[e];
    if (!alive[a] || !alive[b]) continue;
    int sa = scc.comp[a], sb = scc.comp[b];
    if (sa == sb) continue;
    // An inter-SCC edge out of a cyclic SCC that can still reach a good SCC
    // pumps unboundedly many distinct approaches.
    if (cyclic[sa] && reaches_good[sb]) {
      res.kind = Result::Kind::Aleph0;
      return res;
    }
  }
  // A cyclic non-good SCC whose own members reach a good SCC is the same
  // situation when the good SCC is reached after leaving; a good SCC
  // reaching another good SCC is caught above too.  What remains: walks in
  // a DAG, then one simple good cycle forever.

  std::vector<std::uint64_t> walks(g.n, 0);
  std::vector<char> relevant(g.n, 0);
  {
    // Nodes that reach a good SCC, via reverse BFS over non-internal edges
    // plus good nodes themselves.
    std::vector<std::vector<int>> radj(g.n);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      int a = g.edge_from[e], b = g.edge_to[e];
      if (!alive[a] || !alive[b]) continue;
      radj[b].push_back(a);
    }
    std::deque<int> work;
    for (int v = 0; v < g.n; ++v)
      if (alive[v] && good[scc.comp[v]]) {
        relevant[v] = 1;
        work.push_back(v);
      }
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (int u : radj[v])
        if (!relevant[u]) {
          relevant[u] = 1;
          work.push_back(u);
        }
    }
  }
  if (!relevant[g.init]) {
    res.kind = Result::Kind::Finite;
    res.count = 0;
    return res;
  }

  // DAG walk counting on relevant nodes, excluding edges internal to good
  // SCCs (the settled cycles themselves).
  std::vector<std::vector<std::pair<int, int>>> dag(g.n);
  std::vector<int> indeg(g.n, 0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    int a = g.edge_from[e], b = g.edge_to[e];
    if (!alive[a] || !alive[b] || !relevant[a] || !relevant[b]) continue;
    if (scc.comp[a] == scc.comp[b] && good[scc.comp[a]]) continue;
    dag[a].push_back({static_cast<int>(e), b});
    indeg[b]++;
  }
  std::deque<int> topo;
  for (int v = 0; v < g.n; ++v)
    if (alive[v] && relevant[v] && indeg[v] == 0) topo.push_back(v);
  walks[g.init] = 1;
  std::size_t seen = 0;
  auto sat_add = [](std::uint64_t a, std::uint64_t b) {
    return a >= kCountCap || b >= kCountCap || a + b >= kCountCap ? kCountCap : a + b;
  };
  while (!topo.empty()) {
    int v = topo.front();
    topo.pop_front();
    ++seen;
    for (auto [e, w] : dag[v]) {
      (void)e;
      walks[w] = sat_add(walks[w], walks[v]);
      if (--indeg[w] == 0) topo.push_back(w);
    }
  }
  (void)seen;

  // Each accepting path is a walk ending at its first contact with the good
  // cycle it settles in, then the cycle forever.
  std::uint64_t total = 0;
  for (int v = 0; v < g.n; ++v) {
    if (!alive[v] || !good[scc.comp[v]]) continue;
    total = sat_add(total, walks[v]);
  }
  res.kind = Result::Kind::Finite;
  res.count = total;
  return res;
}

}  // namespace omega::census
