#include "omegamb/bpda.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "census.hpp"

namespace omega {

Bpda::Bpda(std::vector<std::string> states, Alphabet input_alphabet,
           Alphabet stack_alphabet, std::string initial_state,
           char initial_stack, std::vector<std::string> final_states,
           std::vector<PdaTransition> transitions)
    : states_(std::move(states)),
      input_alphabet_(std::move(input_alphabet)),
      stack_alphabet_(std::move(stack_alphabet)),
      initial_stack_(initial_stack),
      final_names_(std::move(final_states)),
      transitions_(std::move(transitions)) {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].empty()) throw ParseError("state names must be non-empty");
    if (!name_index_.emplace(states_[i], i).second)
      throw ParseError("duplicate state '" + states_[i] + "'");
  }
  auto state_of = [&](const std::string& name) {
    auto it = name_index_.find(name);
    if (it == name_index_.end())
      throw ParseError("undeclared state '" + name + "'");
    return it->second;
  };
  initial_ = state_of(initial_state);
  if (!stack_alphabet_.contains(initial_stack_))
    throw ParseError("initial stack symbol is not in the stack alphabet");
  final_.assign(states_.size(), false);
  for (const auto& f : final_names_) final_[state_of(f)] = true;

  const std::size_t slots = input_alphabet_.size() + 1;
  index_.assign(states_.size(),
                std::vector<std::vector<std::vector<std::size_t>>>(
                    slots,
                    std::vector<std::vector<std::size_t>>(stack_alphabet_.size())));
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    const auto& tr = transitions_[t];
    std::size_t from = state_of(tr.from);
    state_of(tr.to);
    if (!stack_alphabet_.contains(tr.top))
      throw ParseError("transition top symbol not in stack alphabet");
    for (char c : tr.push)
      if (!stack_alphabet_.contains(c))
        throw ParseError("transition push symbol not in stack alphabet");
    std::size_t slot = 0;
    if (tr.input) {
      if (!input_alphabet_.contains(*tr.input))
        throw ParseError("transition input letter not in input alphabet");
      slot = 1 + input_alphabet_.index(*tr.input);
    }
    index_[from][slot][stack_alphabet_.index(tr.top)].push_back(t);
  }
}

std::size_t Bpda::state_index(const std::string& name) const {
  auto it = name_index_.find(name);
  if (it == name_index_.end()) throw ParseError("undeclared state '" + name + "'");
  return it->second;
}

const std::vector<std::size_t>& Bpda::delta(std::size_t state, char input,
                                            char top) const {
  static const std::vector<std::size_t> none;
  if (!stack_alphabet_.contains(top)) return none;
  if (input != 0 && !input_alphabet_.contains(input)) return none;
  std::size_t slot = input == 0 ? 0 : 1 + input_alphabet_.index(input);
  return index_[state][slot][stack_alphabet_.index(top)];
}

std::vector<std::pair<Config, int>> step(const Bpda& a, const Config& c,
                                         char letter) {
  std::vector<std::pair<Config, int>> out;
  if (c.stack.empty()) return out;  // the empty stack is dead
  for (std::size_t t : a.delta(c.state, letter, c.stack[0])) {
    const auto& tr = a.transitions()[t];
    Config next;
    next.state = a.state_index(tr.to);
    next.stack = tr.push + c.stack.substr(1);
    out.push_back({std::move(next), letter == 0 ? 0 : 1});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact emptiness: pop saturation + post* reachable heads + repeating heads.
// ---------------------------------------------------------------------------

namespace {

struct CompiledPda {
  const Bpda* a;
  int nq, ng;
  struct T {
    int from, to;
    bool reads;  // consumes an input letter
    int top;
    std::vector<int> push;
  };
  std::vector<T> ts;
  int sym(char c) const { return static_cast<int>(a->stack_alphabet().index(c)); }
};

CompiledPda compile_pda(const Bpda& a) {
  CompiledPda c;
  c.a = &a;
  c.nq = static_cast<int>(a.state_count());
  c.ng = static_cast<int>(a.stack_alphabet().size());
  for (const auto& tr : a.transitions()) {
    CompiledPda::T t;
    t.from = static_cast<int>(a.state_index(tr.from));
    t.to = static_cast<int>(a.state_index(tr.to));
    t.reads = tr.input.has_value();
    t.top = c.sym(tr.top);
    for (char x : tr.push) t.push.push_back(c.sym(x));
    c.ts.push_back(std::move(t));
  }
  return c;
}

// popb(p, X, q) bits: 1 = X can be popped going from p to q, 2 = a final
// state can be visited on the way (endpoints included), 4 = an input letter
// can be consumed on the way.
struct PopRel {
  int nq = 0, ng = 0;
  std::vector<unsigned> bits;
  unsigned& at(int p, int x, int q) {
    return bits[(static_cast<std::size_t>(p) * ng + x) * nq + q];
  }
  unsigned get(int p, int x, int q) const {
    return bits[(static_cast<std::size_t>(p) * ng + x) * nq + q];
  }
};

PopRel pop_saturate(const CompiledPda& c) {
  PopRel pr;
  pr.nq = c.nq;
  pr.ng = c.ng;
  pr.bits.assign(static_cast<std::size_t>(c.nq) * c.ng * c.nq, 0);
  auto fbit = [&](int q) { return c.a->is_final(q) ? 2u : 0u; };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : c.ts) {
      unsigned base = 1u | fbit(t.from) | fbit(t.to) | (t.reads ? 4u : 0u);
      if (t.push.empty()) {
        unsigned& cell = pr.at(t.from, t.top, t.to);
        if ((cell | base) != cell) { cell |= base; changed = true; }
        continue;
      }
      // Take t, then pop its whole push string: DP over intermediate states
      // with accumulated bits.
      std::vector<unsigned> cur(c.nq, 0);
      cur[t.to] = base;
      for (int sym : t.push) {
        std::vector<unsigned> nxt(c.nq, 0);
        for (int r = 0; r < c.nq; ++r) {
          if (!cur[r]) continue;
          for (int s = 0; s < c.nq; ++s) {
            unsigned pb = pr.get(r, sym, s);
            if (pb & 1u) nxt[s] |= cur[r] | pb;
          }
        }
        cur = std::move(nxt);
      }
      for (int s = 0; s < c.nq; ++s) {
        if (!cur[s]) continue;
        unsigned& cell = pr.at(t.from, t.top, s);
        if ((cell | cur[s]) != cell) { cell |= cur[s]; changed = true; }
      }
    }
  }
  return pr;
}

// Reachable heads (q, X): the set of tops of configurations reachable from
// the initial one, via post* saturation of a P-automaton.
std::vector<char> reachable_heads(const CompiledPda& c) {
  int n_states = c.nq + 1;  // PDA states + accepting automaton state c.nq
  std::vector<std::vector<int>> chain(c.ts.size());
  for (std::size_t t = 0; t < c.ts.size(); ++t)
    for (std::size_t j = 2; j <= c.ts[t].push.size(); ++j) {
      chain[t].push_back(n_states++);
      (void)j;
    }

  std::set<std::tuple<int, int, int>> edges;  // (from, symbol, to)
  std::set<std::pair<int, int>> eps;
  auto add_edge = [&](int f, int s, int t2) { return edges.emplace(f, s, t2).second; };
  add_edge(static_cast<int>(c.a->initial_index()), c.sym(c.a->initial_stack()),
           c.nq);

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::tuple<int, int, int>> snapshot(edges.begin(), edges.end());
    for (std::size_t ti = 0; ti < c.ts.size(); ++ti) {
      const auto& t = c.ts[ti];
      for (auto [f, s, to] : snapshot) {
        if (f != t.from || s != t.top) continue;
        const int k = static_cast<int>(t.push.size());
        if (k == 0) {
          if (eps.emplace(t.to, to).second) changed = true;
        } else if (k == 1) {
          if (add_edge(t.to, t.push[0], to)) changed = true;
        } else {
          if (add_edge(t.to, t.push[0], chain[ti][0])) changed = true;
          for (int j = 1; j < k - 1; ++j)
            if (add_edge(chain[ti][j - 1], t.push[j], chain[ti][j])) changed = true;
          if (add_edge(chain[ti][k - 2], t.push[k - 1], to)) changed = true;
        }
      }
    }
    std::vector<std::pair<int, int>> eps_snapshot(eps.begin(), eps.end());
    for (auto [q, s] : eps_snapshot) {
      std::vector<std::tuple<int, int, int>> snap(edges.begin(), edges.end());
      for (auto [f, y, to] : snap)
        if (f == s)
          if (add_edge(q, y, to)) changed = true;
      for (auto [s2, s3] : eps_snapshot)
        if (s2 == s)
          if (eps.emplace(q, s3).second) changed = true;
    }
  }

  std::vector<char> cor(n_states, 0);
  cor[c.nq] = 1;
  bool ch = true;
  while (ch) {
    ch = false;
    for (auto [f, s, to] : edges) {
      (void)s;
      if (cor[to] && !cor[f]) { cor[f] = 1; ch = true; }
    }
    for (auto [q, s] : eps)
      if (cor[s] && !cor[q]) { cor[q] = 1; ch = true; }
  }

  std::vector<char> head(static_cast<std::size_t>(c.nq) * c.ng, 0);
  for (auto [f, s, to] : edges)
    if (f < c.nq && cor[to]) head[static_cast<std::size_t>(f) * c.ng + s] = 1;
  return head;
}

// ---------------------------------------------------------------------------
// Bounded product region of (configuration, lasso phase) nodes.
// ---------------------------------------------------------------------------

struct Region {
  struct Node {
    Config cfg;
    std::size_t phase;
  };
  std::vector<Node> nodes;
  std::map<std::pair<Config, std::size_t>, int> ids;
  std::vector<int> efrom, eto;
  std::vector<std::size_t> etrans;  // transition id in the automaton
  std::vector<char> eflag;          // 1 when a letter was consumed
  std::vector<std::vector<int>> out;
  bool truncated = false;

  int intern(const Config& cfg, std::size_t phase) {
    auto key = std::make_pair(cfg, phase);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    ids.emplace(std::move(key), id);
    nodes.push_back({cfg, phase});
    out.emplace_back();
    return id;
  }
};

Region build_region(const Bpda& a, const Lasso& w, std::size_t step_bound,
                    std::size_t stack_bound, std::size_t node_cap = 200000) {
  Region r;
  Config init{a.initial_index(), std::string(1, a.initial_stack())};
  int root = r.intern(init, 0);
  std::deque<std::pair<int, std::size_t>> work{{root, 0}};
  std::vector<char> expanded{0};
  auto ensure = [&] { while (expanded.size() < r.nodes.size()) expanded.push_back(0); };
  while (!work.empty()) {
    auto [v, d] = work.front();
    work.pop_front();
    if (expanded[v]) continue;
    const Config cfg = r.nodes[v].cfg;
    const std::size_t phase = r.nodes[v].phase;
    if (cfg.stack.empty()) { expanded[v] = 1; continue; }
    char letter = w.letter_at(phase);
    if (d >= step_bound) {
      if (!step(a, cfg, 0).empty() || !step(a, cfg, letter).empty())
        r.truncated = true;
      continue;
    }
    expanded[v] = 1;
    for (int use_letter = 0; use_letter <= 1; ++use_letter) {
      char l = use_letter ? letter : 0;
      for (std::size_t t : a.delta(cfg.state, l, cfg.stack[0])) {
        const auto& tr = a.transitions()[t];
        Config next{a.state_index(tr.to), tr.push + cfg.stack.substr(1)};
        if (next.stack.size() > stack_bound || r.nodes.size() >= node_cap) {
          r.truncated = true;
          continue;
        }
        std::size_t nphase = use_letter ? w.next_phase(phase) : phase;
        int to = r.intern(next, nphase);
        ensure();
        int e = static_cast<int>(r.efrom.size());
        r.efrom.push_back(v);
        r.eto.push_back(to);
        r.etrans.push_back(t);
        r.eflag.push_back(use_letter ? 1 : 0);
        r.out[v].push_back(e);
        work.push_back({to, d + 1});
      }
    }
  }
  return r;
}

census::Graph region_census(const Bpda& a, const Region& r) {
  census::Graph g;
  g.n = static_cast<int>(r.nodes.size());
  g.init = 0;
  g.node_bits.assign(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    if (a.is_final(r.nodes[v].cfg.state)) g.node_bits[v] = 1;
  for (std::size_t e = 0; e < r.efrom.size(); ++e)
    g.add_edge(r.efrom[e], r.eto[e], r.eflag[e] ? 4u : 0u);
  g.need_node = 1;
  g.need_edge = 4;
  return g;
}

// Canonical lasso form of (stem, cycle) sequences: the cycle reduced to its
// primitive root, the stem popped while it ends with the cycle's last entry.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> canonical_lasso_seq(
    std::vector<T> stem, std::vector<T> cycle) {
  auto n = cycle.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = cycle[i] == cycle[i - d];
    if (ok) { cycle.resize(d); break; }
  }
  while (!stem.empty() && stem.back() == cycle.back()) {
    stem.pop_back();
    cycle.insert(cycle.begin(), cycle.back());
    cycle.pop_back();
  }
  return {std::move(stem), std::move(cycle)};
}

// Run triples along region edges: (config the step leaves from, its flag).
std::vector<RunStep> triples_along(const Region& r, const std::vector<int>& edges) {
  std::vector<RunStep> out;
  out.reserve(edges.size());
  for (int e : edges)
    out.push_back({r.nodes[r.efrom[e]].cfg, r.eflag[e] ? 1 : 0});
  return out;
}

struct LassoEnum {
  std::set<std::pair<std::vector<RunStep>, std::vector<RunStep>>> seen;
  std::vector<RunLasso> found;
  bool complete = true;
  std::size_t budget = 0;
};

// Distinct accepting run lassos by path DFS with cycle closure at node
// revisits.  Complete for regions whose accepting runs have simple stems
// and cycles (always the case when the census is Finite).
LassoEnum enumerate_lassos(const Bpda& a, const Region& r, std::size_t step_bound,
                           std::size_t max_found, std::size_t budget = 400000) {
  LassoEnum res;
  res.budget = budget;
  if (r.nodes.empty()) return res;
  std::vector<int> path_edges;
  std::vector<int> pos_of_node(r.nodes.size(), -1);
  pos_of_node[0] = 0;

  std::function<void(int)> dfs = [&](int v) {
    if (res.budget == 0 || res.found.size() >= max_found) return;
    if (path_edges.size() >= step_bound) { res.complete = false; return; }
    for (int e : r.out[v]) {
      if (res.budget == 0) { res.complete = false; return; }
      --res.budget;
      int w = r.eto[e];
      path_edges.push_back(e);
      if (pos_of_node[w] >= 0) {
        int cut = pos_of_node[w];
        bool has_f = false, has_letter = false;
        for (std::size_t i = cut; i < path_edges.size(); ++i) {
          int ce = path_edges[i];
          if (a.is_final(r.nodes[r.efrom[ce]].cfg.state) ||
              a.is_final(r.nodes[r.eto[ce]].cfg.state))
            has_f = true;
          if (r.eflag[ce]) has_letter = true;
        }
        if (has_f && has_letter && res.found.size() < max_found) {
          std::vector<int> stem_e(path_edges.begin(), path_edges.begin() + cut);
          std::vector<int> cyc_e(path_edges.begin() + cut, path_edges.end());
          auto key =
              canonical_lasso_seq(triples_along(r, stem_e), triples_along(r, cyc_e));
          if (res.seen.insert(key).second) {
            RunLasso rl;
            for (int se : stem_e) rl.stem_transitions.push_back(r.etrans[se]);
            for (int ce : cyc_e) rl.cycle_transitions.push_back(r.etrans[ce]);
            rl.stem = triples_along(r, stem_e);
            rl.cycle = triples_along(r, cyc_e);
            rl.input_phase = r.nodes[w].phase;
            res.found.push_back(std::move(rl));
          }
        }
        path_edges.pop_back();
        continue;
      }
      pos_of_node[w] = static_cast<int>(path_edges.size());
      dfs(w);
      pos_of_node[w] = -1;
      path_edges.pop_back();
    }
  };
  dfs(0);
  return res;
}

// Node-simple cycles at anchor v, restricted to its SCC.
std::vector<std::vector<int>> simple_cycles_at(const Region& r,
                                               const std::vector<int>& comp,
                                               int v, std::size_t max_cycles,
                                               std::size_t max_len) {
  std::vector<std::vector<int>> cycles;
  std::vector<int> path;
  std::set<int> on_path;
  std::function<void(int)> dfs = [&](int u) {
    if (cycles.size() >= max_cycles || path.size() >= max_len) return;
    for (int e : r.out[u]) {
      if (cycles.size() >= max_cycles) return;
      int w = r.eto[e];
      if (comp[w] != comp[v]) continue;
      if (w == v) {
        path.push_back(e);
        cycles.push_back(path);
        path.pop_back();
        continue;
      }
      if (on_path.count(w)) continue;
      path.push_back(e);
      on_path.insert(w);
      dfs(w);
      on_path.erase(w);
      path.pop_back();
    }
  };
  dfs(v);
  return cycles;
}

bool prefix_incomparable(const std::vector<std::size_t>& a,
                         const std::vector<std::size_t>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return true;
  return false;  // one is a prefix of the other (or equal)
}

std::optional<Certificate> find_certificate(const Bpda& a, const Region& r,
                                            const census::Graph& g);

}  // namespace

// ---------------------------------------------------------------------------
// Public operations.
// ---------------------------------------------------------------------------

EmptinessResult is_empty(const Bpda& a) {
  CompiledPda c = compile_pda(a);
  PopRel pr = pop_saturate(c);
  std::vector<char> reach = reachable_heads(c);

  // Head graph over (state, top symbol): edges follow one push transition
  // and then pop a prefix of its push string.  A repeating head lies in an
  // SCC with an edge that can visit F and an edge that can consume a letter
  // (one cycle may realize the two on different laps).
  census::Graph hg;
  hg.n = c.nq * c.ng;
  hg.init = 0;
  hg.node_bits.assign(hg.n, 0);
  auto node_of = [&](int q, int x) { return q * c.ng + x; };
  auto fbit = [&](int q) { return c.a->is_final(q) ? 2u : 0u; };
  for (const auto& t : c.ts) {
    const int k = static_cast<int>(t.push.size());
    if (k == 0) continue;
    std::vector<unsigned> cur(c.nq, 0);
    cur[t.to] = 1u | fbit(t.from) | (t.reads ? 4u : 0u);
    for (int j = 0; j < k; ++j) {
      for (int q = 0; q < c.nq; ++q)
        if (cur[q])
          hg.add_edge(node_of(t.from, t.top), node_of(q, t.push[j]),
                      cur[q] | fbit(q));
      if (j + 1 < k) {
        std::vector<unsigned> nxt(c.nq, 0);
        for (int q = 0; q < c.nq; ++q) {
          if (!cur[q]) continue;
          for (int s = 0; s < c.nq; ++s) {
            unsigned pb = pr.get(q, t.push[j], s);
            if (pb & 1u) nxt[s] |= cur[q] | pb;
          }
        }
        cur = std::move(nxt);
      }
    }
  }
  std::vector<char> all(hg.n, 1);
  census::SccInfo scc = census::tarjan(hg, all);
  std::vector<unsigned> scc_bits(scc.count, 0);
  std::vector<int> scc_edges(scc.count, 0);
  for (std::size_t e = 0; e < hg.edge_count(); ++e)
    if (scc.comp[hg.edge_from[e]] == scc.comp[hg.edge_to[e]]) {
      scc_bits[scc.comp[hg.edge_from[e]]] |= hg.edge_bits[e];
      scc_edges[scc.comp[hg.edge_from[e]]]++;
    }
  bool nonempty = false;
  for (int h = 0; h < hg.n && !nonempty; ++h) {
    if (!reach[h]) continue;
    int s = scc.comp[h];
    if (scc_edges[s] > 0 && (scc_bits[s] & 2u) && (scc_bits[s] & 4u))
      nonempty = true;
  }
  if (!nonempty) return {true, std::nullopt};

  // A witness lasso exists; find one by free-input exploration with doubling
  // bounds (the decision above guarantees termination in principle; bounds
  // cover anything desk-scale).
  for (std::size_t stack = 12; stack <= 768; stack *= 2) {
    std::size_t node_cap = 60000;
    std::map<Config, int> ids;
    std::vector<Config> cfgs;
    std::vector<std::vector<std::pair<int, char>>> out;
    auto intern = [&](const Config& cfg) {
      auto it = ids.find(cfg);
      if (it != ids.end()) return it->second;
      int id = static_cast<int>(cfgs.size());
      ids.emplace(cfg, id);
      cfgs.push_back(cfg);
      out.emplace_back();
      return id;
    };
    Config init{a.initial_index(), std::string(1, a.initial_stack())};
    intern(init);
    std::deque<int> work{0};
    std::vector<char> done{0};
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      if (done[v]) continue;
      done[v] = 1;
      std::string letters(1, char(0));
      letters += a.input_alphabet().letters();
      for (char l : letters) {
        for (auto& [cfg, flag] : step(a, cfgs[v], l)) {
          (void)flag;
          if (cfg.stack.size() > stack || cfgs.size() >= node_cap) continue;
          int w = intern(cfg);
          while (done.size() < cfgs.size()) done.push_back(0);
          out[v].push_back({w, l});
          work.push_back(w);
        }
      }
    }
    census::Graph g;
    g.n = static_cast<int>(cfgs.size());
    g.init = 0;
    g.node_bits.assign(g.n, 0);
    for (int v = 0; v < g.n; ++v)
      if (a.is_final(cfgs[v].state)) g.node_bits[v] = 1;
    std::vector<char> eletter;
    for (int v = 0; v < g.n; ++v)
      for (auto [w, l] : out[v]) {
        g.add_edge(v, w, l ? 4u : 0u);
        eletter.push_back(l);
      }
    std::vector<char> alive(g.n, 1);
    census::SccInfo si = census::tarjan(g, alive);
    std::vector<unsigned> nb(si.count, 0), eb(si.count, 0);
    std::vector<int> ie(si.count, 0);
    for (int v = 0; v < g.n; ++v) nb[si.comp[v]] |= g.node_bits[v];
    std::vector<std::vector<std::pair<int, int>>> adj(g.n);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      adj[g.edge_from[e]].push_back({static_cast<int>(e), g.edge_to[e]});
      if (si.comp[g.edge_from[e]] == si.comp[g.edge_to[e]]) {
        eb[si.comp[g.edge_from[e]]] |= g.edge_bits[e];
        ie[si.comp[g.edge_from[e]]]++;
      }
    }
    int target = -1;
    for (int v = 0; v < g.n && target < 0; ++v) {
      int s = si.comp[v];
      if (ie[s] > 0 && (nb[s] & 1u) && (eb[s] & 4u)) target = v;
    }
    if (target < 0) continue;

    auto bfs_path = [&](int from, int to,
                        int scc_only) -> std::optional<std::vector<int>> {
      if (from == to) return std::vector<int>{};
      std::vector<int> pe(g.n, -1), pn(g.n, -1);
      std::vector<char> seen(g.n, 0);
      std::deque<int> q{from};
      seen[from] = 1;
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (auto [e, w] : adj[v]) {
          if (scc_only >= 0 && si.comp[w] != scc_only) continue;
          if (seen[w]) continue;
          seen[w] = 1;
          pe[w] = e;
          pn[w] = v;
          if (w == to) {
            std::vector<int> path;
            for (int x = to; x != from; x = pn[x]) path.push_back(pe[x]);
            std::reverse(path.begin(), path.end());
            return path;
          }
          q.push_back(w);
        }
      }
      return std::nullopt;
    };
    int s_id = si.comp[target];
    int f_node = -1, l_edge = -1;
    for (int v = 0; v < g.n && f_node < 0; ++v)
      if (si.comp[v] == s_id && (g.node_bits[v] & 1u)) f_node = v;
    for (std::size_t e = 0; e < g.edge_count() && l_edge < 0; ++e)
      if (si.comp[g.edge_from[e]] == s_id && si.comp[g.edge_to[e]] == s_id &&
          (g.edge_bits[e] & 4u))
        l_edge = static_cast<int>(e);
    auto stem = bfs_path(0, target, -1);
    auto p1 = bfs_path(target, f_node, s_id);
    auto p2 = bfs_path(f_node, g.edge_from[l_edge], s_id);
    auto p3 = bfs_path(g.edge_to[l_edge], target, s_id);
    if (!stem || !p1 || !p2 || !p3) continue;
    std::vector<int> cycle = *p1;
    cycle.insert(cycle.end(), p2->begin(), p2->end());
    cycle.push_back(l_edge);
    cycle.insert(cycle.end(), p3->begin(), p3->end());
    Word stem_word, cycle_word;
    for (int e : *stem)
      if (eletter[e]) stem_word.push_back(eletter[e]);
    for (int e : cycle)
      if (eletter[e]) cycle_word.push_back(eletter[e]);
    if (cycle_word.empty()) continue;
    return {false, Lasso(stem_word, cycle_word)};
  }
  return {false, std::nullopt};
}

bool accepts_lasso(const Bpda& a, const Lasso& w) {
  if (!w.over(a.input_alphabet())) return false;
  const std::size_t phases = w.phase_count();
  auto name = [&](std::size_t q, std::size_t ph) {
    return a.states()[q] + "@" + std::to_string(ph);
  };
  std::vector<std::string> states;
  std::vector<std::string> finals;
  for (std::size_t q = 0; q < a.state_count(); ++q)
    for (std::size_t ph = 0; ph < phases; ++ph) {
      states.push_back(name(q, ph));
      if (a.is_final(q)) finals.push_back(name(q, ph));
    }
  std::vector<PdaTransition> ts;
  for (const auto& tr : a.transitions()) {
    std::size_t from = a.state_index(tr.from);
    std::size_t to = a.state_index(tr.to);
    for (std::size_t ph = 0; ph < phases; ++ph) {
      if (!tr.input) {
        ts.push_back({name(from, ph), std::nullopt, tr.top, name(to, ph), tr.push});
      } else if (*tr.input == w.letter_at(ph)) {
        ts.push_back({name(from, ph), tr.input, tr.top,
                      name(to, w.next_phase(ph)), tr.push});
      }
    }
  }
  Bpda product(states, a.input_alphabet(), a.stack_alphabet(),
               name(a.initial_index(), 0), a.initial_stack(), finals,
               std::move(ts));
  return !is_empty(product).empty;
}

namespace {

std::optional<Certificate> find_certificate(const Bpda& a, const Region& r,
                                            const census::Graph& g) {
  std::vector<char> alive(g.n, 0);
  {
    std::deque<int> work{g.init};
    alive[g.init] = 1;
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (int e : r.out[v])
        if (!alive[r.eto[e]]) {
          alive[r.eto[e]] = 1;
          work.push_back(r.eto[e]);
        }
    }
  }
  census::SccInfo scc = census::tarjan(g, alive);
  std::vector<unsigned> nbits(scc.count, 0), ebits(scc.count, 0);
  std::vector<int> nnodes(scc.count, 0), nedges(scc.count, 0);
  for (int v = 0; v < g.n; ++v)
    if (alive[v]) {
      nnodes[scc.comp[v]]++;
      nbits[scc.comp[v]] |= g.node_bits[v];
    }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    int u = g.edge_from[e], v = g.edge_to[e];
    if (!alive[u] || !alive[v] || scc.comp[u] != scc.comp[v]) continue;
    nedges[scc.comp[u]]++;
    ebits[scc.comp[u]] |= g.edge_bits[e];
  }

  // BFS tree for path_to_node extraction.
  std::vector<int> pred_edge(g.n, -1), pred_node(g.n, -1);
  {
    std::deque<int> work{g.init};
    std::vector<char> seen(g.n, 0);
    seen[g.init] = 1;
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (int e : r.out[v]) {
        int w = r.eto[e];
        if (seen[w]) continue;
        seen[w] = 1;
        pred_edge[w] = e;
        pred_node[w] = v;
        work.push_back(w);
      }
    }
  }

  auto cycle_bits = [&](const std::vector<int>& cyc) {
    bool f = false, l = false;
    for (int e : cyc) {
      if (a.is_final(r.nodes[r.efrom[e]].cfg.state) ||
          a.is_final(r.nodes[r.eto[e]].cfg.state))
        f = true;
      if (r.eflag[e]) l = true;
    }
    return std::make_pair(f, l);
  };
  auto to_transitions = [&](const std::vector<int>& edges) {
    std::vector<std::size_t> ids;
    for (int e : edges) ids.push_back(r.etrans[e]);
    return ids;
  };

  for (int v = 0; v < g.n; ++v) {
    if (!alive[v]) continue;
    int s = scc.comp[v];
    if (nedges[s] <= nnodes[s]) continue;  // not a fat SCC
    if (!(nbits[s] & 1u) || !(ebits[s] & 4u)) continue;  // not good
    auto cycles = simple_cycles_at(r, scc.comp, v, 64, 64);
    if (cycles.size() < 2) continue;

    // Candidate accepting cycles: prefer a single cycle carrying both an F
    // visit and a letter; otherwise compose two.
    auto try_pair = [&](std::vector<int> ca,
                        std::vector<int> cb) -> std::optional<Certificate> {
      auto [fa, la] = cycle_bits(ca);
      auto [fb, lb] = cycle_bits(cb);
      (void)fb;
      if (!fa || !la || !lb) return std::nullopt;
      Certificate cert;
      cert.node = r.nodes[v].cfg;
      cert.phase = r.nodes[v].phase;
      std::vector<int> path;
      for (int x = v; pred_node[x] >= 0; x = pred_node[x])
        path.push_back(pred_edge[x]);
      std::reverse(path.begin(), path.end());
      cert.path_to_node = to_transitions(path);
      cert.cycle_a = to_transitions(ca);
      cert.cycle_b = to_transitions(cb);
      if (cert.cycle_a == cert.cycle_b) return std::nullopt;
      if (!prefix_incomparable(cert.cycle_a, cert.cycle_b)) return std::nullopt;
      return cert;
    };

    for (std::size_t i = 0; i < cycles.size(); ++i) {
      for (std::size_t j = 0; j < cycles.size(); ++j) {
        if (i == j) continue;
        // (c_i, c_j) directly.
        if (auto cert = try_pair(cycles[i], cycles[j])) return cert;
        // (c_i . c_j, c_j): covers conditions jointly.
        std::vector<int> comp = cycles[i];
        comp.insert(comp.end(), cycles[j].begin(), cycles[j].end());
        if (auto cert = try_pair(comp, cycles[j])) return cert;
        if (auto cert = try_pair(comp, cycles[i])) return cert;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

AmbiguityReport count_runs_bounded(const Bpda& a, const Lasso& w,
                                   std::size_t step_bound,
                                   std::size_t stack_bound) {
  AmbiguityReport report;
  if (!w.over(a.input_alphabet())) {
    report.exhaustive_within_bounds = true;
    return report;
  }
  Region region = build_region(a, w, step_bound, stack_bound);
  census::Graph g = region_census(a, region);
  census::Result res = census::analyze(g);

  if (res.kind == census::Result::Kind::Finite) {
    report.lower_bound = res.count;
    report.exhaustive_within_bounds = !region.truncated;
    return report;
  }

  LassoEnum en = enumerate_lassos(a, region, step_bound, 64);
  report.lower_bound = en.found.size();
  report.exhaustive_within_bounds = false;
  if (res.kind == census::Result::Kind::Uncountable) {
    if (auto cert = find_certificate(a, region, g)) {
      if (verify_certificate(a, w, *cert).ok)
        report.uncountable_certificate = std::move(cert);
    }
  }
  return report;
}

std::vector<RunLasso> accepting_run_lassos(const Bpda& a, const Lasso& w,
                                           std::size_t step_bound,
                                           std::size_t stack_bound,
                                           std::size_t max_found) {
  Region region = build_region(a, w, step_bound, stack_bound);
  return enumerate_lassos(a, region, step_bound, max_found).found;
}

// ---------------------------------------------------------------------------
// Certificates: verification and expansion into run prefixes.
// ---------------------------------------------------------------------------

namespace {

struct SimState {
  Config cfg;
  std::size_t phase = 0;
  std::size_t letters = 0;
  bool visited_final = false;
};

// Replays transition ids from a state; nullopt plus diagnostic on the first
// inapplicable step.
std::optional<SimState> replay(const Bpda& a, const Lasso& w, SimState st,
                               const std::vector<std::size_t>& ids,
                               std::string* diag,
                               std::vector<RunStep>* triples = nullptr) {
  if (a.is_final(st.cfg.state)) st.visited_final = true;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    std::size_t t = ids[k];
    if (t >= a.transitions().size()) {
      if (diag) *diag = "transition id out of range";
      return std::nullopt;
    }
    const auto& tr = a.transitions()[t];
    if (a.state_index(tr.from) != st.cfg.state) {
      if (diag) *diag = "transition source state mismatch at step " + std::to_string(k);
      return std::nullopt;
    }
    if (st.cfg.stack.empty() || st.cfg.stack[0] != tr.top) {
      if (diag) *diag = "stack top mismatch at step " + std::to_string(k);
      return std::nullopt;
    }
    int flag = 0;
    if (tr.input) {
      if (*tr.input != w.letter_at(st.phase)) {
        if (diag) *diag = "input letter disagrees with the lasso at step " + std::to_string(k);
        return std::nullopt;
      }
      flag = 1;
    }
    if (triples) triples->push_back({st.cfg, flag});
    st.cfg = Config{a.state_index(tr.to), tr.push + st.cfg.stack.substr(1)};
    if (tr.input) {
      st.phase = w.next_phase(st.phase);
      st.letters++;
    }
    if (a.is_final(st.cfg.state)) st.visited_final = true;
  }
  return st;
}

}  // namespace

VerifyResult verify_certificate(const Bpda& a, const Lasso& w,
                                const Certificate& c) {
  std::string diag;
  SimState init;
  init.cfg = Config{a.initial_index(), std::string(1, a.initial_stack())};
  init.phase = 0;
  auto at_node = replay(a, w, init, c.path_to_node, &diag);
  if (!at_node) return {false, "path_to_node invalid: " + diag};
  if (at_node->cfg != c.node || at_node->phase != c.phase)
    return {false, "path_to_node does not reach the claimed node"};

  auto run_cycle = [&](const std::vector<std::size_t>& ids,
                       const char* which) -> std::optional<SimState> {
    if (ids.empty()) {
      diag = std::string(which) + " is empty";
      return std::nullopt;
    }
    SimState st;
    st.cfg = c.node;
    st.phase = c.phase;
    st.visited_final = false;
    // Endpoint finality must not count for the cycle check on its own: the
    // node itself lies on the cycle, so it does count.  replay() includes
    // both endpoints.
    auto end = replay(a, w, st, ids, &diag);
    if (!end) {
      diag = std::string(which) + " invalid: " + diag;
      return std::nullopt;
    }
    if (end->cfg != c.node || end->phase != c.phase) {
      diag = std::string(which) + " does not return to the node";
      return std::nullopt;
    }
    if (end->letters == 0) {
      diag = std::string(which) + " consumes no input";
      return std::nullopt;
    }
    return end;
  };

  auto ra = run_cycle(c.cycle_a, "cycle_a");
  if (!ra) return {false, diag};
  if (!ra->visited_final) return {false, "cycle_a never visits a final state"};
  auto rb = run_cycle(c.cycle_b, "cycle_b");
  if (!rb) return {false, diag};
  if (c.cycle_a == c.cycle_b) return {false, "cycles are identical"};
  if (!prefix_incomparable(c.cycle_a, c.cycle_b))
    return {false, "one cycle is a prefix of the other"};
  return {true, ""};
}

std::vector<std::vector<RunStep>> certificate_run_prefixes(
    const Bpda& a, const Lasso& w, const Certificate& c, std::size_t choices) {
  std::vector<std::vector<RunStep>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << choices); ++mask) {
    std::vector<std::size_t> ids = c.path_to_node;
    for (std::size_t b = 0; b < choices; ++b) {
      const auto& cyc = (mask >> b) & 1 ? c.cycle_a : c.cycle_b;
      ids.insert(ids.end(), cyc.begin(), cyc.end());
    }
    SimState st;
    st.cfg = Config{a.initial_index(), std::string(1, a.initial_stack())};
    std::vector<RunStep> triples;
    std::string diag;
    auto end = replay(a, w, st, ids, &diag, &triples);
    if (!end) return {};  // invalid certificate
    out.push_back(std::move(triples));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Run coding over X = stack symbols + state characters + {0,1}.
// ---------------------------------------------------------------------------

RunCodec::RunCodec(const Bpda& a) : a_(&a) {
  std::set<char> taken{'0', '1'};
  // Stack symbols keep their characters unless they collide with a flag.
  stack_from_ = a.stack_alphabet().letters();
  stack_to_ = stack_from_;
  auto fresh = [&](char seed) {
    // Deterministic pool: letters then digits then other printables.
    static const char* pool =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz23456789"
        "!#$%&*+-./:;<=>?@[]^_{|}~";
    (void)seed;
    for (const char* p = pool; *p; ++p)
      if (!taken.count(*p)) return *p;
    throw ParseError("ran out of code characters");
  };
  for (char& c : stack_to_) {
    if (taken.count(c)) c = fresh(c);
    taken.insert(c);
  }
  // States keep single-character names when free, otherwise get fresh ones.
  state_chars_.resize(a.state_count());
  for (std::size_t q = 0; q < a.state_count(); ++q) {
    const std::string& name = a.states()[q];
    char want = name.size() == 1 ? name[0] : 0;
    if (want && !taken.count(want)) {
      state_chars_[q] = want;
      taken.insert(want);
    } else {
      char c = fresh(0);
      state_chars_[q] = c;
      taken.insert(c);
    }
  }
}

char RunCodec::stack_char(char sym) const {
  auto p = stack_from_.find(sym);
  if (p == std::string::npos)
    throw ParseError(std::string("unknown stack symbol '") + sym + "'");
  return stack_to_[p];
}

Word RunCodec::encode_run_prefix(const std::vector<RunStep>& steps) const {
  Word out;
  for (const auto& s : steps) {
    out.push_back(state_chars_[s.config.state]);
    for (char c : s.config.stack) out.push_back(stack_char(c));
    out.push_back(s.flag ? '1' : '0');
  }
  return out;
}

std::optional<std::vector<RunStep>> RunCodec::decode(const Word& x) const {
  std::vector<RunStep> out;
  std::size_t i = 0;
  auto state_of = [&](char c) -> std::optional<std::size_t> {
    for (std::size_t q = 0; q < state_chars_.size(); ++q)
      if (state_chars_[q] == c) return q;
    return std::nullopt;
  };
  while (i < x.size()) {
    auto q = state_of(x[i]);
    if (!q) return std::nullopt;
    ++i;
    std::string stack;
    while (i < x.size() && stack_to_.find(x[i]) != std::string::npos) {
      stack.push_back(stack_from_[stack_to_.find(x[i])]);
      ++i;
    }
    if (stack.empty()) return std::nullopt;  // gamma_i must be non-empty
    if (i >= x.size() || (x[i] != '0' && x[i] != '1')) return std::nullopt;
    out.push_back({Config{*q, stack}, x[i] == '1' ? 1 : 0});
    ++i;
  }
  return out;
}

bool RunCodec::in_R_prime(const Word& u, const Word& x) const {
  if (u.size() != x.size()) return false;
  auto steps = decode(x);
  if (!steps || steps->empty()) return false;
  const auto& s = *steps;
  if (s[0].config.state != a_->initial_index() ||
      s[0].config.stack != std::string(1, a_->initial_stack()))
    return false;
  if (s.back().flag != 1) return false;
  std::size_t pos = 0;  // letters of u consumed by b_1 .. b_{i-1}
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    char b = 0;
    if (s[i].flag == 1) {
      if (pos >= u.size()) return false;
      b = u[pos];
      ++pos;
    }
    auto succ = step(*a_, s[i].config, b);
    bool ok = false;
    for (const auto& [cfg, flag] : succ) {
      (void)flag;
      if (cfg == s[i + 1].config) { ok = true; break; }
    }
    if (!ok) return false;
  }
  return true;
}

bool RunCodec::in_R_second(const Word& u, const Word& x) const {
  if (u.size() != x.size() || x.empty()) return false;
  char last = x.back();
  for (std::size_t q = 0; q < state_chars_.size(); ++q)
    if (state_chars_[q] == last) return a_->is_final(q);
  return false;
}

}  // namespace omega
