#include "omegamb/cfg.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace omega {

Cfg::Cfg(Alphabet terminals, std::vector<std::string> nonterminals,
         std::string start, std::vector<Rule> rules)
    : terminals_(std::move(terminals)),
      nonterminals_(std::move(nonterminals)),
      start_(std::move(start)),
      rules_(std::move(rules)) {
  for (std::size_t i = 0; i < nonterminals_.size(); ++i) {
    const auto& name = nonterminals_[i];
    if (name.empty()) throw ParseError("nonterminal name must be non-empty");
    if (name.size() == 1 && terminals_.contains(name[0]))
      throw ParseError("nonterminal '" + name + "' clashes with a terminal");
    if (!nonterminal_index_.emplace(name, i).second)
      throw ParseError("duplicate nonterminal '" + name + "'");
  }
  if (!is_nonterminal(start_))
    throw ParseError("start symbol '" + start_ + "' is not declared");
  for (const auto& r : rules_) {
    if (!is_nonterminal(r.lhs))
      throw ParseError("rule lhs '" + r.lhs + "' is not a nonterminal");
    for (const auto& sym : r.rhs) {
      if (is_nonterminal(sym)) continue;
      if (sym.size() == 1 && terminals_.contains(sym[0])) continue;
      throw ParseError("rule symbol '" + sym + "' is undeclared");
    }
  }
}

namespace {

// Internal compiled form: rhs entries >= 0 index nonterminals, entries < 0
// encode the terminal character c as -(c)-1.
struct CRule {
  int lhs;
  std::vector<int> rhs;
};

struct Compiled {
  int n_nt = 0;
  std::vector<CRule> rules;
  std::vector<std::vector<int>> rules_of;  // nonterminal -> rule indices

  static int term_code(char c) { return -static_cast<int>(static_cast<unsigned char>(c)) - 1; }
  static char term_char(int code) { return static_cast<char>(static_cast<unsigned char>(-code - 1)); }
  static bool is_term(int code) { return code < 0; }
};

Compiled compile(const Cfg& g) {
  Compiled c;
  c.n_nt = static_cast<int>(g.nonterminals().size());
  c.rules_of.assign(c.n_nt, {});
  for (const auto& r : g.rules()) {
    CRule cr;
    cr.lhs = static_cast<int>(g.nonterminal_index(r.lhs));
    for (const auto& sym : r.rhs) {
      if (g.is_nonterminal(sym))
        cr.rhs.push_back(static_cast<int>(g.nonterminal_index(sym)));
      else
        cr.rhs.push_back(Compiled::term_code(sym[0]));
    }
    c.rules_of[cr.lhs].push_back(static_cast<int>(c.rules.size()));
    c.rules.push_back(std::move(cr));
  }
  return c;
}

std::vector<bool> productive_set(const Compiled& c) {
  std::vector<bool> prod(c.n_nt, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : c.rules) {
      if (prod[r.lhs]) continue;
      bool all = true;
      for (int s : r.rhs)
        if (!Compiled::is_term(s) && !prod[s]) { all = false; break; }
      if (all) { prod[r.lhs] = true; changed = true; }
    }
  }
  return prod;
}

std::vector<bool> nullable_set(const Compiled& c) {
  std::vector<bool> nul(c.n_nt, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : c.rules) {
      if (nul[r.lhs]) continue;
      bool all = true;
      for (int s : r.rhs)
        if (Compiled::is_term(s) || !nul[s]) { all = false; break; }
      if (all) { nul[r.lhs] = true; changed = true; }
    }
  }
  return nul;
}

std::vector<bool> reachable_set(const Compiled& c, int start) {
  std::vector<bool> reach(c.n_nt, false);
  std::deque<int> work{start};
  reach[start] = true;
  while (!work.empty()) {
    int a = work.front();
    work.pop_front();
    for (int ri : c.rules_of[a])
      for (int s : c.rules[ri].rhs)
        if (!Compiled::is_term(s) && !reach[s]) {
          reach[s] = true;
          work.push_back(s);
        }
  }
  return reach;
}

// Nonterminals that derive some word of length >= 1.
std::vector<bool> canpump_set(const Compiled& c, const std::vector<bool>& prod) {
  std::vector<bool> cp(c.n_nt, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : c.rules) {
      if (cp[r.lhs]) continue;
      bool all_prod = true, some_pump = false;
      for (int s : r.rhs) {
        if (Compiled::is_term(s)) { some_pump = true; continue; }
        if (!prod[s]) { all_prod = false; break; }
        if (cp[s]) some_pump = true;
      }
      if (all_prod && some_pump) { cp[r.lhs] = true; changed = true; }
    }
  }
  return cp;
}

constexpr std::size_t kNoWord = std::numeric_limits<std::size_t>::max();

// Shortest derivable word per nonterminal (empty optional when unproductive).
std::vector<std::optional<Word>> min_words(const Compiled& c) {
  std::vector<std::optional<Word>> mw(c.n_nt);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : c.rules) {
      Word w;
      bool ok = true;
      for (int s : r.rhs) {
        if (Compiled::is_term(s)) { w.push_back(Compiled::term_char(s)); continue; }
        if (!mw[s]) { ok = false; break; }
        w += *mw[s];
      }
      if (ok && (!mw[r.lhs] || w.size() < mw[r.lhs]->size())) {
        mw[r.lhs] = std::move(w);
        changed = true;
      }
    }
  }
  return mw;
}

// Shortest derivable word of length >= 1 per nonterminal.
std::vector<std::optional<Word>> min_nonempty_words(const Compiled& c) {
  auto mw = min_words(c);
  std::vector<std::optional<Word>> mp(c.n_nt);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : c.rules) {
      // Pick one position to realize non-emptily, shortest words elsewhere.
      for (std::size_t pump = 0; pump < r.rhs.size(); ++pump) {
        Word w;
        bool ok = true;
        for (std::size_t i = 0; i < r.rhs.size(); ++i) {
          int s = r.rhs[i];
          if (Compiled::is_term(s)) { w.push_back(Compiled::term_char(s)); continue; }
          const auto& need = (i == pump) ? mp[s] : mw[s];
          if (!need) { ok = false; break; }
          w += *need;
        }
        if (ok && !w.empty() && (!mp[r.lhs] || w.size() < mp[r.lhs]->size())) {
          mp[r.lhs] = std::move(w);
          changed = true;
        }
      }
    }
  }
  return mp;
}

// --- span analysis for membership / counting -------------------------------

// Derivability of w[i..j) from every nonterminal and every rule suffix,
// computed as a joint monotone fixpoint (handles lambda and unit rules).
struct SpanTables {
  int n = 0;
  std::vector<std::vector<uint8_t>> nt;            // [A][span]
  std::vector<std::vector<std::vector<uint8_t>>> rs;  // [rule][pos][span]

  std::size_t span(int i, int j) const { return static_cast<std::size_t>(i) * (n + 1) + j; }
};

SpanTables derivable_tables(const Compiled& c, const Word& w) {
  SpanTables t;
  t.n = static_cast<int>(w.size());
  const std::size_t spans = static_cast<std::size_t>(t.n + 1) * (t.n + 1);
  t.nt.assign(c.n_nt, std::vector<uint8_t>(spans, 0));
  t.rs.resize(c.rules.size());
  for (std::size_t r = 0; r < c.rules.size(); ++r)
    t.rs[r].assign(c.rules[r].rhs.size() + 1, std::vector<uint8_t>(spans, 0));

  auto sym_ok = [&](int s, int i, int j) -> bool {
    if (Compiled::is_term(s))
      return j == i + 1 && w[i] == Compiled::term_char(s);
    return t.nt[s][t.span(i, j)] != 0;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < c.rules.size(); ++r) {
      const auto& rhs = c.rules[r].rhs;
      const int k = static_cast<int>(rhs.size());
      for (int pos = k; pos >= 0; --pos) {
        for (int i = 0; i <= t.n; ++i) {
          for (int j = i; j <= t.n; ++j) {
            auto& cell = t.rs[r][pos][t.span(i, j)];
            if (cell) continue;
            bool ok = false;
            if (pos == k) {
              ok = (i == j);
            } else {
              for (int m = i; m <= j && !ok; ++m)
                ok = sym_ok(rhs[pos], i, m) && t.rs[r][pos + 1][t.span(m, j)];
            }
            if (ok) { cell = 1; changed = true; }
          }
        }
      }
      const int lhs = c.rules[r].lhs;
      for (std::size_t sp = 0; sp < spans; ++sp)
        if (!t.nt[lhs][sp] && t.rs[r][0][sp]) { t.nt[lhs][sp] = 1; changed = true; }
    }
  }
  return t;
}

// Nonterminals A with A =>+ A (a derivation cycle through nullable context).
std::vector<bool> cyclic_set(const Compiled& c) {
  auto nul = nullable_set(c);
  // adj[a] -> b  iff  a -> alpha b beta with alpha, beta nullable
  std::vector<std::vector<int>> adj(c.n_nt);
  for (const auto& r : c.rules) {
    for (std::size_t i = 0; i < r.rhs.size(); ++i) {
      int b = r.rhs[i];
      if (Compiled::is_term(b)) continue;
      bool rest_nullable = true;
      for (std::size_t j = 0; j < r.rhs.size() && rest_nullable; ++j) {
        if (j == i) continue;
        int s = r.rhs[j];
        rest_nullable = !Compiled::is_term(s) && nul[s];
      }
      if (rest_nullable) adj[r.lhs].push_back(b);
    }
  }
  // a is cyclic iff a reaches itself through adj (self-loops included).
  std::vector<bool> cyc(c.n_nt, false);
  for (int a = 0; a < c.n_nt; ++a) {
    std::vector<bool> seen(c.n_nt, false);
    std::deque<int> work(adj[a].begin(), adj[a].end());
    while (!work.empty()) {
      int b = work.front();
      work.pop_front();
      if (b == a) { cyc[a] = true; break; }
      if (seen[b]) continue;
      seen[b] = true;
      for (int x : adj[b]) work.push_back(x);
    }
  }
  return cyc;
}

// Does some parse tree of w[i..j) from A contain a node labeled with a
// cyclic nonterminal?  Such a node pumps the tree count without bound.
struct CyclicTreeTables {
  std::vector<std::vector<uint8_t>> nt;
  std::vector<std::vector<std::vector<uint8_t>>> rs;
};

CyclicTreeTables cyclic_tree_tables(const Compiled& c, const Word& w,
                                    const SpanTables& d,
                                    const std::vector<bool>& cyc) {
  CyclicTreeTables h;
  const std::size_t spans = static_cast<std::size_t>(d.n + 1) * (d.n + 1);
  h.nt.assign(c.n_nt, std::vector<uint8_t>(spans, 0));
  h.rs.resize(c.rules.size());
  for (std::size_t r = 0; r < c.rules.size(); ++r)
    h.rs[r].assign(c.rules[r].rhs.size() + 1, std::vector<uint8_t>(spans, 0));

  auto sym_ok = [&](int s, int i, int j) -> bool {
    if (Compiled::is_term(s)) return j == i + 1 && w[i] == Compiled::term_char(s);
    return d.nt[s][d.span(i, j)] != 0;
  };
  auto sym_hot = [&](int s, int i, int j) -> bool {
    if (Compiled::is_term(s)) return false;
    return h.nt[s][d.span(i, j)] != 0;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < c.rules.size(); ++r) {
      const auto& rhs = c.rules[r].rhs;
      const int k = static_cast<int>(rhs.size());
      for (int pos = k - 1; pos >= 0; --pos) {
        for (int i = 0; i <= d.n; ++i) {
          for (int j = i; j <= d.n; ++j) {
            auto& cell = h.rs[r][pos][d.span(i, j)];
            if (cell) continue;
            bool hot = false;
            for (int m = i; m <= j && !hot; ++m) {
              if (sym_hot(rhs[pos], i, m) && d.rs[r][pos + 1][d.span(m, j)])
                hot = true;
              else if (sym_ok(rhs[pos], i, m) && h.rs[r][pos + 1][d.span(m, j)])
                hot = true;
            }
            if (hot) { cell = 1; changed = true; }
          }
        }
      }
      const int lhs = c.rules[r].lhs;
      for (std::size_t sp = 0; sp < spans; ++sp) {
        if (h.nt[lhs][sp]) continue;
        bool hot = (cyc[lhs] && d.nt[lhs][sp]) || h.rs[r][0][sp];
        if (hot) { h.nt[lhs][sp] = 1; changed = true; }
      }
    }
  }
  // The base case cyc[lhs] must also apply to nonterminals without hot rules.
  for (int a = 0; a < c.n_nt; ++a)
    if (cyc[a])
      for (std::size_t sp = 0; sp < spans; ++sp)
        if (d.nt[a][sp]) h.nt[a][sp] = 1;
  return h;
}

// Saturating arithmetic at `limit` (callers keep limit well below overflow).
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
  if (a >= limit || b >= limit || a + b >= limit) return limit;
  return a + b;
}
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
  if (a == 0 || b == 0) return 0;
  if (a >= limit || b >= limit || a > limit / b) return limit;
  return std::min(limit, a * b);
}

}  // namespace

bool derives(const Cfg& g, const Word& w) {
  for (char c : w)
    if (!g.terminals().contains(c)) return false;
  auto comp = compile(g);
  auto t = derivable_tables(comp, w);
  int start = static_cast<int>(g.nonterminal_index(g.start()));
  return t.nt[start][t.span(0, t.n)] != 0;
}

ParseCount count_derivations(const Cfg& g, const Word& w, std::uint64_t cap) {
  cap = std::clamp<std::uint64_t>(cap, 1, std::uint64_t{1} << 60);
  for (char c : w)
    if (!g.terminals().contains(c)) return ParseCount::exact(0);
  auto comp = compile(g);
  auto d = derivable_tables(comp, w);
  const int n = d.n;
  int start = static_cast<int>(g.nonterminal_index(g.start()));
  if (!d.nt[start][d.span(0, n)]) return ParseCount::exact(0);

  auto cyc = cyclic_set(comp);
  auto hot = cyclic_tree_tables(comp, w, d, cyc);
  if (hot.nt[start][d.span(0, n)]) return ParseCount::infinite();

  // No tree of w contains a derivation cycle, so memoized counting over
  // (symbol, span) terminates: same-span dependencies cannot loop.
  const std::uint64_t limit = cap + 1;
  std::map<std::pair<int, std::pair<int, int>>, std::uint64_t> memo_nt;
  std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, std::uint64_t>
      memo_rs;

  std::function<std::uint64_t(int, int, int)> cnt_nt;
  std::function<std::uint64_t(int, int, int, int)> cnt_rs;

  cnt_rs = [&](int r, int pos, int i, int j) -> std::uint64_t {
    const auto& rhs = comp.rules[r].rhs;
    const int k = static_cast<int>(rhs.size());
    if (pos == k) return i == j ? 1 : 0;
    if (!d.rs[r][pos][d.span(i, j)]) return 0;
    auto key = std::make_pair(std::make_pair(r, pos), std::make_pair(i, j));
    auto it = memo_rs.find(key);
    if (it != memo_rs.end()) return it->second;
    std::uint64_t total = 0;
    for (int m = i; m <= j; ++m) {
      int s = rhs[pos];
      std::uint64_t left;
      if (Compiled::is_term(s))
        left = (m == i + 1 && w[i] == Compiled::term_char(s)) ? 1 : 0;
      else
        left = d.nt[s][d.span(i, m)] ? cnt_nt(s, i, m) : 0;
      if (left == 0) continue;
      if (!d.rs[r][pos + 1][d.span(m, j)]) continue;
      std::uint64_t right = cnt_rs(r, pos + 1, m, j);
      total = sat_add(total, sat_mul(left, right, limit), limit);
    }
    memo_rs[key] = total;
    return total;
  };

  std::set<std::pair<int, std::pair<int, int>>> busy;
  cnt_nt = [&](int a, int i, int j) -> std::uint64_t {
    if (!d.nt[a][d.span(i, j)]) return 0;
    auto key = std::make_pair(a, std::make_pair(i, j));
    auto it = memo_nt.find(key);
    if (it != memo_nt.end()) return it->second;
    // Re-entry would mean a derivation cycle the analysis above missed.
    if (!busy.insert(key).second)
      throw std::logic_error("derivation counting hit an undetected cycle");
    std::uint64_t total = 0;
    for (int r : comp.rules_of[a])
      total = sat_add(total, cnt_rs(r, 0, i, j), limit);
    busy.erase(key);
    memo_nt[key] = total;
    return total;
  };

  std::uint64_t k = cnt_nt(start, 0, n);
  if (k > cap) return ParseCount::more_than(cap);
  return ParseCount::exact(k);
}

Cfg reduce(const Cfg& g) {
  auto comp = compile(g);
  auto prod = productive_set(comp);
  int start = static_cast<int>(g.nonterminal_index(g.start()));
  if (!prod[start])
    return Cfg(g.terminals(), {g.start()}, g.start(), {});

  // Reachability over the grammar restricted to productive symbols.
  std::vector<bool> reach(comp.n_nt, false);
  std::deque<int> work{start};
  reach[start] = true;
  while (!work.empty()) {
    int a = work.front();
    work.pop_front();
    for (int ri : comp.rules_of[a]) {
      const auto& r = comp.rules[ri];
      bool usable = true;
      for (int s : r.rhs)
        if (!Compiled::is_term(s) && !prod[s]) { usable = false; break; }
      if (!usable) continue;
      for (int s : r.rhs)
        if (!Compiled::is_term(s) && !reach[s]) {
          reach[s] = true;
          work.push_back(s);
        }
    }
  }

  std::vector<std::string> nts;
  for (std::size_t i = 0; i < g.nonterminals().size(); ++i)
    if (prod[i] && reach[i]) nts.push_back(g.nonterminals()[i]);
  std::vector<Rule> rules;
  for (const auto& r : g.rules()) {
    std::size_t lhs = g.nonterminal_index(r.lhs);
    if (!prod[lhs] || !reach[lhs]) continue;
    bool keep = true;
    for (const auto& sym : r.rhs) {
      if (!g.is_nonterminal(sym)) continue;
      std::size_t s = g.nonterminal_index(sym);
      if (!prod[s] || !reach[s]) { keep = false; break; }
    }
    if (keep) rules.push_back(r);
  }
  return Cfg(g.terminals(), std::move(nts), g.start(), std::move(rules));
}

InfinitenessResult is_infinite(const Cfg& g0) {
  Cfg g = reduce(g0);
  if (g.rules().empty()) return {false, {}};
  auto comp = compile(g);
  auto prod = productive_set(comp);
  auto cp = canpump_set(comp, prod);

  // Edges A -> B per occurrence of B in a rule of A; an edge is pumping when
  // some sibling symbol can derive a non-empty word.
  struct Edge {
    int to;
    int rule;
    std::size_t pos;
    bool pumping;
  };
  std::vector<std::vector<Edge>> adj(comp.n_nt);
  for (std::size_t ri = 0; ri < comp.rules.size(); ++ri) {
    const auto& r = comp.rules[ri];
    for (std::size_t i = 0; i < r.rhs.size(); ++i) {
      int b = r.rhs[i];
      if (Compiled::is_term(b)) continue;
      bool pump = false;
      for (std::size_t j = 0; j < r.rhs.size(); ++j) {
        if (j == i) continue;
        int s = r.rhs[j];
        if (Compiled::is_term(s) || cp[s]) { pump = true; break; }
      }
      adj[r.lhs].push_back({b, static_cast<int>(ri), i, pump});
    }
  }

  // Tarjan SCC.
  std::vector<int> scc(comp.n_nt, -1), low(comp.n_nt), idx(comp.n_nt, -1), stk;
  std::vector<bool> on(comp.n_nt, false);
  int counter = 0, scc_count = 0;
  std::function<void(int)> dfs = [&](int v) {
    idx[v] = low[v] = counter++;
    stk.push_back(v);
    on[v] = true;
    for (const auto& e : adj[v]) {
      if (idx[e.to] < 0) {
        dfs(e.to);
        low[v] = std::min(low[v], low[e.to]);
      } else if (on[e.to]) {
        low[v] = std::min(low[v], idx[e.to]);
      }
    }
    if (low[v] == idx[v]) {
      while (true) {
        int w = stk.back();
        stk.pop_back();
        on[w] = false;
        scc[w] = scc_count;
        if (w == v) break;
      }
      ++scc_count;
    }
  };
  for (int v = 0; v < comp.n_nt; ++v)
    if (idx[v] < 0) dfs(v);

  int pump_from = -1;
  const Edge* pump_edge = nullptr;
  for (int a = 0; a < comp.n_nt && !pump_edge; ++a)
    for (const auto& e : adj[a])
      if (e.pumping && scc[a] == scc[e.to]) {
        pump_from = a;
        pump_edge = &e;
        break;
      }
  if (!pump_edge) return {false, {}};

  // Build a witness x.u.w.v.z showing one pump of the cycle through the
  // pumping edge.
  auto mw = min_words(comp);
  auto mp = min_nonempty_words(comp);
  auto realize = [&](const CRule& r, std::size_t hole,
                     std::optional<std::size_t> pump_pos) {
    Word left, right;
    for (std::size_t i = 0; i < r.rhs.size(); ++i) {
      if (i == hole) continue;
      int s = r.rhs[i];
      Word piece;
      if (Compiled::is_term(s))
        piece.push_back(Compiled::term_char(s));
      else if (pump_pos && *pump_pos == i)
        piece = *mp[s];
      else
        piece = *mw[s];
      (i < hole ? left : right) += piece;
    }
    return std::make_pair(left, right);
  };

  // Cycle pump_edge->to ... -> pump_from within the SCC (BFS on edges).
  std::vector<const Edge*> via(comp.n_nt, nullptr);
  std::vector<int> parent(comp.n_nt, -1);
  std::deque<int> bfs{pump_edge->to};
  std::vector<bool> seen(comp.n_nt, false);
  seen[pump_edge->to] = true;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop_front();
    if (v == pump_from) break;
    for (const auto& e : adj[v]) {
      if (scc[e.to] != scc[v] || seen[e.to]) continue;
      seen[e.to] = true;
      via[e.to] = &e;
      parent[e.to] = v;
      bfs.push_back(e.to);
    }
  }

  // Realize the pump A => u A v: first the pumping edge, then the return path.
  std::size_t pump_sibling = 0;
  {
    const auto& r = comp.rules[pump_edge->rule];
    for (std::size_t j = 0; j < r.rhs.size(); ++j) {
      if (j == pump_edge->pos) continue;
      int s = r.rhs[j];
      if (Compiled::is_term(s) || cp[s]) { pump_sibling = j; break; }
    }
  }
  auto [u_pump, v_pump] =
      realize(comp.rules[pump_edge->rule], pump_edge->pos, pump_sibling);
  Word pump_left = u_pump, pump_right = v_pump;
  {
    // Walk pump_edge->to ... pump_from backwards through BFS parents.
    std::vector<const Edge*> path;
    int v = pump_from;
    while (v != pump_edge->to) {
      path.push_back(via[v]);
      v = parent[v];
    }
    std::reverse(path.begin(), path.end());
    for (const Edge* e : path) {
      auto [l, r] = realize(comp.rules[e->rule], e->pos, std::nullopt);
      pump_left += l;
      pump_right = r + pump_right;
    }
  }

  // Context of pump_from, reachable from the start symbol.
  int start = static_cast<int>(g.nonterminal_index(g.start()));
  std::vector<std::optional<std::pair<Word, Word>>> ctx(comp.n_nt);
  ctx[start] = std::make_pair(Word{}, Word{});
  std::deque<int> cw{start};
  while (!cw.empty()) {
    int a = cw.front();
    cw.pop_front();
    for (int ri : comp.rules_of[a])
      for (std::size_t i = 0; i < comp.rules[ri].rhs.size(); ++i) {
        int b = comp.rules[ri].rhs[i];
        if (Compiled::is_term(b) || ctx[b]) continue;
        auto [l, r] = realize(comp.rules[ri], i, std::nullopt);
        ctx[b] = std::make_pair(ctx[a]->first + l, r + ctx[a]->second);
        cw.push_back(b);
      }
  }

  Word core = *mw[pump_from];
  Word witness = ctx[pump_from]->first + pump_left + core + pump_right +
                 ctx[pump_from]->second;
  return {true, witness};
}

Cfg prefix_closure(const Cfg& g0) {
  Cfg g = reduce(g0);
  auto comp = compile(g);
  auto prod = productive_set(comp);
  int start = static_cast<int>(g.nonterminal_index(g.start()));
  if (!prod[start])  // LF of the empty language is empty
    return Cfg(g.terminals(), {g.start()}, g.start(), {});

  // Suffix for generated names, grown until it collides with nothing.
  std::string tag = "$pre";
  auto clashes = [&] {
    for (const auto& n : g.nonterminals())
      if (n.size() >= tag.size() &&
          n.compare(n.size() - tag.size(), tag.size(), tag) == 0)
        return true;
    return false;
  };
  while (clashes()) tag += "$";
  auto primed = [&](const std::string& name) { return name + tag; };
  auto letter_nt = [&](char c) { return "LF" + tag + c; };

  std::vector<std::string> nts = g.nonterminals();
  for (const auto& a : g.nonterminals()) nts.push_back(primed(a));
  std::vector<bool> letter_used(256, false);
  std::vector<Rule> rules = g.rules();
  for (const auto& r : g.rules()) {
    if (r.rhs.empty()) {
      rules.push_back({primed(r.lhs), {}});
      continue;
    }
    for (std::size_t i = 0; i < r.rhs.size(); ++i) {
      std::vector<std::string> rhs(r.rhs.begin(), r.rhs.begin() + i);
      const std::string& sym = r.rhs[i];
      if (g.is_nonterminal(sym)) {
        rhs.push_back(primed(sym));
      } else {
        letter_used[static_cast<unsigned char>(sym[0])] = true;
        rhs.push_back(letter_nt(sym[0]));
      }
      rules.push_back({primed(r.lhs), std::move(rhs)});
    }
  }
  for (int c = 0; c < 256; ++c)
    if (letter_used[c]) {
      nts.push_back(letter_nt(static_cast<char>(c)));
      rules.push_back({letter_nt(static_cast<char>(c)), {std::string(1, static_cast<char>(c))}});
      rules.push_back({letter_nt(static_cast<char>(c)), {}});
    }
  return reduce(Cfg(g.terminals(), std::move(nts), primed(g.start()), std::move(rules)));
}

Cfg intersect_dfa(const Cfg& g, const Dfa& d) {
  const std::size_t ns = d.state_count();
  std::string tag = "I";
  auto taken = [&] {
    for (const auto& n : g.nonterminals())
      if (n.rfind(tag, 0) == 0) return true;
    return false;
  };
  while (taken()) tag += "$";
  auto nt_name = [&](std::size_t p, const std::string& a, std::size_t q) {
    return tag + std::to_string(p) + "." + a + "." + std::to_string(q);
  };
  std::vector<std::string> nts;
  for (std::size_t p = 0; p < ns; ++p)
    for (const auto& a : g.nonterminals())
      for (std::size_t q = 0; q < ns; ++q) nts.push_back(nt_name(p, a, q));
  const std::string top = tag + "$start";
  nts.push_back(top);

  std::vector<Rule> rules;
  for (const auto& r : g.rules()) {
    // Enumerate state sequences p0..pk; terminal positions are forced by the
    // DFA's transition function.
    std::vector<std::string> rhs(r.rhs.size());
    std::function<void(std::size_t, std::size_t, std::size_t)> emit =
        [&](std::size_t pos, std::size_t p0, std::size_t p) {
          if (pos == r.rhs.size()) {
            rules.push_back({nt_name(p0, r.lhs, p),
                             std::vector<std::string>(rhs.begin(), rhs.end())});
            return;
          }
          const std::string& sym = r.rhs[pos];
          if (!g.is_nonterminal(sym)) {
            auto li = d.letters.find(sym[0]);
            if (li == std::string::npos) return;  // letter absent: no word
            rhs[pos] = sym;
            emit(pos + 1, p0, d.next[p][li]);
            return;
          }
          for (std::size_t q = 0; q < ns; ++q) {
            rhs[pos] = nt_name(p, sym, q);
            emit(pos + 1, p0, q);
          }
        };
    for (std::size_t p0 = 0; p0 < ns; ++p0) emit(0, p0, p0);
  }
  for (std::size_t f = 0; f < ns; ++f)
    if (d.accepting[f])
      rules.push_back({top, {nt_name(d.initial, g.start(), f)}});
  return reduce(Cfg(g.terminals(), std::move(nts), top, std::move(rules)));
}

std::set<Word> enumerate_words(const Cfg& g, std::size_t max_len) {
  auto comp = compile(g);
  std::vector<std::set<Word>> sets(comp.n_nt);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : comp.rules) {
      std::set<Word> partial{Word{}};
      for (int s : r.rhs) {
        std::set<Word> next;
        for (const auto& w : partial) {
          if (Compiled::is_term(s)) {
            if (w.size() + 1 <= max_len) next.insert(w + Compiled::term_char(s));
          } else {
            for (const auto& x : sets[s])
              if (w.size() + x.size() <= max_len) next.insert(w + x);
          }
        }
        partial = std::move(next);
        if (partial.empty()) break;
      }
      for (auto& w : partial)
        if (sets[r.lhs].insert(w).second) changed = true;
    }
  }
  return sets[g.nonterminal_index(g.start())];
}

std::size_t max_word_length(const Cfg& g0) {
  Cfg g = reduce(g0);
  if (g.rules().empty()) return 0;
  auto comp = compile(g);
  // Longest-yield fixpoint.  Dependency chains are at most n_nt deep and
  // lambda-cycles do not grow values, so a finite language converges within
  // ~2*n_nt sweeps; further growth means the language was infinite.
  std::vector<std::size_t> len(comp.n_nt, 0);
  bool changed = true;
  std::size_t guard = 0;
  while (changed) {
    changed = false;
    if (++guard > 2 * static_cast<std::size_t>(comp.n_nt) + 8)
      throw std::logic_error("max_word_length called on an infinite language");
    for (const auto& r : comp.rules) {
      std::size_t total = 0;
      for (int s : r.rhs)
        total += Compiled::is_term(s) ? 1 : len[s];
      if (total > len[r.lhs]) { len[r.lhs] = total; changed = true; }
    }
  }
  return len[g.nonterminal_index(g.start())];
}

}  // namespace omega
