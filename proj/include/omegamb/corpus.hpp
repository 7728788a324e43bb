// Ready-made example grammars and automata with closed-form reference
// checkers, plus the block decoder for the g(W) code language.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "omegamb/bpda.hpp"
#include "omegamb/cfg.hpp"
#include "omegamb/relations.hpp"
#include "omegamb/words.hpp"

namespace omega::corpus {

struct CorpusEntry {
  std::string name;
  std::string description;
  std::variant<Cfg, Bpda, TwoTapeBa> object;
};

/// Names: D, gW, W01, L1, V1, V2, V, C, Lp, Lstar (grammars);
/// bpda_Vd, bpda_anbn_c, bpda_gW_omega (automata); tba_id, tba_all,
/// tba_double (relations).  Throws ParseError on unknown names.
CorpusEntry get(const std::string& name);
std::vector<std::string> names();

/// Direct set-builder predicates for the finitary corpus languages.
bool is_D(const Word& w);
bool is_gW(const Word& w);
bool is_V1(const Word& w);
bool is_V2(const Word& w);
bool is_V(const Word& w);
bool is_L1(const Word& w);
bool is_C(const Word& w);
bool is_palindrome(const Word& w);

/// Closed-form omega-level reference checkers, evaluated by pattern
/// matching on the canonical lasso.  Names: Adh_L1, Adh_C, delta_L1,
/// delta_V, omega_Lstar.
bool reference_check(const std::string& name, const Lasso& w);

/// The unique block decomposition of a g(W) word:
/// x = s1.u1.d.v1 ... s(n+1).u(n+1).d.v(n+1) with skeleton s = 0^n 1,
/// reconstructed right to left (the last v is everything after the last d,
/// whose parity forces |u|).  Failure (nullopt) iff x is not in g(W).
struct GwBlock {
  Word u, v;
};
struct GwDecomposition {
  std::size_t n = 0;  // number of 0-blocks
  std::vector<GwBlock> blocks;  // n+1 of them
};
std::optional<GwDecomposition> decode_gW(const Word& x);

/// All words of g(W) with |x| <= max_len, generated structurally.
std::vector<Word> enumerate_gW(std::size_t max_len);

/// A lasso in g(W)^omega with at least two factorizations (the parity slack
/// of the block language sustains two forever-disjoint cut streams).
Lasso ambiguous_gw_lasso();

}  // namespace omega::corpus
