// Omega-language operations over finitary grammars: delta-limit and
// adherence membership, omega-power automata, decomposition counting,
// substitution.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "omegamb/bpda.hpp"
#include "omegamb/cfg.hpp"
#include "omegamb/words.hpp"

namespace omega {

struct DeltaLimitResult {
  bool member = false;
  /// On true: a word of W that is a prefix of the lasso and pumps.
  Word pump_witness;
  /// On false: the lengths of all prefixes of the lasso lying in W
  /// (exhaustive; the set is finite exactly when membership fails).
  std::vector<std::size_t> prefix_hits;
};

/// u.v^omega in L(g)^delta: infinitely many prefixes lie in L(g).  Decided
/// exactly as infiniteness of L(g) intersected with the prefix acceptor.
DeltaLimitResult delta_limit_member(const Cfg& g, const Lasso& w);

struct AdherenceResult {
  bool member = false;
  /// On false: a concrete prefix of the lasso outside LF(L(g)).
  Word refutation_prefix;
};

/// u.v^omega in Adh(L(g)): every finite prefix is a prefix of the language.
/// Equals the delta-limit of the prefix closure, since LF(W) is
/// prefix-closed.
AdherenceResult adherence_member(const Cfg& g, const Lasso& w);

/// A Buchi PDA accepting exactly L(g)^omega, with lambda factors excluded
/// and a final-state visit marking every factor boundary.
Bpda omega_power_bpda(const Cfg& g);

/// Two prefix-incomparable cycles of factor cuts at one phase: finite
/// evidence of continuum-many factorizations.
struct DecompositionCertificate {
  std::size_t phase = 0;
  std::vector<Word> stem_factors;
  std::vector<Word> cycle_a;
  std::vector<Word> cycle_b;
};

struct DecompositionReport {
  std::uint64_t lower_bound = 0;
  bool exhaustive_within_bounds = false;
  std::optional<DecompositionCertificate> uncountable_certificate;
  /// Cut-position sets of the distinct factorizations found (stem cuts plus
  /// one cycle), for distinctness inspection.
  std::vector<std::vector<std::size_t>> sample_cut_sets;
};

/// Lower bound on the number of distinct factorizations of u.v^omega into
/// words of L(g) - {lambda}; factorizations are distinct iff their sets of
/// cut positions differ.
DecompositionReport count_decompositions(const Cfg& g, const Lasso& w,
                                         std::uint64_t bound);

/// Grammar substitution: every terminal of the outer grammar is replaced by
/// the language of its image grammar.
Cfg substitute(const Cfg& outer, const std::map<char, Cfg>& images);

}  // namespace omega
