// Context-free grammars over finite words: exact derivation counting,
// infiniteness with pump witnesses, prefix closure, product with a DFA.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "omegamb/dfa.hpp"
#include "omegamb/words.hpp"

namespace omega {

struct Rule {
  std::string lhs;
  std::vector<std::string> rhs;  // each entry a nonterminal name or a
                                 // single-character terminal
  bool operator==(const Rule&) const = default;
};

/// A context-free grammar.  Terminals are single characters; nonterminals
/// are named.  Construction validates that the two name spaces are disjoint
/// and that every referenced symbol is declared.
class Cfg {
 public:
  Cfg(Alphabet terminals, std::vector<std::string> nonterminals,
      std::string start, std::vector<Rule> rules);

  const Alphabet& terminals() const { return terminals_; }
  const std::vector<std::string>& nonterminals() const { return nonterminals_; }
  const std::string& start() const { return start_; }
  const std::vector<Rule>& rules() const { return rules_; }

  bool is_nonterminal(const std::string& sym) const {
    return nonterminal_index_.count(sym) != 0;
  }
  std::size_t nonterminal_index(const std::string& sym) const {
    return nonterminal_index_.at(sym);
  }

 private:
  Alphabet terminals_;
  std::vector<std::string> nonterminals_;
  std::string start_;
  std::vector<Rule> rules_;
  std::map<std::string, std::size_t> nonterminal_index_;
};

/// Number of distinct leftmost derivations of a word, reported exactly up to
/// a cap.  Infinite means a derivation cycle pumps the count without bound.
struct ParseCount {
  enum class Kind { Exact, MoreThan, Infinite };
  Kind kind = Kind::Exact;
  std::uint64_t value = 0;  // Exact: the count; MoreThan: the cap

  static ParseCount exact(std::uint64_t k) { return {Kind::Exact, k}; }
  static ParseCount more_than(std::uint64_t cap) { return {Kind::MoreThan, cap}; }
  static ParseCount infinite() { return {Kind::Infinite, 0}; }
  bool operator==(const ParseCount&) const = default;
};

/// Removes unreachable and unproductive symbols; the language is unchanged.
/// An empty language leaves the bare start symbol and no rules.
Cfg reduce(const Cfg& g);

/// Distinct leftmost derivations of w in g (equivalently, parse trees of the
/// original grammar).
ParseCount count_derivations(const Cfg& g, const Word& w, std::uint64_t cap = 64);

/// Membership: does g derive w at all?
bool derives(const Cfg& g, const Word& w);

struct InfinitenessResult {
  bool infinite = false;
  Word witness;  // a pumpable word of the language when infinite
};

/// Exact infiniteness of L(g), with a witness word exhibiting one pump.
InfinitenessResult is_infinite(const Cfg& g);

/// Grammar for LF(L(g)), the set of finite prefixes of words of the
/// language.  LF of the empty language is empty.
Cfg prefix_closure(const Cfg& g);

/// Bar-Hillel product: L(result) = L(g) intersected with L(d).
Cfg intersect_dfa(const Cfg& g, const Dfa& d);

/// All words of the language up to the given length, by grammar fixpoint.
std::set<Word> enumerate_words(const Cfg& g, std::size_t max_len);

/// Length of the longest word of a finite language; must only be called when
/// is_infinite(g) is false.
std::size_t max_word_length(const Cfg& g);

}  // namespace omega
