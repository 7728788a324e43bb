// 2-tape Buchi automata: exact membership for lasso pairs and exact
// cardinality classification of the set of accepting computations.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omegamb/words.hpp"

namespace omega {

/// One transition (from, input word, output word, to); either word may be
/// empty.
struct TbaTransition {
  std::string from;
  Word input;
  Word output;
  std::string to;
  bool operator==(const TbaTransition&) const = default;
};

/// A 2-tape Buchi automaton.  A computation accepts a pair of omega-words
/// when it visits a final state infinitely often and advances both tapes
/// infinitely often (the accepted relation pairs infinite words only).
class TwoTapeBa {
 public:
  TwoTapeBa(std::vector<std::string> states, Alphabet input_alphabet,
            Alphabet output_alphabet, std::string initial_state,
            std::vector<std::string> final_states,
            std::vector<TbaTransition> transitions);

  const std::vector<std::string>& states() const { return states_; }
  const Alphabet& input_alphabet() const { return input_alphabet_; }
  const Alphabet& output_alphabet() const { return output_alphabet_; }
  const std::string& initial_state() const { return states_[initial_]; }
  const std::vector<std::string>& final_states() const { return final_names_; }
  const std::vector<TbaTransition>& transitions() const { return transitions_; }

  std::size_t state_count() const { return states_.size(); }
  std::size_t state_index(const std::string& name) const;
  std::size_t initial_index() const { return initial_; }
  bool is_final(std::size_t s) const { return final_[s]; }

 private:
  std::vector<std::string> states_;
  Alphabet input_alphabet_, output_alphabet_;
  std::size_t initial_;
  std::vector<std::string> final_names_;
  std::vector<bool> final_;
  std::vector<TbaTransition> transitions_;
};

/// Exact cardinality of the set of accepting computations on one pair.
struct CardinalityClass {
  enum class Kind { Finite, CountablyInfinite, Uncountable };
  Kind kind = Kind::Finite;
  std::uint64_t count = 0;  // meaningful for Finite only

  static CardinalityClass finite(std::uint64_t k) { return {Kind::Finite, k}; }
  static CardinalityClass aleph0() { return {Kind::CountablyInfinite, 0}; }
  static CardinalityClass continuum() { return {Kind::Uncountable, 0}; }
  bool operator==(const CardinalityClass&) const = default;
};

/// A lasso-shaped accepting computation, for witness inspection.
struct ComputationLasso {
  std::vector<std::size_t> stem;   // transition ids
  std::vector<std::size_t> cycle;  // transition ids, returns to its start node
};

/// Exact membership of (w1, w2) in R(t), decided on the finite product of
/// state and the two tape phases with a generalized Buchi check.
bool accepts_pair(const TwoTapeBa& t, const Lasso& w1, const Lasso& w2);

/// As accepts_pair, also returning one accepting lasso computation.
std::optional<ComputationLasso> find_accepting_computation(const TwoTapeBa& t,
                                                           const Lasso& w1,
                                                           const Lasso& w2);

/// Exact trichotomy for the set of accepting computations on the pair.
CardinalityClass classify_computations(const TwoTapeBa& t, const Lasso& w1,
                                       const Lasso& w2);

/// q0.u1.e.v1.q1.u2.e.v2... over K, the two alphabets and a separator; the
/// empty prefix still names the initial state.
std::string encode_computation_prefix(const TwoTapeBa& t,
                                      const std::vector<std::size_t>& transition_ids);

/// Inverse of encode_computation_prefix; nullopt when the string is not a
/// valid code (greedy longest state-name match).
std::optional<std::vector<std::size_t>> decode_computation_prefix(
    const TwoTapeBa& t, const std::string& code);

/// Degree labels ordered k < k+1 < aleph0minus < aleph0 < continuum.
struct DegreeLabel {
  enum class Kind { Finite, Aleph0Minus, Aleph0, Continuum };
  Kind kind = Kind::Finite;
  std::uint64_t k = 0;  // for Finite

  static DegreeLabel finite(std::uint64_t k) { return {Kind::Finite, k}; }
  static DegreeLabel aleph0_minus() { return {Kind::Aleph0Minus, 0}; }
  static DegreeLabel aleph0() { return {Kind::Aleph0, 0}; }
  static DegreeLabel continuum() { return {Kind::Continuum, 0}; }
  bool operator==(const DegreeLabel&) const = default;
  bool operator<(const DegreeLabel& o) const;
  std::string text() const;
};

/// Max over the given pairs of classify_computations, reported as a LOWER
/// BOUND on the automaton's degree of ambiguity (never as the degree
/// itself: that is undecidable in general).
DegreeLabel degree_scan(const TwoTapeBa& t,
                        const std::vector<std::pair<Lasso, Lasso>>& pairs);

}  // namespace omega
