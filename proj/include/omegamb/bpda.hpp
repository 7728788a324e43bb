// Buchi pushdown automata: lasso acceptance, exact emptiness with witnesses,
// bounded run counting, uncountability certificates, and run coding.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "omegamb/words.hpp"

namespace omega {

/// One transition (from, input, top) -> (to, push).  input == nullopt is a
/// lambda move; push is written top-first (leftmost symbol becomes the new
/// top of the stack).
struct PdaTransition {
  std::string from;
  std::optional<char> input;
  char top;
  std::string to;
  std::string push;
  bool operator==(const PdaTransition&) const = default;
};

/// A Buchi pushdown automaton.  Acceptance: some run on the omega-word
/// consumes all of it and visits a final state infinitely often.  The empty
/// stack is dead: no transition fires without a top symbol.
class Bpda {
 public:
  Bpda(std::vector<std::string> states, Alphabet input_alphabet,
       Alphabet stack_alphabet, std::string initial_state, char initial_stack,
       std::vector<std::string> final_states,
       std::vector<PdaTransition> transitions);

  const std::vector<std::string>& states() const { return states_; }
  const Alphabet& input_alphabet() const { return input_alphabet_; }
  const Alphabet& stack_alphabet() const { return stack_alphabet_; }
  const std::string& initial_state() const { return states_[initial_]; }
  char initial_stack() const { return initial_stack_; }
  const std::vector<std::string>& final_states() const { return final_names_; }
  const std::vector<PdaTransition>& transitions() const { return transitions_; }

  std::size_t state_count() const { return states_.size(); }
  std::size_t state_index(const std::string& name) const;
  std::size_t initial_index() const { return initial_; }
  bool is_final(std::size_t state) const { return final_[state]; }

  /// Transition indices applicable for (state, input letter or lambda, top).
  /// `input == 0` encodes lambda.
  const std::vector<std::size_t>& delta(std::size_t state, char input,
                                        char top) const;

 private:
  std::vector<std::string> states_;
  Alphabet input_alphabet_;
  Alphabet stack_alphabet_;
  std::size_t initial_;
  char initial_stack_;
  std::vector<std::string> final_names_;
  std::vector<bool> final_;
  std::vector<PdaTransition> transitions_;
  std::map<std::string, std::size_t> name_index_;
  // delta index: [state][letter slot][stack symbol] -> transition ids, with
  // slot 0 = lambda and slot 1+i = i-th input letter.
  std::vector<std::vector<std::vector<std::vector<std::size_t>>>> index_;
};

/// A configuration: control state plus stack content, top first.
struct Config {
  std::size_t state = 0;
  std::string stack;
  auto operator<=>(const Config&) const = default;
};

/// One step of a run: the configuration reached and whether the step that
/// produced it consumed an input letter (flag 1) or was a lambda move
/// (flag 0).
struct RunStep {
  Config config;
  int flag = 1;
  auto operator<=>(const RunStep&) const = default;
};

/// All one-step successors of a configuration on `letter` (0 for lambda),
/// paired with the epsilon flag of the step.
std::vector<std::pair<Config, int>> step(const Bpda& a, const Config& c,
                                         char letter);

/// A finitely represented accepting run: a stem into a configuration-phase
/// node and a cycle returning to it.  Transition ids index a.transitions().
struct RunLasso {
  std::vector<std::size_t> stem_transitions;
  std::vector<std::size_t> cycle_transitions;
  std::vector<RunStep> stem;   // configurations after each stem step
  std::vector<RunStep> cycle;  // configurations after each cycle step
  std::size_t input_phase = 0;  // phase of the node the cycle returns to
};

/// Finite evidence that a word carries continuum-many accepting runs: a
/// reachable node with two prefix-incomparable cycles, the marked one
/// visiting a final state, both consuming input.
struct Certificate {
  Config node;
  std::size_t phase = 0;
  std::vector<std::size_t> path_to_node;  // transition ids from the start
  std::vector<std::size_t> cycle_a;       // the accepting cycle
  std::vector<std::size_t> cycle_b;
  bool operator==(const Certificate&) const = default;
};

/// Lower-bound evidence about the number of accepting runs on one word.
/// Claims are only ever AtLeast(lower_bound) or Uncountable; countable
/// infinity is never claimed because no finite witness establishes it.
struct AmbiguityReport {
  std::uint64_t lower_bound = 0;
  bool exhaustive_within_bounds = false;
  std::optional<Certificate> uncountable_certificate;

  bool claims_uncountable() const { return uncountable_certificate.has_value(); }
};

/// Exact membership of the lasso word: product with the lasso's
/// deterministic Buchi acceptor, then emptiness.
bool accepts_lasso(const Bpda& a, const Lasso& w);

struct EmptinessResult {
  bool empty = true;
  std::optional<Lasso> witness;  // accepted lasso when non-empty
};

/// Exact emptiness of L(a), with an ultimately periodic witness on
/// non-emptiness.
EmptinessResult is_empty(const Bpda& a);

/// Exhaustive exploration of the product region with |stack| <= stack_bound
/// and depth <= step_bound; counts pairwise-distinct accepting runs found
/// and searches for an uncountability certificate.  When
/// exhaustive_within_bounds is set the count is exact.
AmbiguityReport count_runs_bounded(const Bpda& a, const Lasso& w,
                                   std::size_t step_bound,
                                   std::size_t stack_bound);

/// Concrete accepting run lassos found within the same bounded region
/// (pairwise distinct as runs).
std::vector<RunLasso> accepting_run_lassos(const Bpda& a, const Lasso& w,
                                           std::size_t step_bound,
                                           std::size_t stack_bound,
                                           std::size_t max_found = 16);

struct VerifyResult {
  bool ok = false;
  std::string diagnostic;
};

/// Soundness gate: a true verdict implies the word has continuum-many
/// accepting runs on this automaton.
VerifyResult verify_certificate(const Bpda& a, const Lasso& w,
                                const Certificate& c);

/// Expands a certificate into `choices`-fold mixed run prefixes (every way
/// of interleaving the two cycles), for distinctness checks.
std::vector<std::vector<RunStep>> certificate_run_prefixes(
    const Bpda& a, const Lasso& w, const Certificate& c, std::size_t choices);

/// Deterministic embedding of states, stack symbols and flags into single
/// characters, for the run-coding predicates.  Stack symbols keep their own
/// characters unless they clash with a state character or a flag digit.
class RunCodec {
 public:
  explicit RunCodec(const Bpda& a);

  /// q1.gamma1.eps1.q2.gamma2.eps2... for a run prefix.
  Word encode_run_prefix(const std::vector<RunStep>& steps) const;
  /// Inverse of encode_run_prefix; nullopt when x is not a valid code.
  std::optional<std::vector<RunStep>> decode(const Word& x) const;

  /// R': x codes a configuration/flag sequence from (q0, Z0) whose induced
  /// letters form a prefix of u, with |u| = |x| and final flag 1.
  bool in_R_prime(const Word& u, const Word& x) const;
  /// R'': |u| = |x| and x ends with the character of a final state.
  bool in_R_second(const Word& u, const Word& x) const;

  char state_char(std::size_t state) const { return state_chars_[state]; }
  char stack_char(char sym) const;

 private:
  const Bpda* a_;
  std::vector<char> state_chars_;
  std::string stack_from_, stack_to_;
};

}  // namespace omega
