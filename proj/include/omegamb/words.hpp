// Alphabets, finite words and ultimately periodic omega-words in lasso form.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "omegamb/dfa.hpp"

namespace omega {

/// Raised on malformed textual or structural input (bad lasso syntax,
/// duplicate alphabet letters, undeclared symbols, ...).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A finite word is a plain string of single-character symbols; the empty
/// string is the empty word.
using Word = std::string;

/// An ordered set of single-character symbols.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string_view letters);

  bool contains(char c) const { return member_[static_cast<unsigned char>(c)]; }
  bool contains_word(std::string_view w) const;
  const std::string& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  /// Index of a letter in declaration order; throws for foreign letters.
  std::size_t index(char c) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::string letters_;
  bool member_[256] = {};
};

/// An ultimately periodic omega-word u.v^omega kept in canonical form: the
/// period is primitive and the prefix is the shortest one denoting the same
/// omega-word.  Canonical form makes structural equality decide omega-word
/// equality.
class Lasso {
 public:
  /// Canonicalizes (prefix, period).  The period must be non-empty.
  Lasso(Word prefix, Word period);

  /// Parses the `u(v)` syntax, e.g. "abbcc(d)" or "(ab)".
  static Lasso parse(std::string_view text);

  const Word& prefix() const { return prefix_; }
  const Word& period() const { return period_; }

  /// Letters of u plus one period; every position of the omega-word maps to
  /// a phase in [0, phase_count()).
  std::size_t phase_count() const { return prefix_.size() + period_.size(); }
  char letter_at(std::size_t i) const;
  std::size_t phase_of(std::size_t i) const;
  std::size_t next_phase(std::size_t phase) const;

  /// True when every letter belongs to `sigma`.
  bool over(const Alphabet& sigma) const;

  std::string text() const;

  bool operator==(const Lasso&) const = default;

 private:
  Word prefix_, period_;
};

/// First n letters of u.v^omega.
Word prefix_of(const Lasso& w, std::size_t n);

/// Deterministic acceptor of exactly the finite prefixes of u.v^omega, with
/// |u|+|v|+1 live states plus one rejecting sink.
Dfa prefix_dfa(const Lasso& w);

}  // namespace omega
