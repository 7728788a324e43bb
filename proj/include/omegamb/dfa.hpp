// Complete deterministic finite automata over single-character alphabets.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace omega {

/// A complete DFA: the transition table has an entry for every
/// (state, letter) pair.  States are dense indices.
struct Dfa {
  std::string letters;               // alphabet, in index order
  std::size_t initial = 0;
  std::vector<std::vector<std::size_t>> next;  // next[state][letter index]
  std::vector<bool> accepting;

  std::size_t state_count() const { return next.size(); }
  /// -1 letter index convention is not used; foreign letters are the
  /// caller's error and map to letter_index == npos.
  std::size_t letter_index(char c) const {
    auto p = letters.find(c);
    return p;
  }
  std::size_t step(std::size_t state, char c) const {
    return next[state][letters.find(c)];
  }
  bool accepts(std::string_view w) const {
    std::size_t s = initial;
    for (char c : w) {
      auto li = letters.find(c);
      if (li == std::string::npos) return false;
      s = next[s][li];
    }
    return accepting[s];
  }
};

}  // namespace omega
