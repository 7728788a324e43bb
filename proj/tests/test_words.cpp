#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "omegamb/words.hpp"

using namespace omega;

namespace {

// Direct expansion of u.v^omega, the oracle for everything lasso-shaped.
Word expand(const Word& u, const Word& v, std::size_t n) {
  Word out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(i < u.size() ? u[i] : v[(i - u.size()) % v.size()]);
  return out;
}

Word random_word(std::mt19937& rng, std::size_t max_len, const char* sigma) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, std::char_traits<char>::length(sigma) - 1);
  Word w;
  for (std::size_t i = len(rng); i > 0; --i) w.push_back(sigma[pick(rng)]);
  return w;
}

}  // namespace

TEST_CASE("canonicalize reduces periods and rotates prefixes") {
  CHECK(Lasso("a", "bb") == Lasso("a", "b"));
  CHECK(Lasso("ab", "ab").prefix() == "");
  CHECK(Lasso("ab", "ab").period() == "ab");
  CHECK(Lasso("", "abcabc").period() == "abc");
  CHECK_THROWS_AS(Lasso("a", ""), ParseError);
}

TEST_CASE("canonicalize is idempotent and preserves the denotation") {
  std::mt19937 rng(0);
  for (int it = 0; it < 500; ++it) {
    Word u = random_word(rng, 6, "abc");
    Word v = random_word(rng, 5, "abc");
    if (v.empty()) v = "a";
    Lasso w(u, v);
    Lasso again(w.prefix(), w.period());
    CHECK(w == again);
    std::size_t window = u.size() + w.prefix().size() +
                         2 * std::lcm(v.size(), w.period().size());
    CHECK(prefix_of(w, window) == expand(u, v, window));
  }
}

TEST_CASE("prefix_of matches direct expansion") {
  CHECK(prefix_of(Lasso("a", "b"), 3) == "abb");
  CHECK(prefix_of(Lasso("", "ab"), 0) == "");
  CHECK(prefix_of(Lasso("abbcc", "d"), 7) == "abbccdd");
}

TEST_CASE("lasso text syntax round-trips and rejects junk") {
  CHECK(Lasso::parse("abbcc(d)").text() == "abbcc(d)");
  CHECK(Lasso::parse("(ab)").text() == "(ab)");
  CHECK(Lasso::parse("a(bb)") == Lasso("a", "bb"));
  CHECK_THROWS_AS(Lasso::parse("abc"), ParseError);
  CHECK_THROWS_AS(Lasso::parse("a()"), ParseError);
  CHECK_THROWS_AS(Lasso::parse("(a)b"), ParseError);
}

TEST_CASE("prefix_dfa has the advertised shape and language") {
  Lasso astar("", "a");
  Dfa d = prefix_dfa(astar);
  CHECK(d.state_count() == astar.phase_count() + 2);  // live states + sink
  CHECK(d.accepts(""));
  CHECK(d.accepts("aaaa"));
  CHECK(!d.accepts("ab"));

  Dfa ba = prefix_dfa(Lasso("b", "a"));
  CHECK(ba.accepts(""));
  CHECK(ba.accepts("b"));
  CHECK(ba.accepts("baa"));
  CHECK(!ba.accepts("a"));
  CHECK(!ba.accepts("bb"));

  Dfa big = prefix_dfa(Lasso("abbcc", "d"));
  CHECK(big.accepts("abbccddd"));
  CHECK(!big.accepts("abbcd"));
}

TEST_CASE("prefix_dfa accepts every prefix and rejects every mutation") {
  std::mt19937 rng(1);
  for (int it = 0; it < 120; ++it) {
    Word u = random_word(rng, 4, "ab");
    Word v = random_word(rng, 3, "ab");
    if (v.empty()) v = "b";
    Lasso w(u, v);
    Dfa d = prefix_dfa(w);
    CHECK(d.state_count() == w.phase_count() + 2);
    std::size_t limit = 3 * (w.prefix().size() + w.period().size());
    for (std::size_t n = 0; n <= limit; ++n) {
      Word p = prefix_of(w, n);
      CHECK(d.accepts(p));
      for (std::size_t i = 0; i < n; ++i) {
        for (char c : {'a', 'b'}) {
          if (c == p[i]) continue;
          Word bad = p;
          bad[i] = c;
          CHECK(!d.accepts(bad));
        }
      }
    }
  }
}
