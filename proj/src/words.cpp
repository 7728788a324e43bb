#include "omegamb/words.hpp"

#include <algorithm>
#include <cctype>

namespace omega {

Alphabet::Alphabet(std::string_view letters) {
  for (char c : letters) {
    if (!std::isprint(static_cast<unsigned char>(c)))
      throw ParseError("alphabet symbols must be printable characters");
    if (member_[static_cast<unsigned char>(c)])
      throw ParseError(std::string("duplicate alphabet symbol '") + c + "'");
    member_[static_cast<unsigned char>(c)] = true;
    letters_.push_back(c);
  }
  if (letters_.empty()) throw ParseError("alphabet must be non-empty");
}

bool Alphabet::contains_word(std::string_view w) const {
  return std::all_of(w.begin(), w.end(), [&](char c) { return contains(c); });
}

std::size_t Alphabet::index(char c) const {
  auto p = letters_.find(c);
  if (p == std::string::npos)
    throw ParseError(std::string("symbol '") + c + "' not in alphabet");
  return p;
}

namespace {

// Shortest w with v = w^k, via the failure-function border trick.
Word primitive_root(const Word& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> border(n + 1, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t b = border[i];
    while (b > 0 && v[i] != v[b]) b = border[b];
    border[i + 1] = (v[i] == v[b]) ? b + 1 : 0;
  }
  std::size_t d = n - border[n];
  if (n % d == 0) return v.substr(0, d);
  return v;
}

}  // namespace

Lasso::Lasso(Word prefix, Word period) {
  if (period.empty()) throw ParseError("lasso period must be non-empty");
  period = primitive_root(period);
  // While the prefix ends with the period's last letter, absorb it into the
  // cycle: u.a (v.a)^omega = u (a.v)^omega rotated.  This yields the minimal
  // prefix, and rotation keeps the period primitive.
  while (!prefix.empty() && prefix.back() == period.back()) {
    prefix.pop_back();
    period.insert(period.begin(), period.back());
    period.pop_back();
  }
  prefix_ = std::move(prefix);
  period_ = std::move(period);
}

Lasso Lasso::parse(std::string_view text) {
  auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')')
    throw ParseError("lasso syntax is u(v), e.g. \"abbcc(d)\"");
  std::string_view u = text.substr(0, open);
  std::string_view v = text.substr(open + 1, text.size() - open - 2);
  if (v.empty()) throw ParseError("lasso period must be non-empty");
  auto check = [](std::string_view part) {
    for (char c : part)
      if (c == '(' || c == ')' || !std::isprint(static_cast<unsigned char>(c)))
        throw ParseError("lasso symbols must be printable and not parentheses");
  };
  check(u);
  check(v);
  return Lasso(Word(u), Word(v));
}

char Lasso::letter_at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  return period_[(i - prefix_.size()) % period_.size()];
}

std::size_t Lasso::phase_of(std::size_t i) const {
  if (i < prefix_.size()) return i;
  return prefix_.size() + (i - prefix_.size()) % period_.size();
}

std::size_t Lasso::next_phase(std::size_t phase) const {
  return phase + 1 < phase_count() ? phase + 1 : prefix_.size();
}

bool Lasso::over(const Alphabet& sigma) const {
  return sigma.contains_word(prefix_) && sigma.contains_word(period_);
}

std::string Lasso::text() const { return prefix_ + "(" + period_ + ")"; }

Word prefix_of(const Lasso& w, std::size_t n) {
  Word out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(w.letter_at(i));
  return out;
}

Dfa prefix_dfa(const Lasso& w) {
  // State i (0 <= i <= |u|+|v|) means "i letters of u.v^omega read"; reading
  // the wrong letter falls into the sink.  From the last live state (prefix
  // plus one full period) the expected letter leads back to |u|+1.
  const std::size_t last = w.phase_count();  // |u|+|v|
  const std::size_t sink = last + 1;
  Dfa d;
  std::string letters = w.prefix() + w.period();
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  d.letters = letters;
  d.initial = 0;
  d.next.assign(sink + 1, std::vector<std::size_t>(letters.size(), sink));
  d.accepting.assign(sink + 1, true);
  d.accepting[sink] = false;
  for (std::size_t i = 0; i <= last; ++i) {
    std::size_t target = i < last ? i + 1 : w.prefix().size() + 1;
    d.next[i][letters.find(w.letter_at(i))] = target;
  }
  return d;
}

}  // namespace omega
