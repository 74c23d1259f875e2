#pragma once

// Words over the 2n-letter alphabet {X_1..X_n, X_1*..X_n*}. Letter j+n is the
// adjoint of letter j. Words compare in graded-lex order.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncsos {

using Letter = int;

struct Alphabet {
  int n = 1;

  explicit Alphabet(int count = 1) : n(count) {
    if (count < 1) throw std::invalid_argument("alphabet needs at least one variable");
  }
  int letters() const { return 2 * n; }
  bool contains(Letter l) const { return l >= 1 && l <= 2 * n; }
  Letter star(Letter l) const { return l <= n ? l + n : l - n; }

  friend bool operator==(Alphabet, Alphabet) = default;
};

class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t degree() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  bool valid_for(Alphabet a) const {
    return std::all_of(letters_.begin(), letters_.end(),
                       [a](Letter l) { return a.contains(l); });
  }

  friend Word operator+(const Word& u, const Word& v) {
    std::vector<Letter> out;
    out.reserve(u.degree() + v.degree());
    out.insert(out.end(), u.letters_.begin(), u.letters_.end());
    out.insert(out.end(), v.letters_.begin(), v.letters_.end());
    return Word(std::move(out));
  }

  friend bool operator==(const Word&, const Word&) = default;

  // Graded lex: shorter first, then letter by letter.
  friend std::strong_ordering operator<=>(const Word& u, const Word& v) {
    if (auto c = u.degree() <=> v.degree(); c != 0) return c;
    return std::lexicographical_compare_three_way(
        u.letters_.begin(), u.letters_.end(), v.letters_.begin(), v.letters_.end());
  }

 private:
  std::vector<Letter> letters_;
};

inline std::strong_ordering graded_lex_compare(const Word& u, const Word& v) {
  return u <=> v;
}

/// (X_{j1}..X_{jk})* = X_{jk}*..X_{j1}*.
inline Word adjoint(const Word& w, Alphabet a) {
  std::vector<Letter> out(w.letters().rbegin(), w.letters().rend());
  for (auto& l : out) {
    if (!a.contains(l)) throw std::out_of_range("letter outside alphabet");
    l = a.star(l);
  }
  return Word(std::move(out));
}

inline bool is_symmetric(const Word& w, Alphabet a) { return adjoint(w, a) == w; }

/// All words of exactly the given degree, in graded-lex order.
inline std::vector<Word> words_of_degree(Alphabet a, std::size_t degree) {
  std::vector<Word> out;
  std::vector<Letter> cur(degree, 1);
  while (true) {
    out.emplace_back(cur);
    std::size_t pos = degree;
    while (pos > 0 && cur[pos - 1] == a.letters()) cur[--pos] = 1;
    if (pos == 0) break;
    ++cur[pos - 1];
  }
  return out;
}

/// All words of degree <= max_degree, in graded-lex order.
inline std::vector<Word> words_up_to(Alphabet a, std::size_t max_degree) {
  std::vector<Word> out;
  for (std::size_t d = 0; d <= max_degree; ++d) {
    auto level = words_of_degree(a, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// Count of words of degree <= max_degree: sum_k (2n)^k.
inline std::size_t count_words_up_to(Alphabet a, std::size_t max_degree) {
  std::size_t total = 0, level = 1;
  for (std::size_t d = 0; d <= max_degree; ++d) {
    total += level;
    level *= static_cast<std::size_t>(a.letters());
  }
  return total;
}

/// "x1*x2'" style rendering; the empty word renders as "1".
inline std::string to_string(const Word& w, Alphabet a) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.degree(); ++i) {
    if (i) s += '*';
    Letter l = w[i];
    bool starred = l > a.n;
    s += 'x';
    s += std::to_string(starred ? l - a.n : l);
    if (starred) s += '\'';
  }
  return s;
}

}  // namespace ncsos
