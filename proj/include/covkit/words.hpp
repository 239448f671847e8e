#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covkit {

/// The free generating set S. Generator i is named names[i].
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> names);
  /// Generators named "a", "b", ... (or "s0", "s1", ... past 26).
  static Alphabet standard(std::size_t size);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t generator) const { return names_.at(generator); }
  const std::vector<std::string>& names() const { return names_; }
  /// Index of a generator name; throws ParseError when absent.
  std::size_t index_of(std::string_view name) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> names_;
};

struct Letter {
  std::size_t generator = 0;
  int exponent = 1;  // +1 or -1

  Letter inverse() const { return {generator, -exponent}; }
  bool cancels(const Letter& other) const {
    return generator == other.generator && exponent == -other.exponent;
  }
  auto operator<=>(const Letter&) const = default;
};

/// A freely reduced word. The constructor reduces, so every Word in
/// circulation is canonical.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> raw);

  static Word generator(std::size_t g, int exponent = 1) { return Word({Letter{g, exponent}}); }

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::span<const Letter> letters() const { return letters_; }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }

  /// Per-generator exponent sums (abelianization image).
  std::vector<long> exponent_sums(std::size_t alphabet_size) const;

  /// Shortlex: shorter first, then lexicographic on letters with
  /// (g, +1) < (g, -1) < (g+1, +1).
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }

 private:
  std::vector<Letter> letters_;
};

Word reduce(std::span<const Letter> raw);
Word concat(const Word& u, const Word& v);
Word invert(const Word& u);
/// u^k for any integer k.
Word power(const Word& u, long k);

/// Concatenation of words tagged with alphabets; throws AlphabetMismatch.
Word concat(const Alphabet& a, const Word& u, const Alphabet& b, const Word& v);

/// All reduced words of length <= max_len in shortlex order.
std::vector<Word> enumerate_words(const Alphabet& alphabet, std::size_t max_len);

/// 1 + 2k((2k-1)^L - 1)/(2k-2) for k >= 2, 2L + 1 for k = 1.
std::size_t count_reduced_words(std::size_t alphabet_size, std::size_t max_len);

/// Visits every reduced word of length <= max_len depth-first. The visitor
/// receives the word as a letter span and may return false to prune the
/// subtree below it.
template <typename Visitor>
void for_each_reduced_word(std::size_t alphabet_size, std::size_t max_len, Visitor&& visit);

/// "a b^-1 a"; the empty word prints as "1".
std::string format_word(const Alphabet& alphabet, const Word& w);
/// Accepts whitespace-separated tokens "name", "name^-1", "name^k"; "1" and
/// the empty string denote the identity. Also accepts "name^k" for any
/// nonzero integer k.
Word parse_word(const Alphabet& alphabet, std::string_view text);

// --- implementation of the template ---------------------------------------

namespace detail {
template <typename Visitor>
void reduced_word_dfs(std::size_t k, std::size_t max_len, std::vector<Letter>& stack,
                      Visitor& visit) {
  if (!visit(std::span<const Letter>(stack))) return;
  if (stack.size() == max_len) return;
  for (std::size_t g = 0; g < k; ++g) {
    for (int e : {1, -1}) {
      Letter next{g, e};
      if (!stack.empty() && stack.back().cancels(next)) continue;
      stack.push_back(next);
      reduced_word_dfs(k, max_len, stack, visit);
      stack.pop_back();
    }
  }
}
}  // namespace detail

template <typename Visitor>
void for_each_reduced_word(std::size_t alphabet_size, std::size_t max_len, Visitor&& visit) {
  std::vector<Letter> stack;
  stack.reserve(max_len);
  detail::reduced_word_dfs(alphabet_size, max_len, stack, visit);
}

}  // namespace covkit
