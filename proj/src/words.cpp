#include "covkit/words.hpp"

#include "covkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace covkit {

namespace {

bool valid_name(std::string_view name) {
  if (name.empty() || name == "1") return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

int letter_rank(const Letter& l) {
  return static_cast<int>(2 * l.generator) + (l.exponent == 1 ? 0 : 1);
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error("alphabet must have at least one generator");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!valid_name(n)) throw ParseError("invalid generator name '" + n + "'");
    if (!seen.insert(n).second) throw ParseError("duplicate generator name '" + n + "'");
  }
}

Alphabet Alphabet::standard(std::size_t size) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < size; ++i) {
    names.push_back(size <= 26 ? std::string(1, static_cast<char>('a' + i))
                               : "s" + std::to_string(i));
  }
  return Alphabet(std::move(names));
}

std::size_t Alphabet::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ParseError("unknown generator '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

Word::Word(std::vector<Letter> raw) {
  for (const auto& l : raw) {
    if (l.exponent != 1 && l.exponent != -1) throw Error("letter exponent must be +1 or -1");
  }
  letters_.reserve(raw.size());
  for (const auto& l : raw) {
    if (!letters_.empty() && letters_.back().cancels(l)) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

std::vector<long> Word::exponent_sums(std::size_t alphabet_size) const {
  std::vector<long> sums(alphabet_size, 0);
  for (const auto& l : letters_) sums.at(l.generator) += l.exponent;
  return sums;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.length() != b.length()) return a.length() <=> b.length();
  for (std::size_t i = 0; i < a.length(); ++i) {
    int ra = letter_rank(a[i]);
    int rb = letter_rank(b[i]);
    if (ra != rb) return ra <=> rb;
  }
  return std::strong_ordering::equal;
}

Word reduce(std::span<const Letter> raw) { return Word(std::vector<Letter>(raw.begin(), raw.end())); }

Word concat(const Word& u, const Word& v) {
  std::vector<Letter> raw(u.letters().begin(), u.letters().end());
  raw.insert(raw.end(), v.letters().begin(), v.letters().end());
  return Word(std::move(raw));
}

Word concat(const Alphabet& a, const Word& u, const Alphabet& b, const Word& v) {
  if (!(a == b)) throw AlphabetMismatch("cannot concatenate words over different alphabets");
  return concat(u, v);
}

Word invert(const Word& u) {
  std::vector<Letter> raw;
  raw.reserve(u.length());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it) raw.push_back(it->inverse());
  return Word(std::move(raw));
}

Word power(const Word& u, long k) {
  Word base = k < 0 ? invert(u) : u;
  Word out;
  for (long i = 0; i < (k < 0 ? -k : k); ++i) out = concat(out, base);
  return out;
}

std::vector<Word> enumerate_words(const Alphabet& alphabet, std::size_t max_len) {
  // Breadth by length keeps shortlex order without a final sort.
  std::vector<Word> out{Word()};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (std::size_t g = 0; g < alphabet.size(); ++g) {
        for (int e : {1, -1}) {
          Letter next{g, e};
          const Word& w = out[i];
          if (!w.empty() && w[w.length() - 1].cancels(next)) continue;
          std::vector<Letter> letters(w.letters().begin(), w.letters().end());
          letters.push_back(next);
          out.emplace_back(std::move(letters));
        }
      }
    }
    level_begin = level_end;
  }
  std::stable_sort(out.begin(), out.end());
  return out;
}

std::size_t count_reduced_words(std::size_t k, std::size_t max_len) {
  if (k == 0) return 1;
  if (k == 1) return 2 * max_len + 1;
  std::size_t total = 1;
  std::size_t level = 2 * k;
  for (std::size_t len = 1; len <= max_len; ++len) {
    total += level;
    level *= 2 * k - 1;
  }
  return total;
}

std::string format_word(const Alphabet& alphabet, const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.length(); ++i) {
    if (i) os << ' ';
    os << alphabet.name(w[i].generator);
    if (w[i].exponent == -1) os << "^-1";
  }
  return os.str();
}

Word parse_word(const Alphabet& alphabet, std::string_view text) {
  std::vector<Letter> raw;
  std::istringstream is{std::string(text)};
  std::string token;
  while (is >> token) {
    if (token == "1") continue;
    std::string_view name = token;
    long k = 1;
    if (auto caret = token.find('^'); caret != std::string::npos) {
      name = std::string_view(token).substr(0, caret);
      std::string_view exp = std::string_view(token).substr(caret + 1);
      auto [ptr, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), k);
      if (ec != std::errc() || ptr != exp.data() + exp.size() || k == 0) {
        throw ParseError("bad exponent in token '" + token + "'");
      }
    }
    std::size_t g = alphabet.index_of(name);
    for (long i = 0; i < (k < 0 ? -k : k); ++i) raw.push_back(Letter{g, k < 0 ? -1 : 1});
  }
  return Word(std::move(raw));
}

}  // namespace covkit
