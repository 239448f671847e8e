#pragma once

// Random instance generators and brute-force oracles shared by the unit
// suites and the acceptance runner.

#include "covkit/finite_model.hpp"
#include "covkit/json_io.hpp"
#include "covkit/orbifold.hpp"
#include "covkit/rng.hpp"
#include "covkit/rose_cover.hpp"
#include "covkit/triangulation.hpp"
#include "covkit/weighting.hpp"
#include "covkit/words.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <unistd.h>

namespace covkit::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("covkit-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name), std::ios::binary) << text;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) { return read_text_file(path); }

/// Generators of a permutation group of order <= 60.
inline std::vector<std::vector<std::size_t>> random_permutation_group(Rng& rng) {
  switch (rng.below(5)) {
    case 0: {  // dihedral of order 2n
      std::size_t n = 3 + rng.below(28);
      std::vector<std::size_t> rot(n), ref(n);
      for (std::size_t i = 0; i < n; ++i) {
        rot[i] = (i + 1) % n;
        ref[i] = (n - i) % n;
      }
      return {rot, ref};
    }
    case 1: return {{1, 0, 2, 3}, {1, 2, 3, 0}};           // S4
    case 2: return {{1, 2, 0, 3}, {0, 2, 3, 1}};           // A4
    case 3: return {{1, 2, 3, 4, 0}, {1, 2, 0, 3, 4}};     // A5
    default: return {{1, 0, 2, 3, 4}, {0, 1, 3, 4, 2}};    // S2 x Z3
  }
}

/// JSON for a random finite model: a group of order <= 60, Gamma generated
/// by one random element, and 1..3 random generator images.
inline Json random_finite_model_json(Rng& rng) {
  Json j{{"type", "finite"}};
  std::size_t order = 0;
  if (rng.below(3) == 0) {
    order = 2 + rng.below(59);
    j["group"] = {{"cyclic", order}};
  } else {
    auto gens = random_permutation_group(rng);
    order = FiniteModel::close_permutations(gens).size();
    j["group"] = {{"permutations", gens}};
  }
  j["lattice_generators"] = Json::array({rng.below(order)});
  Json generators = Json::array();
  const std::size_t k = 1 + rng.below(3);
  for (std::size_t s = 0; s < k; ++s) {
    generators.push_back({{"name", std::string(1, static_cast<char>('a' + s))}, {"image", rng.below(order)}});
  }
  j["generators"] = generators;
  return j;
}

/// A random connected rose covering with n vertices and k labels.
inline RoseCover random_rose_cover(Rng& rng, std::size_t n, std::size_t k) {
  for (;;) {
    std::vector<std::vector<Vertex>> out(k);
    for (auto& perm : out) {
      perm.resize(n);
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);
    }
    RoseCover x(Alphabet::standard(k), n, 0, out);
    if (x.is_rose_covering()) return x;
  }
}

/// Quotient of a covering by a random map onto fewer vertices, keeping
/// one edge per (src, dst, label): a Y that admits a positive weighting.
inline LabeledDigraph random_quotient_graph(Rng& rng, const RoseCover& x, std::size_t target) {
  std::vector<std::size_t> image(x.num_vertices());
  for (std::size_t v = 0; v < x.num_vertices(); ++v) image[v] = v < target ? v : rng.below(target);
  LabeledDigraph y(x.alphabet(), target);
  for (std::size_t s = 0; s < x.alphabet().size(); ++s) {
    for (Vertex v = 0; v < x.num_vertices(); ++v) {
      std::size_t a = image[v], b = image[x.out(s, v)];
      if (!y.find_edge(a, b, s)) y.add_edge(a, b, s);
    }
  }
  return y;
}

inline Presentation random_presentation(Rng& rng, std::size_t max_gens, std::size_t max_rels,
                                        std::size_t max_len) {
  const std::size_t n = 1 + rng.below(max_gens);
  Presentation p{Alphabet::standard(n), {}};
  const std::size_t r = rng.below(max_rels + 1);
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Letter> raw;
    const std::size_t len = 1 + rng.below(max_len);
    for (std::size_t k = 0; k < len; ++k) {
      raw.push_back({rng.below(n), rng.below(2) ? 1 : -1});
    }
    p.relators.push_back(Word(raw));
  }
  return p;
}

/// Oracle for d_p: counts maps X -> Z/p that kill every relator, reading
/// relators letter by letter, and returns log_p of the count.
inline std::size_t dp_by_counting_homs(const Presentation& pres, std::uint64_t p) {
  const std::size_t n = pres.num_generators();
  std::vector<std::uint64_t> value(n, 0);
  std::uint64_t count = 0;
  for (;;) {
    bool kills = true;
    for (const auto& r : pres.relators) {
      std::int64_t sum = 0;
      for (const auto& l : r.letters()) sum += l.exponent * static_cast<std::int64_t>(value[l.generator]);
      if (((sum % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p) != 0) {
        kills = false;
        break;
      }
    }
    count += kills;
    std::size_t i = 0;
    while (i < n && ++value[i] == p) value[i++] = 0;
    if (i == n) break;
  }
  std::size_t d = 0;
  while (count > 1) {
    count /= p;
    ++d;
  }
  return d;
}

inline std::vector<Triangulation> triangulation_corpus(Rng& rng, std::size_t size, std::size_t max_tets) {
  std::vector<Triangulation> out;
  for (std::size_t i = 0; i < size; ++i) out.push_back(random_closed_triangulation(rng, max_tets));
  return out;
}

}  // namespace covkit::testing
