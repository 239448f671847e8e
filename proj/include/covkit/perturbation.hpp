#pragma once

#include "covkit/group_model.hpp"
#include "covkit/rose_cover.hpp"
#include "covkit/weighting.hpp"
#include "covkit/words.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covkit {

enum class HaarMode { exact, monte_carlo };

struct PipelineOptions {
  HaarMode haar_mode = HaarMode::exact;
  /// Monte-Carlo Haar samples per (cell, label).
  std::size_t haar_samples = 4096;
  /// Transition-detection samples per (cell, label) on sampled models.
  std::size_t edge_samples = 64;
  std::size_t verify_len = 6;
  std::uint64_t seed = 0;
};

/// Y together with, for each edge, a witness point of the source cell whose
/// translate lands inside the target cell.
template <typename Element>
struct TransitionGraph {
  LabeledDigraph y;
  std::vector<Element> witness;
  bool sampled = false;
};

/// Builds Y: an s-edge i -> j for every cell j met by (cell i) * phi(s).
/// Throws UndersamplingError when sampling left a vertex with no in- or
/// out-edge of some label.
template <LatticeModel M>
TransitionGraph<typename M::Element> build_transition_graph(
    const M& model, const typename M::Partition& partition, const Alphabet& alphabet,
    std::span<const typename M::Element> phi, std::uint64_t seed, std::size_t samples_per_cell = 64) {
  if (phi.size() != alphabet.size()) throw Error("one generator image per letter required");
  TransitionGraph<typename M::Element> out{LabeledDigraph(alphabet, partition.cells.size()), {}, !M::exact};
  Rng base(seed);
  for (std::size_t s = 0; s < alphabet.size(); ++s) {
    for (std::size_t i = 0; i < partition.cells.size(); ++i) {
      Rng rng = base.split(s * partition.cells.size() + i);
      for (auto& t : model.transitions(partition, i, phi[s], rng, samples_per_cell)) {
        std::size_t id = out.y.add_edge(i, t.target, s, out.witness.size());
        (void)id;
        out.witness.push_back(std::move(t.witness));
      }
    }
  }
  auto violations = degree_violations(out.y);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::string what = "vertex " + std::to_string(v.vertex) + " has no " +
                       (v.missing_out ? "outgoing " : "incoming ") + alphabet.name(v.label) + "-edge";
    if (out.sampled) throw UndersamplingError(what + " (increase edge samples)");
    throw ModelError(what);
  }
  return out;
}

/// psi(e) = g_i phi(s) g_j^-1 where beta_i g_i and beta_j g_j are the
/// witness pair of e. Verifies beta_i psi(e) = beta_j and both epsilon
/// bounds; a failure means the model broke its contract and throws.
template <LatticeModel M>
std::vector<typename M::Element> assign_psi(const M& model, const typename M::Partition& partition,
                                            const TransitionGraph<typename M::Element>& graph,
                                            std::span<const typename M::Element> phi,
                                            const typename M::Scalar& epsilon) {
  std::vector<typename M::Element> psi;
  psi.reserve(graph.y.edges().size());
  for (std::size_t e = 0; e < graph.y.edges().size(); ++e) {
    const auto& edge = graph.y.edge(e);
    if (e >= graph.witness.size()) throw ModelError("edge has no witness");
    const auto& witness = graph.witness[e];
    const auto& image = phi[edge.label];
    auto g_src = model.local_offset(partition, edge.src, witness);
    auto g_dst = model.local_offset(partition, edge.dst, model.multiply(witness, image));
    auto value = model.multiply(model.multiply(g_src, image), model.inverse(g_dst));
    const auto& rep = partition.cells[edge.src].representative;
    if (model.locate(partition, model.multiply(rep, value)) != edge.dst) {
      throw ModelError("psi does not carry the source representative to the target cell");
    }
    if (model.distance(value, image) > epsilon ||
        model.distance(model.inverse(value), model.inverse(image)) > epsilon) {
      throw ModelError("psi is farther than epsilon from the generator image");
    }
    psi.push_back(std::move(value));
  }
  return psi;
}

/// w(v) = mu(B_v), w(e) = mu{x in B_i : x phi(s) in B_j}, computed exactly.
template <ExactMeasureModel M>
Weighting haar_weighting_exact(const M& model, const typename M::Partition& partition,
                               const LabeledDigraph& y, std::span<const typename M::Element> phi) {
  Weighting w;
  for (std::size_t v = 0; v < y.num_vertices(); ++v) w.vertex.push_back(model.cell_measure(partition, v));
  for (const auto& e : y.edges()) {
    Rational m = model.transition_measure(partition, e.src, phi[e.label], e.dst);
    if (m <= 0) throw ModelError("edge of Y carries zero Haar measure");
    w.edge.push_back(std::move(m));
  }
  return w;
}

/// Monte-Carlo estimate of the Haar weighting: `samples` uniform points per
/// (cell, label). Vertex weights are the exact cell measures; each edge
/// carries a binomial standard error. A zero count on an edge of Y throws
/// UndersamplingError.
template <LatticeModel M>
WeightEstimate haar_weighting_sampled(const M& model, const typename M::Partition& partition,
                                      const LabeledDigraph& y,
                                      std::span<const typename M::Element> phi, std::size_t samples,
                                      std::uint64_t seed) {
  if (samples == 0) throw UndersamplingError("Monte-Carlo weighting needs samples");
  WeightEstimate est;
  est.samples_per_cell = samples;
  est.seed = seed;
  est.value.edge.assign(y.edges().size(), 0.0);
  est.std_error.edge.assign(y.edges().size(), 0.0);
  for (std::size_t v = 0; v < y.num_vertices(); ++v) {
    est.value.vertex.push_back(to_double(model.cell_measure(partition, v)));
    est.std_error.vertex.push_back(0.0);
  }
  Rng base(seed);
  const double n = static_cast<double>(samples);
  for (std::size_t s = 0; s < y.num_labels(); ++s) {
    for (std::size_t i = 0; i < y.num_vertices(); ++i) {
      Rng rng = base.split(s * y.num_vertices() + i);
      std::vector<std::size_t> counts(y.edges().size(), 0);
      for (std::size_t k = 0; k < samples; ++k) {
        auto x = model.sample_in_cell(partition, i, rng);
        std::size_t j = model.locate(partition, model.multiply(x, phi[s]));
        auto e = y.find_edge(i, j, s);
        if (!e) throw ModelError("sample crossed a transition that Y does not contain");
        ++counts[*e];
      }
      for (std::size_t e : y.out_edges(i, s)) {
        if (counts[e] == 0) {
          throw UndersamplingError("edge " + std::to_string(e) +
                                   " received no samples (increase Monte-Carlo samples)");
        }
        double p = static_cast<double>(counts[e]) / n;
        est.value.edge[e] = est.value.vertex[i] * p;
        est.std_error.edge[e] = est.value.vertex[i] * std::sqrt(p * (1 - p) / n);
      }
    }
  }
  return est;
}

template <typename Scalar>
struct EpsilonReport {
  std::size_t max_len = 0;
  std::size_t checks = 0;
  Scalar epsilon{};
  Scalar max_defect{};
  std::size_t failure_count = 0;
  std::vector<std::string> failures;  // first few, in enumeration order
  bool passed() const { return failure_count == 0; }
};

struct VirtualHomReport {
  std::size_t max_len = 0;
  std::size_t words_checked = 0;
  std::size_t subgroup_words = 0;
  std::size_t pairs_checked = 0;
  std::size_t hom_failure_count = 0;
  std::size_t lattice_failure_count = 0;
  std::size_t cocycle_failure_count = 0;
  std::vector<std::string> hom_failures;
  std::vector<std::string> lattice_failures;
  std::vector<std::string> cocycle_failures;
  bool passed() const {
    return hom_failure_count == 0 && lattice_failure_count == 0 && cocycle_failure_count == 0;
  }
};

inline constexpr std::size_t kListedFailures = 20;

template <LatticeModel M>
struct PerturbationResult {
  using Element = typename M::Element;
  using Scalar = typename M::Scalar;

  M model;
  Alphabet alphabet;
  std::vector<Element> phi;
  Scalar epsilon{};
  Scalar delta{};
  /// Whether epsilon was certified below the minimum displacement of Gamma.
  bool epsilon_precheck_certified = false;
  typename M::Partition partition;
  TransitionGraph<Element> graph;
  std::vector<Element> psi;
  std::optional<Weighting> haar_exact;
  std::optional<WeightEstimate> haar_sampled;
  Weighting integer_weights;
  ExpandedCover x;
  PipelineOptions options;
  EpsilonReport<Scalar> epsilon_report;
  VirtualHomReport virtual_hom_report;

  const RoseCover& cover() const { return x.cover; }
  const CoverProjection& projection() const { return x.projection; }
};

namespace detail {

/// One step of a path in X: the next vertex and the group element read off.
template <typename Element>
struct Step {
  Vertex next = 0;
  Element value;
};

/// steps[x][2s] follows the s-edge out of x, steps[x][2s+1] the s-edge into x
/// backwards, carrying psi(h(e)) and psi(h(e))^-1 respectively.
template <LatticeModel M>
std::vector<std::vector<Step<typename M::Element>>> step_table(const PerturbationResult<M>& r) {
  const auto& x = r.cover();
  const auto& h = r.projection();
  std::vector<std::vector<Step<typename M::Element>>> table(x.num_vertices());
  for (Vertex v = 0; v < x.num_vertices(); ++v) {
    for (std::size_t s = 0; s < x.alphabet().size(); ++s) {
      table[v].push_back({x.out(s, v), r.psi[h.edge_map[s][v]]});
      Vertex tail = x.in(s, v);
      table[v].push_back({tail, r.model.inverse(r.psi[h.edge_map[s][tail]])});
    }
  }
  return table;
}

inline std::size_t step_slot(const Letter& l) { return 2 * l.generator + (l.exponent == 1 ? 0 : 1); }

inline std::string letters_to_string(const Alphabet& a, std::span<const Letter> letters) {
  return format_word(a, Word(std::vector<Letter>(letters.begin(), letters.end())));
}

template <typename Scalar>
std::string scalar_string(const Scalar& x) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return to_string(x);
  } else {
    return std::to_string(x);
  }
}

}  // namespace detail

/// phi_eps(f) = product of psi(h(e_i))^{k_i} along the path of f from b.
template <LatticeModel M>
typename M::Element phi_epsilon(const PerturbationResult<M>& r, const Word& f) {
  auto path = trace_path(r.cover(), r.cover().basepoint(), f);
  auto value = r.model.identity();
  for (const auto& step : path.steps) {
    const auto& psi = r.psi[r.projection().edge_map[step.edge.label][step.edge.tail]];
    value = r.model.multiply(value, step.exponent == 1 ? psi : r.model.inverse(psi));
  }
  return value;
}

/// Checks d(phi_eps(f s^k), phi_eps(f) phi(s^k)) <= epsilon for every reduced
/// f with |f| < max_len and every letter s^k.
template <LatticeModel M>
EpsilonReport<typename M::Scalar> verify_epsilon_perturbation(const PerturbationResult<M>& r,
                                                              std::size_t max_len) {
  using Element = typename M::Element;
  EpsilonReport<typename M::Scalar> report;
  report.max_len = max_len;
  report.epsilon = r.epsilon;
  if (max_len == 0) return report;
  const auto table = detail::step_table(r);
  const std::size_t k = r.alphabet.size();
  std::vector<Element> letter_image;
  for (std::size_t s = 0; s < k; ++s) {
    letter_image.push_back(r.phi[s]);
    letter_image.push_back(r.model.inverse(r.phi[s]));
  }
  std::vector<Element> values{r.model.identity()};
  std::vector<Vertex> verts{r.cover().basepoint()};
  auto visit = [&](std::span<const Letter> word) {
    const std::size_t depth = word.size();
    while (values.size() > std::max<std::size_t>(depth, 1)) {
      values.pop_back();
      verts.pop_back();
    }
    if (depth > 0) {
      const auto& step = table[verts.back()][detail::step_slot(word.back())];
      values.push_back(r.model.multiply(values.back(), step.value));
      verts.push_back(step.next);
    }
    for (std::size_t s = 0; s < k; ++s) {
      for (int e : {1, -1}) {
        Letter l{s, e};
        const std::size_t slot = detail::step_slot(l);
        Element extended = (depth > 0 && word.back().cancels(l))
                               ? values[depth - 1]
                               : r.model.multiply(values[depth], table[verts[depth]][slot].value);
        Element expected = r.model.multiply(values[depth], letter_image[slot]);
        auto defect = r.model.distance(extended, expected);
        ++report.checks;
        if (defect > report.max_defect) report.max_defect = defect;
        if (defect > r.epsilon) {
          ++report.failure_count;
          if (report.failures.size() < kListedFailures) {
            report.failures.push_back("f = " + detail::letters_to_string(r.alphabet, word) + ", s = " +
                                      detail::letters_to_string(r.alphabet, std::span(&l, 1)) +
                                      ", defect = " + detail::scalar_string(defect));
          }
        }
      }
    }
    return depth + 1 < max_len;
  };
  for_each_reduced_word(k, max_len - 1, visit);
  return report;
}

/// Checks, for every f' in F' and f in F with |f'| + |f| <= max_len:
///   phi_eps(f' f) = phi_eps(f') phi_eps(f)   (exact on exact models),
///   phi_eps(f') lies in Gamma, and
///   the cell of beta_1 phi_eps(f) is the image of the end of f's path.
template <LatticeModel M>
VirtualHomReport verify_virtual_hom(const PerturbationResult<M>& r, std::size_t max_len) {
  using Element = typename M::Element;
  VirtualHomReport report;
  report.max_len = max_len;
  const auto table = detail::step_table(r);
  const auto& x = r.cover();
  const Vertex b = x.basepoint();
  const std::size_t k = r.alphabet.size();

  struct Entry {
    std::vector<Letter> letters;
    Element value;
    Vertex end;
  };
  // All words up to max_len with their phi_eps values, via a DFS stack.
  std::vector<Entry> accepted;
  std::vector<Element> values{r.model.identity()};
  std::vector<Vertex> verts{b};
  auto collect = [&](std::span<const Letter> word) {
    const std::size_t depth = word.size();
    while (values.size() > std::max<std::size_t>(depth, 1)) {
      values.pop_back();
      verts.pop_back();
    }
    if (depth > 0) {
      const auto& step = table[verts.back()][detail::step_slot(word.back())];
      values.push_back(r.model.multiply(values.back(), step.value));
      verts.push_back(step.next);
    }
    ++report.words_checked;
    if (r.model.locate(r.partition, values.back()) != r.projection().vertex_map[verts.back()]) {
      ++report.cocycle_failure_count;
      if (report.cocycle_failures.size() < kListedFailures) {
        report.cocycle_failures.push_back("f = " + detail::letters_to_string(r.alphabet, word));
      }
    }
    if (verts.back() == b) {
      ++report.subgroup_words;
      if (!r.model.in_lattice(values.back())) {
        ++report.lattice_failure_count;
        if (report.lattice_failures.size() < kListedFailures) {
          report.lattice_failures.push_back("f' = " + detail::letters_to_string(r.alphabet, word));
        }
      }
      accepted.push_back({std::vector<Letter>(word.begin(), word.end()), values.back(), b});
    }
    return true;
  };
  for_each_reduced_word(k, max_len, collect);

  for (const auto& prime : accepted) {
    // Stack for the reduced product f' f, seeded with the path of f'.
    std::vector<Letter> prod_letters = prime.letters;
    std::vector<Element> prod_values{r.model.identity()};
    std::vector<Vertex> prod_verts{b};
    for (const auto& l : prime.letters) {
      const auto& step = table[prod_verts.back()][detail::step_slot(l)];
      prod_values.push_back(r.model.multiply(prod_values.back(), step.value));
      prod_verts.push_back(step.next);
    }
    std::vector<Element> f_values{r.model.identity()};
    std::vector<Vertex> f_verts{b};

    std::function<void(std::vector<Letter>&)> dfs = [&](std::vector<Letter>& f) {
      ++report.pairs_checked;
      Element expected = r.model.multiply(prime.value, f_values.back());
      if (!r.model.same(prod_values.back(), expected)) {
        ++report.hom_failure_count;
        if (report.hom_failures.size() < kListedFailures) {
          report.hom_failures.push_back("f' = " + detail::letters_to_string(r.alphabet, prime.letters) +
                                        ", f = " + detail::letters_to_string(r.alphabet, f));
        }
      }
      if (prime.letters.size() + f.size() >= max_len) return;
      for (std::size_t s = 0; s < k; ++s) {
        for (int e : {1, -1}) {
          Letter l{s, e};
          if (!f.empty() && f.back().cancels(l)) continue;
          const std::size_t slot = detail::step_slot(l);
          const auto& fstep = table[f_verts.back()][slot];
          f_values.push_back(r.model.multiply(f_values.back(), fstep.value));
          f_verts.push_back(fstep.next);
          std::optional<std::tuple<Letter, Element, Vertex>> popped;
          if (!prod_letters.empty() && prod_letters.back().cancels(l)) {
            popped.emplace(prod_letters.back(), prod_values.back(), prod_verts.back());
            prod_letters.pop_back();
            prod_values.pop_back();
            prod_verts.pop_back();
          } else {
            const auto& pstep = table[prod_verts.back()][slot];
            prod_letters.push_back(l);
            prod_values.push_back(r.model.multiply(prod_values.back(), pstep.value));
            prod_verts.push_back(pstep.next);
          }
          f.push_back(l);
          dfs(f);
          f.pop_back();
          if (popped) {
            prod_letters.push_back(std::get<0>(*popped));
            prod_values.push_back(std::get<1>(*popped));
            prod_verts.push_back(std::get<2>(*popped));
          } else {
            prod_letters.pop_back();
            prod_values.pop_back();
            prod_verts.pop_back();
          }
          f_values.pop_back();
          f_verts.pop_back();
        }
      }
    };
    std::vector<Letter> f;
    dfs(f);
  }
  return report;
}

/// Runs the whole construction: precheck epsilon, choose delta, partition
/// B, build Y and psi, weigh Y (Haar for the report, integer for the
/// expansion), expand to X, then verify both properties up to
/// options.verify_len.
template <LatticeModel M>
PerturbationResult<M> run_pipeline(const M& model, const Alphabet& alphabet,
                                   std::vector<typename M::Element> phi,
                                   const typename M::Scalar& epsilon, const PipelineOptions& options) {
  if (phi.size() != alphabet.size()) throw Error("one generator image per letter required");
  if (!(epsilon > 0)) throw ModelError("epsilon must be positive");
  bool certified = false;
  if (auto min_disp = model.min_lattice_displacement()) {
    if (!(epsilon < *min_disp)) {
      throw ModelError("epsilon must be below the minimum displacement of Gamma (" +
                       detail::scalar_string(*min_disp) + ")");
    }
    certified = true;
  }
  auto delta = model.choose_delta(std::span<const typename M::Element>(phi), epsilon);
  auto partition = model.build_partition(delta);
  auto graph = build_transition_graph(model, partition, alphabet,
                                      std::span<const typename M::Element>(phi), options.seed,
                                      options.edge_samples);
  auto psi = assign_psi(model, partition, graph, std::span<const typename M::Element>(phi), epsilon);

  std::optional<Weighting> haar_exact;
  std::optional<WeightEstimate> haar_sampled;
  if (options.haar_mode == HaarMode::exact) {
    if constexpr (ExactMeasureModel<M> && M::exact) {
      haar_exact = haar_weighting_exact(model, partition, graph.y, std::span<const typename M::Element>(phi));
    } else {
      throw ModelError("exact Haar weighting needs an exactly measurable model");
    }
  } else {
    haar_sampled = haar_weighting_sampled(model, partition, graph.y,
                                          std::span<const typename M::Element>(phi),
                                          options.haar_samples, options.seed ^ 0x4a3bULL);
  }

  auto integer = solve_integer_weighting(graph.y);
  if (!integer) throw Error("Y admits no strictly positive weighting");
  auto expanded = expand_cover(graph.y, *integer, options.seed, partition.identity_cell);

  PerturbationResult<M> result{model,
                               alphabet,
                               std::move(phi),
                               epsilon,
                               delta,
                               certified,
                               std::move(partition),
                               std::move(graph),
                               std::move(psi),
                               std::move(haar_exact),
                               std::move(haar_sampled),
                               std::move(*integer),
                               std::move(expanded),
                               options,
                               {},
                               {}};
  result.epsilon_report = verify_epsilon_perturbation(result, options.verify_len);
  result.virtual_hom_report = verify_virtual_hom(result, options.verify_len);
  return result;
}

}  // namespace covkit
