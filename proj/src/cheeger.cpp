#include "covkit/cheeger.hpp"

#include "covkit/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <numeric>

namespace covkit {

namespace {

void check_graph(const SkeletonGraph& g) {
  if (g.num_vertices < 2) throw Error("Cheeger constant needs at least two vertices");
  for (auto [u, v] : g.edges) {
    if (u >= g.num_vertices || v >= g.num_vertices) throw Error("edge endpoint out of range");
  }
}

std::size_t cut_size(const SkeletonGraph& g, const std::vector<bool>& in) {
  std::size_t n = 0;
  for (auto [u, v] : g.edges) n += in[u] != in[v];
  return n;
}

}  // namespace

CheegerResult cheeger_exact(const SkeletonGraph& g, std::size_t cap) {
  check_graph(g);
  if (g.num_vertices > cap) {
    throw Error("exact Cheeger search limited to " + std::to_string(cap) + " vertices");
  }
  if (g.num_vertices > 30) throw Error("exact Cheeger search limited to 30 vertices");
  const std::size_t n = g.num_vertices;
  // Per-vertex neighbour lists, loops dropped (they never cross).
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  // Gray-code walk: each step toggles one vertex and updates the cut.
  std::vector<bool> in(n, false);
  long cut = 0;
  std::size_t size = 0;
  CheegerResult best;
  bool have = false;
  std::uint64_t best_mask = 0;
  std::uint64_t mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto v = static_cast<std::size_t>(std::countr_zero(step));
    long inside = 0;
    for (auto w : adj[v]) inside += in[w];
    long outside = static_cast<long>(adj[v].size()) - inside;
    if (in[v]) {
      cut += inside - outside;
      --size;
    } else {
      cut += outside - inside;
      ++size;
    }
    in[v] = !in[v];
    mask ^= std::uint64_t{1} << v;
    if (size == 0 || 2 * size > n) continue;
    ++best.sets_examined;
    Rational ratio(cut, static_cast<long>(size));
    if (!have || ratio < best.value || (ratio == best.value && mask < best_mask)) {
      best.value = ratio;
      best_mask = mask;
      have = true;
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (best_mask >> v & 1) best.set.push_back(v);
  }
  return best;
}

CheegerResult cheeger_sweep(const SkeletonGraph& g) {
  check_graph(g);
  const std::size_t n = g.num_vertices;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    const auto a = static_cast<Eigen::Index>(u);
    const auto b = static_cast<Eigen::Index>(v);
    lap(a, a) += 1;
    lap(b, b) += 1;
    lap(a, b) -= 1;
    lap(b, a) -= 1;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) throw Error("Laplacian eigensolver failed");
  Eigen::VectorXd fiedler = solver.eigenvectors().col(1);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return fiedler(static_cast<Eigen::Index>(a)) < fiedler(static_cast<Eigen::Index>(b));
  });

  CheegerResult best;
  bool have = false;
  std::vector<bool> in(n, false);
  for (std::size_t k = 1; k < n; ++k) {
    in[order[k - 1]] = true;
    const std::size_t cut = cut_size(g, in);
    // Prefix of size k, or the complementary suffix when that is the smaller side.
    const bool use_prefix = 2 * k <= n;
    const std::size_t size = use_prefix ? k : n - k;
    ++best.sets_examined;
    Rational ratio(static_cast<long>(cut), static_cast<long>(size));
    if (!have || ratio < best.value) {
      best.value = ratio;
      best.set.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (in[i] == use_prefix) best.set.push_back(i);
      }
      have = true;
    }
  }
  return best;
}

}  // namespace covkit
