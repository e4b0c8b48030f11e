#ifndef JTBOUND_TESTS_FIXTURES_HPP_
#define JTBOUND_TESTS_FIXTURES_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "jtbound/generate.hpp"
#include "jtbound/model.hpp"

namespace fx {

// Triangle x0-x1-x2 with kernels in order a01, a02, a12.  Graph edges:
// e0 = (0,1) label {0}, e1 = (0,2) label {1}, e2 = (1,2) label {2}.
inline jtb::GeneratedModel triangle(std::vector<double> a01 = {2, 1, 1, 2}, std::vector<double> a02 = {2, 1, 1, 2},
                                    std::vector<double> a12 = {2, 1, 1, 2}) {
  return jtb::pairwise_model(3, {{0, 1}, {0, 2}, {1, 2}}, {std::move(a01), std::move(a02), std::move(a12)});
}

// The chain {a01, a12}: vertices 0 and 2 joined through x1.
inline jtb::SubTree chain_without_a02(const jtb::GeneratedModel& m) {
  const std::vector<int> v{0, 2};
  const std::vector<int> e{1};
  return *jtb::extract_subtree(m.graph, v, e).subtree;
}

inline jtb::SubTree whole_tree(const jtb::JunctionGraph& g) {
  std::vector<int> v(static_cast<std::size_t>(g.num_vertices()));
  std::vector<int> e(static_cast<std::size_t>(g.num_edges()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<int>(i);
  return *jtb::extract_subtree(g, v, e).subtree;
}

inline bool close(double a, double b, double tol = 1e-12) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

inline std::string random_tree_family(std::uint64_t seed) {
  return "random_junction(" + std::to_string(2 + seed % 7) + ",3,10)";
}

}  // namespace fx

#endif  // JTBOUND_TESTS_FIXTURES_HPP_
