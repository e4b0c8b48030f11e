#ifndef JTBOUND_GENERATE_HPP_
#define JTBOUND_GENERATE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jtbound/model.hpp"

namespace jtb {

// Instance families, written NAME(args):
//   grid(m, n[, lo, hi])         m x n binary grid, one pairwise kernel per grid edge
//   cycle(k[, lo, hi])           k binary variables on a ring; cycle(3) is the triangle
//   random_junction(M, max_label[, max_vars])
//                                random junction tree with M vertices over at most
//                                max_vars (default 10) binary variables
// Table entries are drawn log-uniform from [lo, hi] (default [1/4, 4]).
struct FamilySpec {
  enum class Kind { grid, cycle, random_junction };
  Kind kind;
  std::vector<double> args;
  std::string text;  // canonical spelling, e.g. "grid(3,3)"
};

// Throws ParseError on unknown names or bad arity/ranges.
FamilySpec parse_family(std::string_view text);

struct GeneratedModel {
  InferenceProblem problem;
  JunctionGraph graph;
};

// Deterministic in (family, seed, allow_zeros).  With allow_zeros, roughly
// a third of the kernels get one entry forced to zero.
GeneratedModel generate(const FamilySpec& family, std::uint64_t seed, bool allow_zeros = false);

// Pairwise model over the given variable pairs: kernels in sorted pair
// order, and for every variable a chain through the kernels containing it
// with edges labelled by that variable.
GeneratedModel pairwise_model(int num_vars, std::vector<std::pair<int, int>> pairs,
                              std::vector<std::vector<double>> tables);

}  // namespace jtb

#endif  // JTBOUND_GENERATE_HPP_
