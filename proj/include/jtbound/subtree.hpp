#ifndef JTBOUND_SUBTREE_HPP_
#define JTBOUND_SUBTREE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jtbound/bounds.hpp"
#include "jtbound/model.hpp"

namespace jtb {

enum class EnumerationMode {
  // Every (connected vertex subset, spanning tree of its induced edges)
  // pair that is a valid sub-junction-tree.
  exhaustive,
  // The valid sub-junction-trees with the largest vertex count.  On a
  // junction graph that is already a tree this is the tree itself.
  spanning_only,
};

const char* to_string(EnumerationMode mode);

struct EnumerationLimits {
  int max_vertices = 12;
};

// Sorted lexicographically by (vertex subset, edge subset).  `min_vertices`
// applies to exhaustive mode only.  Throws CapacityError above the vertex
// limit.
std::vector<SubTree> enumerate_subtrees(const JunctionGraph& graph, EnumerationMode mode, int min_vertices = 1,
                                        EnumerationLimits limits = {});

// The lexicographically first valid sub-junction-tree on exactly these
// vertices, if any.
std::optional<SubTree> find_subtree_on(const JunctionGraph& graph, std::span<const int> vertices);

struct CatalogOptions {
  EnumerationMode mode = EnumerationMode::spanning_only;
  int min_vertices = 1;
  EnumerationLimits enumeration;
  BoundOptions bounds{.limits = {}, .route = ExcludedRoute::automatic, .with_divergence = false};
};

struct SubtreeCatalog {
  std::vector<BoundReport> entries;  // lexicographic subtree order
  std::size_t min_entropy = 0;       // argmin H(q_T)
  std::size_t best_bound = 0;        // argmax L_{q_T}
  EnumerationMode mode = EnumerationMode::spanning_only;
};

// Values within 1e-12 (relative) count as ties; ties go to the
// lexicographically first subtree.
SubtreeCatalog build_catalog(const InferenceProblem& problem, const JunctionGraph& graph,
                             const CatalogOptions& options = {});

enum class Strategy { exhaustive, greedy };

struct EntropyChoice {
  SubTree subtree;
  double entropy;
};

// Greedy: starting from the whole graph, repeatedly drop the cycle edge or
// vertex whose removal gives the smallest entropy estimate (sum of vertex
// belief entropies minus edge belief entropies from synchronous message
// passing on the candidate), keeping connectivity and per-label
// connectivity, until the structure is a tree.  A heuristic; it returns a
// valid subtree but not necessarily the minimum.
EntropyChoice min_entropy_subtree(const InferenceProblem& problem, const JunctionGraph& graph, Strategy strategy,
                                  const CatalogOptions& options = {});

struct BoundChoice {
  SubTree subtree;
  double lower_bound;
};

BoundChoice best_bound_subtree(const InferenceProblem& problem, const JunctionGraph& graph,
                               const CatalogOptions& options = {});

}  // namespace jtb

#endif  // JTBOUND_SUBTREE_HPP_
