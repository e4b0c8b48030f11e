#ifndef JTBOUND_MODEL_HPP_
#define JTBOUND_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jtbound/table.hpp"

namespace jtb {

// A non-negative local kernel alpha_R(x_R).  The scope is the index set R.
using Kernel = Table;

// Variables with finite domains and the collection of kernels whose product
// is the unnormalized joint.  Validated on construction; immutable after.
class InferenceProblem {
 public:
  // Kernels may leave `cards` empty, in which case they are filled from
  // `cardinalities`.  Throws ValidationError listing every broken invariant.
  InferenceProblem(std::vector<int> cardinalities, std::vector<Kernel> kernels);

  int num_vars() const { return static_cast<int>(cards_.size()); }
  int num_kernels() const { return static_cast<int>(kernels_.size()); }
  std::span<const int> cardinalities() const { return cards_; }
  const std::vector<Kernel>& kernels() const { return kernels_; }
  const Kernel& kernel(int i) const { return kernels_[static_cast<std::size_t>(i)]; }

  // Joint state-space size (saturating).
  std::uint64_t num_states() const { return domain_size(cards_); }

 private:
  std::vector<int> cards_;
  std::vector<Kernel> kernels_;
};

struct GraphEdge {
  int u = 0;
  int v = 0;
  std::vector<int> label;

  bool operator==(const GraphEdge&) const = default;
};

// G = (V, E, L).  Vertex i carries the label set of kernel i.
struct JunctionGraph {
  std::vector<std::vector<int>> vertex_labels;
  std::vector<GraphEdge> edges;

  int num_vertices() const { return static_cast<int>(vertex_labels.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  // Vertex labels taken from the problem's kernel scopes.
  static JunctionGraph for_problem(const InferenceProblem& problem, std::vector<GraphEdge> edges);

  // Adjacency as (neighbor, edge index) pairs.
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;
};

enum class ViolationKind {
  label_mismatch,      // L(v) differs from the kernel scope
  bad_endpoint,        // out of range or u >= v
  self_loop,
  duplicate_edge,
  unsorted_label,
  edge_label_not_subset,
  label_cycle,         // the subgraph induced by a variable has a cycle
  label_disconnected,  // ... or is not connected
};

struct Violation {
  ViolationKind kind;
  int edge = -1;      // offending edge index, when applicable
  int variable = -1;  // offending label, when applicable
  int vertex = -1;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every junction-graph invariant.  Throws StructuralError when the
// vertex count differs from the kernel count.
ValidationResult validate_junction_graph(const InferenceProblem& problem, const JunctionGraph& graph);

// Connected and acyclic.
bool is_junction_tree(const JunctionGraph& graph);

// A connected, acyclic restriction of a junction graph that keeps the
// junction property with labels inherited from the parent.  `local` is the
// restriction re-indexed to 0..k-1 in the order of `vertices`.
struct SubTree {
  std::vector<int> vertices;  // sorted parent vertex ids
  std::vector<int> edges;     // sorted parent edge ids
  std::vector<int> kernels;   // R_T; equal to `vertices` since vertices map 1:1 to kernels
  JunctionGraph local;

  // Variables appearing in any vertex label, sorted.
  std::vector<int> variables() const;

  // e.g. "v[0,1]e[0]"
  std::string id() const;

  bool operator==(const SubTree& o) const { return vertices == o.vertices && edges == o.edges; }
  // Lexicographic on (vertex subset, edge subset).
  bool operator<(const SubTree& o) const;
};

enum class Rejection { none, cycle, disconnected, edge_outside, junction_broken, empty };

struct SubtreeExtraction {
  std::optional<SubTree> subtree;
  Rejection reason = Rejection::none;
  std::string detail;

  bool ok() const { return subtree.has_value(); }
};

const char* to_string(Rejection r);

// Restricts `graph` to the given vertex and edge ids.  Throws ContractError
// for ids that do not exist; otherwise returns the subtree or the reason it
// was rejected.
SubtreeExtraction extract_subtree(const JunctionGraph& graph, std::span<const int> vertices,
                                  std::span<const int> edges);

// The kernels of `kernel_ids` as a stand-alone problem over only the
// variables they touch, re-indexed 0..k-1 in increasing original order.
struct RestrictedProblem {
  InferenceProblem problem;
  std::vector<int> original_vars;  // new id -> original id
};
RestrictedProblem restrict_to_kernels(const InferenceProblem& problem, std::span<const int> kernel_ids);

}  // namespace jtb

#endif  // JTBOUND_MODEL_HPP_
