#ifndef JTBOUND_GDL_HPP_
#define JTBOUND_GDL_HPP_

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "jtbound/model.hpp"
#include "jtbound/table.hpp"

namespace jtb {

// Sum-product message passing (the generalized distributive law) on a
// junction graph whose vertex i carries kernel i.
//
// m_{u,v}(x_{L(u,v)}) = sum_{x_{L(u) \ L(u,v)}} alpha_u(x_{L(u)}) prod_{w in N(u) \ v} m_{w,u}
//
// Messages are rescaled to sum to one after every update.  On a tree the
// discarded scale factors cancel between the vertex and edge normalizers,
// so prod Z_v / prod Z_e is unaffected; they are only accumulated for the
// root-mass cross-check of ln Z.

// One leaf-to-root sweep followed by one root-to-leaf sweep.  Trees only.
struct TreeExact {};

// Parallel (flooding) updates until the largest absolute message change
// falls below `tol`, or `max_iters` sweeps.
struct Synchronous {
  int max_iters = 500;
  double tol = 1e-12;
};

using Schedule = std::variant<TreeExact, Synchronous>;

struct GdlOptions {
  bool normalize_messages = true;
};

struct MessageSet {
  // messages[2e] is u->v and messages[2e+1] is v->u for edge e = (u, v);
  // each is a table over L(e).
  std::vector<Table> messages;
  std::size_t updates = 0;  // directed-message computations performed
  int iterations = 0;       // synchronous sweeps run
  bool converged = false;   // tree_exact always converges
  // ln Z from the root vertex's total mass after the upward sweep plus the
  // discarded upward scale factors.  Set by tree_exact only.
  std::optional<double> root_log_partition;

  const Table& toward(int edge, bool from_u) const {
    return messages[static_cast<std::size_t>(2 * edge + (from_u ? 0 : 1))];
  }
};

struct TreeBeliefs {
  std::vector<Table> vertex_beliefs;  // b_v over L(v), normalized
  std::vector<Table> edge_beliefs;    // b_e over L(e), normalized
  std::vector<double> log_vertex_norms;  // ln Z_v
  std::vector<double> log_edge_norms;    // ln Z_e
  // sum ln Z_v - sum ln Z_e.  Only set when the graph is a tree.
  std::optional<double> log_partition;
};

// Throws ContractError for tree_exact on a graph that is not a junction
// tree, and DegenerateModelError when a message or belief has zero mass.
MessageSet run_gdl(std::span<const Kernel> kernels, const JunctionGraph& graph, Schedule schedule,
                   GdlOptions options = {});
MessageSet run_gdl(const InferenceProblem& problem, const JunctionGraph& graph, Schedule schedule,
                   GdlOptions options = {});

TreeBeliefs beliefs_from_messages(std::span<const Kernel> kernels, const JunctionGraph& graph,
                                  const MessageSet& messages);
TreeBeliefs beliefs_from_messages(const InferenceProblem& problem, const JunctionGraph& graph,
                                  const MessageSet& messages);

// Kernels of R_T in subtree vertex order.
std::vector<Kernel> subtree_kernels(const InferenceProblem& problem, const SubTree& subtree);

// Exact calibrated beliefs on a subtree.
TreeBeliefs solve_subtree(const InferenceProblem& problem, const SubTree& subtree, GdlOptions options = {});

struct TreePartition {
  double log_z;     // -inf when degenerate
  bool degenerate;
};

// ln Z_T summed over the variables the subtree touches.
TreePartition tree_log_partition(const InferenceProblem& problem, const SubTree& subtree);

// H(q_T) over the touched variables: sum_v H(b_v) - sum_e H(b_e).
double tree_entropy(const TreeBeliefs& beliefs);

// q_T(x) = prod_v b_v / prod_e b_e with 0/0 = 0.  `assignment` is indexed by
// the original variable ids.
double tree_joint_eval(const TreeBeliefs& beliefs, std::span<const int> assignment);

// Entropy of a single normalized table, nats.
double table_entropy(const Table& t);

}  // namespace jtb

#endif  // JTBOUND_GDL_HPP_
