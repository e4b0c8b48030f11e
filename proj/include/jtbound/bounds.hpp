#ifndef JTBOUND_BOUNDS_HPP_
#define JTBOUND_BOUNDS_HPP_

#include <optional>
#include <vector>

#include "jtbound/model.hpp"
#include "jtbound/oracle.hpp"

namespace jtb {

// Sub-tree lower bound on ln Z.  With q_T the normalized product of the
// subtree's kernels,
//
//   L_{q_T} = sum_{R not in R_T} E_{q_T}[ln alpha_R] + ln Z_T  <=  ln Z,
//
// and L_{q_T} = ln Z - D(q_T || p).
//
// q_T lives on all N variables and is uniform on variables no subtree
// kernel touches; ln Z_T and H(q_T) are taken over that same space.

struct BoundReport {
  SubTree subtree;
  double log_z_tree = 0.0;     // ln Z_T over the touched variables only
  double log_z_t = 0.0;        // ln Z_T over all variables
  double entropy = 0.0;        // H(q_T) over all variables, nats
  double excluded_term = 0.0;  // may be -inf
  double lower_bound = 0.0;    // excluded_term + log_z_t; may be -inf
  std::optional<double> divergence_to_p;
};

enum class ExcludedRoute {
  automatic,    // dense when the touched space fits the cap, else elimination
  dense,        // marginals of q_T from the tree joint enumerated over touched variables
  elimination,  // marginals of q_T by variable elimination over the tree kernels
};

struct BoundOptions {
  OracleLimits limits;
  ExcludedRoute route = ExcludedRoute::automatic;
  bool with_divergence = true;  // fill divergence_to_p when the full joint fits the cap
};

// Throws DegenerateModelError when the subtree's own model has Z_T = 0.
BoundReport subtree_lower_bound(const InferenceProblem& problem, const SubTree& subtree,
                                BoundOptions options = {});

// R \ R_T.
std::vector<int> complement_kernels(const InferenceProblem& problem, const SubTree& subtree);

struct ComplementReport {
  std::vector<int> complement_kernels;
  DenseDistribution complement_dist;  // q-bar_T over all variables
  double self_gap;                    // D(q_T || q-bar_T)
};

// Throws ContractError when R_T = R.
ComplementReport complement_distribution(const InferenceProblem& problem, const SubTree& subtree,
                                         OracleLimits limits = {});

struct PairDivergences {
  double d_q1_q2;      // D(q1 || q2)
  double d_q2_q1;      // D(q2 || q1)
  double d_q1_bar1;    // D(q1 || q-bar_1)
  double d_q1_bar2;    // D(q1 || q-bar_2)
  double d_q2_bar2;    // D(q2 || q-bar_2)
  double h_q1;
  double h_q2;
};

// An empty complement is read as the uniform distribution here.
PairDivergences pairwise_divergences(const InferenceProblem& problem, const SubTree& t1, const SubTree& t2,
                                     OracleLimits limits = {});

// Marginal of q_T over `scope` (sorted, subset of the touched variables)
// by variable elimination over the subtree kernels.  Intermediate tables
// are capped at limits.max_states.
Table eliminate_marginal(const InferenceProblem& problem, const SubTree& subtree, std::span<const int> scope,
                         OracleLimits limits = {});

}  // namespace jtb

#endif  // JTBOUND_BOUNDS_HPP_
