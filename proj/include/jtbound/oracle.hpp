#ifndef JTBOUND_ORACLE_HPP_
#define JTBOUND_ORACLE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "jtbound/model.hpp"
#include "jtbound/table.hpp"

namespace jtb {

// Brute-force ground truth by enumerating the full joint state space.
// Everything here is exponential in the number of variables and guarded by
// a state-space cap.

struct OracleLimits {
  std::uint64_t max_states = std::uint64_t{1} << 22;
};

// An explicit normalized joint table over all variables, row-major.
class DenseDistribution {
 public:
  DenseDistribution(std::vector<int> cards, std::vector<double> probs, double log_norm);

  std::span<const int> cardinalities() const { return cards_; }
  std::span<const double> probs() const { return probs_; }
  // ln of the normalizer that produced the table.
  double log_norm() const { return log_norm_; }
  std::size_t size() const { return probs_.size(); }

  // Marginal over a sorted scope.
  Table marginal(std::span<const int> scope) const;

  // Viewed as a table over every variable.
  Table as_table() const;

 private:
  std::vector<int> cards_;
  std::vector<double> probs_;
  double log_norm_;
};

// ln Z, accumulated as a log-sum-exp over per-assignment log-products.
double brute_force_log_partition(const InferenceProblem& problem, OracleLimits limits = {});

// p_R(x_R) over a sorted scope.
Table brute_force_marginal(const InferenceProblem& problem, std::span<const int> scope,
                           OracleLimits limits = {});

DenseDistribution joint_distribution(const InferenceProblem& problem, OracleLimits limits = {});

// Normalized product of the listed kernels over ALL variables of `problem`.
// Variables touched by none of them are uniform.  An empty list gives the
// uniform distribution.  log_norm is ln of the full-space normalizer.
DenseDistribution subset_distribution(const InferenceProblem& problem, std::span<const int> kernel_ids,
                                      OracleLimits limits = {});

// -sum p ln p in nats, with 0 ln 0 = 0.
double entropy(const DenseDistribution& dist);

// D(p || q) in nats; +inf when p is not absolutely continuous w.r.t. q.
double kl_divergence(const DenseDistribution& p, const DenseDistribution& q);

// sum_x dist(x) ln kernel(x_scope); -inf when dist puts mass on a zero of
// the kernel.
double expected_log_kernel(const DenseDistribution& dist, const Kernel& kernel);

}  // namespace jtb

#endif  // JTBOUND_ORACLE_HPP_
