#include "jtbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jtbound/errors.hpp"

namespace jtb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_capacity(std::span<const int> cards, OracleLimits limits) {
  const auto n = domain_size(cards);
  if (n > limits.max_states) {
    throw CapacityError("joint state space of " + std::to_string(n) + " states exceeds the cap of " +
                        std::to_string(limits.max_states));
  }
}

// ln prod_k alpha_k(x) for every joint assignment x, row-major.
std::vector<double> log_products(std::span<const int> cards, std::span<const Kernel* const> kernels,
                                 OracleLimits limits) {
  check_capacity(cards, limits);
  const auto total = static_cast<std::size_t>(domain_size(cards));
  std::vector<double> out(total, 0.0);
  std::vector<int> x(cards.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    double lp = 0.0;
    for (const Kernel* k : kernels) {
      const double a = k->at(x);
      if (a == 0.0) {
        lp = -kInf;
        break;
      }
      lp += std::log(a);
    }
    out[i] = lp;
    next_assignment(x, cards);
  }
  return out;
}

DenseDistribution normalize_log_products(std::vector<int> cards, std::vector<double> lp) {
  const double log_z = log_sum_exp(lp);
  if (log_z == -kInf) throw DegenerateModelError("every assignment has zero weight");
  for (double& v : lp) v = (v == -kInf) ? 0.0 : std::exp(v - log_z);
  return DenseDistribution(std::move(cards), std::move(lp), log_z);
}

std::vector<const Kernel*> pick(const InferenceProblem& problem, std::span<const int> ids) {
  std::vector<const Kernel*> out;
  for (int id : ids) {
    if (id < 0 || id >= problem.num_kernels()) throw ContractError("no kernel " + std::to_string(id));
    out.push_back(&problem.kernel(id));
  }
  return out;
}

std::vector<int> all_ids(const InferenceProblem& problem) {
  std::vector<int> ids(static_cast<std::size_t>(problem.num_kernels()));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

}  // namespace

DenseDistribution::DenseDistribution(std::vector<int> cards, std::vector<double> probs, double log_norm)
    : cards_(std::move(cards)), probs_(std::move(probs)), log_norm_(log_norm) {
  if (probs_.size() != domain_size(cards_)) throw StructuralError("distribution size does not match domain");
}

Table DenseDistribution::as_table() const {
  std::vector<int> scope(cards_.size());
  std::iota(scope.begin(), scope.end(), 0);
  return Table(std::move(scope), cards_, probs_);
}

Table DenseDistribution::marginal(std::span<const int> scope) const {
  return jtb::marginalize(as_table(), scope);
}

double brute_force_log_partition(const InferenceProblem& problem, OracleLimits limits) {
  const auto ids = all_ids(problem);
  const double log_z = log_sum_exp(log_products(problem.cardinalities(), pick(problem, ids), limits));
  if (log_z == -kInf) throw DegenerateModelError("every assignment has zero weight");
  return log_z;
}

Table brute_force_marginal(const InferenceProblem& problem, std::span<const int> scope, OracleLimits limits) {
  for (int v : scope) {
    if (v < 0 || v >= problem.num_vars()) throw ContractError("marginal scope out of range");
  }
  if (!std::is_sorted(scope.begin(), scope.end()) ||
      std::adjacent_find(scope.begin(), scope.end()) != scope.end()) {
    throw ContractError("marginal scope must be strictly increasing");
  }
  return joint_distribution(problem, limits).marginal(scope);
}

DenseDistribution joint_distribution(const InferenceProblem& problem, OracleLimits limits) {
  return subset_distribution(problem, all_ids(problem), limits);
}

DenseDistribution subset_distribution(const InferenceProblem& problem, std::span<const int> kernel_ids,
                                      OracleLimits limits) {
  std::vector<int> cards(problem.cardinalities().begin(), problem.cardinalities().end());
  auto lp = log_products(cards, pick(problem, kernel_ids), limits);
  return normalize_log_products(std::move(cards), std::move(lp));
}

double entropy(const DenseDistribution& dist) {
  std::vector<double> terms;
  terms.reserve(dist.size());
  for (double p : dist.probs()) terms.push_back(p > 0.0 ? -p * std::log(p) : 0.0);
  return std::max(0.0, stable_sum(terms));
}

double kl_divergence(const DenseDistribution& p, const DenseDistribution& q) {
  if (!std::ranges::equal(p.cardinalities(), q.cardinalities())) {
    throw StructuralError("kl_divergence: distributions over different spaces");
  }
  std::vector<double> terms;
  terms.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.probs()[i];
    if (pi == 0.0) continue;
    const double qi = q.probs()[i];
    if (qi == 0.0) return kInf;
    terms.push_back(pi * (std::log(pi) - std::log(qi)));
  }
  return std::max(0.0, stable_sum(terms));
}

double expected_log_kernel(const DenseDistribution& dist, const Kernel& kernel) {
  for (int v : kernel.scope) {
    if (v < 0 || static_cast<std::size_t>(v) >= dist.cardinalities().size()) {
      throw ContractError("kernel scope outside the distribution's variables");
    }
  }
  const Table marg = dist.marginal(kernel.scope);
  std::vector<double> terms;
  for (std::size_t i = 0; i < marg.size(); ++i) {
    const double m = marg.values[i];
    if (m == 0.0) continue;
    if (kernel.values[i] == 0.0) return -kInf;
    terms.push_back(m * std::log(kernel.values[i]));
  }
  return stable_sum(terms);
}

}  // namespace jtb
