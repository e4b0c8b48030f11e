#include "jtbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jtbound/errors.hpp"
#include "jtbound/gdl.hpp"

namespace jtb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double untouched_log_volume(const InferenceProblem& problem, std::span<const int> touched) {
  double s = 0.0;
  for (int v = 0; v < problem.num_vars(); ++v) {
    if (!std::binary_search(touched.begin(), touched.end(), v)) {
      s += std::log(static_cast<double>(problem.cardinalities()[static_cast<std::size_t>(v)]));
    }
  }
  return s;
}

// E[ln alpha] where the expectation is over `marg` (a distribution on a
// subset of the kernel scope) extended uniformly to the rest of the scope.
double expected_log(const Table& marg, const Kernel& kernel) {
  double spread = 1.0;
  std::vector<std::size_t> pos;  // positions of marg's variables within the kernel scope
  for (std::size_t i = 0; i < kernel.scope.size(); ++i) {
    if (marg.contains(kernel.scope[i])) {
      pos.push_back(i);
    } else {
      spread *= kernel.cards[i];
    }
  }
  std::vector<int> digits(kernel.scope.size(), 0);
  std::vector<double> terms;
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    std::size_t m = 0;
    for (std::size_t p = 0; p < pos.size(); ++p) {
      m = m * static_cast<std::size_t>(marg.cards[p]) + static_cast<std::size_t>(digits[pos[p]]);
    }
    const double q = marg.values[m] / spread;
    if (q > 0.0) {
      if (kernel.values[i] == 0.0) return -kInf;
      terms.push_back(q * std::log(kernel.values[i]));
    }
    next_assignment(digits, kernel.cards);
  }
  return stable_sum(terms);
}

// q_T as a table over the touched variables, evaluated pointwise from the
// calibrated tree beliefs.
Table dense_tree_joint(const InferenceProblem& problem, const TreeBeliefs& beliefs,
                       std::span<const int> touched, OracleLimits limits) {
  Table out = Table::constant(std::vector<int>(touched.begin(), touched.end()), problem.cardinalities(), 0.0);
  if (out.size() > limits.max_states) throw CapacityError("tree joint exceeds the state cap");
  std::vector<int> full(static_cast<std::size_t>(problem.num_vars()), 0);
  std::vector<int> digits(touched.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < touched.size(); ++k) full[static_cast<std::size_t>(touched[k])] = digits[k];
    out.values[i] = tree_joint_eval(beliefs, full);
    next_assignment(digits, out.cards);
  }
  return out;
}

std::vector<int> complement_of(const InferenceProblem& problem, std::span<const int> kernels) {
  std::vector<int> out;
  for (int k = 0; k < problem.num_kernels(); ++k) {
    if (!std::binary_search(kernels.begin(), kernels.end(), k)) out.push_back(k);
  }
  return out;
}

}  // namespace

std::vector<int> complement_kernels(const InferenceProblem& problem, const SubTree& subtree) {
  return complement_of(problem, subtree.kernels);
}

Table eliminate_marginal(const InferenceProblem& problem, const SubTree& subtree, std::span<const int> scope,
                         OracleLimits limits) {
  std::vector<Table> factors = subtree_kernels(problem, subtree);
  const auto touched = subtree.variables();
  if (!is_subset(scope, touched)) throw ContractError("eliminate_marginal: scope not covered by the subtree");
  auto pending = set_difference(touched, scope);
  while (!pending.empty()) {
    // Greedy: eliminate the variable whose bucket product is smallest.
    std::size_t best = 0;
    std::uint64_t best_size = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = 0; i < pending.size(); ++i) {
      std::vector<int> bucket_scope;
      for (const auto& f : factors) {
        if (f.contains(pending[i])) bucket_scope = set_union(bucket_scope, f.scope);
      }
      std::vector<int> cards;
      for (int v : bucket_scope) cards.push_back(problem.cardinalities()[static_cast<std::size_t>(v)]);
      const auto size = domain_size(cards);
      if (size < best_size) {
        best_size = size;
        best = i;
      }
    }
    if (best_size > limits.max_states) {
      throw CapacityError("variable elimination needs a table of " + std::to_string(best_size) + " entries");
    }
    const int var = pending[best];
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    Table bucket(std::vector<int>{}, std::vector<int>{}, std::vector<double>{1.0});
    std::vector<Table> rest;
    for (auto& f : factors) {
      if (f.contains(var)) {
        bucket = multiply(bucket, f);
      } else {
        rest.push_back(std::move(f));
      }
    }
    const std::vector<int> drop{var};
    Table reduced = marginalize(bucket, set_difference(bucket.scope, drop));
    const double peak = *std::max_element(reduced.values.begin(), reduced.values.end());
    if (!(peak > 0.0)) throw DegenerateModelError("subtree model has zero mass");
    for (double& v : reduced.values) v /= peak;
    rest.push_back(std::move(reduced));
    factors = std::move(rest);
  }
  Table result(std::vector<int>{}, std::vector<int>{}, std::vector<double>{1.0});
  for (const auto& f : factors) result = multiply(result, f);
  result = marginalize(result, scope);
  if (!(normalize(result) > 0.0)) throw DegenerateModelError("subtree model has zero mass");
  return result;
}

BoundReport subtree_lower_bound(const InferenceProblem& problem, const SubTree& subtree, BoundOptions options) {
  BoundReport r;
  r.subtree = subtree;
  const TreeBeliefs beliefs = solve_subtree(problem, subtree);
  const auto touched = subtree.variables();
  const double pad = untouched_log_volume(problem, touched);
  r.log_z_tree = *beliefs.log_partition;
  r.log_z_t = r.log_z_tree + pad;
  r.entropy = tree_entropy(beliefs) + pad;

  const auto excluded = complement_kernels(problem, subtree);
  ExcludedRoute route = options.route;
  if (route == ExcludedRoute::automatic) {
    std::vector<int> cards;
    for (int v : touched) cards.push_back(problem.cardinalities()[static_cast<std::size_t>(v)]);
    route = domain_size(cards) <= options.limits.max_states ? ExcludedRoute::dense : ExcludedRoute::elimination;
  }
  std::optional<Table> joint;
  if (route == ExcludedRoute::dense && !excluded.empty()) {
    joint = dense_tree_joint(problem, beliefs, touched, options.limits);
  }
  double excluded_term = 0.0;
  for (int k : excluded) {
    const Kernel& ker = problem.kernel(k);
    const auto scope = set_intersection(ker.scope, touched);
    const Table marg = joint ? marginalize(*joint, scope) : eliminate_marginal(problem, subtree, scope, options.limits);
    const double term = expected_log(marg, ker);
    if (term == -kInf) {
      excluded_term = -kInf;
      break;
    }
    excluded_term += term;
  }
  r.excluded_term = excluded_term;
  r.lower_bound = excluded_term == -kInf ? -kInf : excluded_term + r.log_z_t;

  if (options.with_divergence && problem.num_states() <= options.limits.max_states) {
    const auto p = joint_distribution(problem, options.limits);
    const auto q = subset_distribution(problem, subtree.kernels, options.limits);
    r.divergence_to_p = kl_divergence(q, p);
  }
  return r;
}

ComplementReport complement_distribution(const InferenceProblem& problem, const SubTree& subtree,
                                         OracleLimits limits) {
  auto comp = complement_kernels(problem, subtree);
  if (comp.empty()) throw ContractError("complement of the subtree is empty");
  auto qbar = subset_distribution(problem, comp, limits);
  const auto q = subset_distribution(problem, subtree.kernels, limits);
  const double gap = kl_divergence(q, qbar);
  return {std::move(comp), std::move(qbar), gap};
}

PairDivergences pairwise_divergences(const InferenceProblem& problem, const SubTree& t1, const SubTree& t2,
                                     OracleLimits limits) {
  const auto q1 = subset_distribution(problem, t1.kernels, limits);
  const auto q2 = subset_distribution(problem, t2.kernels, limits);
  const auto bar1 = subset_distribution(problem, complement_kernels(problem, t1), limits);
  const auto bar2 = subset_distribution(problem, complement_kernels(problem, t2), limits);
  return {kl_divergence(q1, q2), kl_divergence(q2, q1), kl_divergence(q1, bar1),
          kl_divergence(q1, bar2), kl_divergence(q2, bar2), entropy(q1), entropy(q2)};
}

}  // namespace jtb
