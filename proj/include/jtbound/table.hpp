#ifndef JTBOUND_TABLE_HPP_
#define JTBOUND_TABLE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace jtb {

// A dense non-negative function over the joint domain of a sorted set of
// variables.  Values are stored row-major with the last scope variable
// varying fastest.  Kernels, messages, beliefs and marginals all use this
// representation.
struct Table {
  std::vector<int> scope;
  std::vector<int> cards;
  std::vector<double> values;

  Table() = default;
  // `cards` may be empty when an InferenceProblem will supply them.
  Table(std::vector<int> scope, std::vector<int> cards, std::vector<double> values);

  // A table of `fill` over the given scope; cards are looked up by variable id.
  static Table constant(std::vector<int> scope, std::span<const int> all_cards, double fill);

  std::size_t size() const { return values.size(); }

  // Row-major strides for each scope position.
  std::vector<std::size_t> strides() const;

  // Linear index of the entry selected by a full assignment (indexed by
  // variable id).
  std::size_t index_of(std::span<const int> assignment) const;

  double at(std::span<const int> assignment) const { return values[index_of(assignment)]; }

  bool contains(int var) const;
};

// Product of joint domain sizes; saturates at UINT64_MAX.
std::uint64_t domain_size(std::span<const int> cards);

// Pointwise product over the union of both scopes.
Table multiply(const Table& a, const Table& b);

// Sum out every variable not in `keep`.  `keep` must be a sorted subset of
// the table's scope.
Table marginalize(const Table& t, std::span<const int> keep);

// Divides by the entry sum and returns that sum.  A zero sum leaves the
// table untouched.
double normalize(Table& t);

// Sorted set helpers over variable-index vectors.
std::vector<int> set_union(std::span<const int> a, std::span<const int> b);
std::vector<int> set_intersection(std::span<const int> a, std::span<const int> b);
std::vector<int> set_difference(std::span<const int> a, std::span<const int> b);
bool is_subset(std::span<const int> sub, std::span<const int> super);

// Sum in fixed order.  Tables above 2^12 entries use Neumaier compensation.
double stable_sum(std::span<const double> xs);

// Running Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// ln(sum(exp(x))) skipping -inf terms; -inf when every term is -inf.
double log_sum_exp(std::span<const double> log_terms);

// Advances a mixed-radix counter (last digit fastest).  Returns false after
// wrapping past the final assignment.
bool next_assignment(std::span<int> digits, std::span<const int> cards);

}  // namespace jtb

#endif  // JTBOUND_TABLE_HPP_
