#ifndef JTBOUND_VERIFY_HPP_
#define JTBOUND_VERIFY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jtbound/bounds.hpp"
#include "jtbound/model.hpp"
#include "jtbound/oracle.hpp"
#include "jtbound/subtree.hpp"

namespace jtb {

// Numerical checks of the divergence inequalities between sub-tree bounds.
// Every check is stored as lhs <= rhs (+ tol) over the extended reals:
// -inf on the left or +inf on the right is always satisfied.

inline constexpr double kInequalityTol = 1e-8;
inline constexpr double kIdentityTol = 1e-9;     // L <= ln Z and L = ln Z - D(q_T||p)
inline constexpr double kConsistencyTol = 2e-8;  // the two forms of the path inequality

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs, possibly infinite
  double tol = 0.0;
  bool satisfied = false;
  std::string context;  // subtree ids and ordering decisions
};

InequalityCheck make_check(std::string name, double lhs, double rhs, double tol, std::string context);

// Cached dense quantities for one problem and a list of subtree bound
// reports: p, ln Z, q_T and q-bar_T per report, and the divergences among
// them, computed on demand.
class InstanceAnalysis {
 public:
  InstanceAnalysis(const InferenceProblem& problem, std::vector<BoundReport> reports, OracleLimits limits = {});

  std::size_t size() const { return reports_.size(); }
  const BoundReport& report(std::size_t i) const { return reports_[i]; }
  BoundReport& mutable_report(std::size_t i) { return reports_[i]; }
  std::size_t add(BoundReport report);

  double log_z() const { return log_z_; }
  double d_q_q(std::size_t i, std::size_t j);     // D(q_i || q_j)
  double d_q_bar(std::size_t i, std::size_t j);   // D(q_i || q-bar_j)
  double d_q_p(std::size_t i);                    // D(q_i || p)
  bool complement_empty(std::size_t i) const;
  // Kernel sets of i and j partition R.
  bool partitions(std::size_t i, std::size_t j) const;

 private:
  const DenseDistribution& q(std::size_t i);
  const DenseDistribution& bar(std::size_t i);

  const InferenceProblem& problem_;
  OracleLimits limits_;
  std::vector<BoundReport> reports_;
  DenseDistribution p_;
  double log_z_;
  std::vector<std::optional<DenseDistribution>> q_;
  std::vector<std::optional<DenseDistribution>> bar_;
  std::map<std::pair<std::size_t, std::size_t>, double> dqq_;
  std::map<std::pair<std::size_t, std::size_t>, double> dqbar_;
  std::map<std::size_t, double> dqp_;
};

// Checks on indices of an InstanceAnalysis.  Pair checks order their inputs
// so that H(q1) <= H(q2); equal entropies keep the given order.
InequalityCheck theorem2(InstanceAnalysis& a, std::size_t i, std::size_t j, double tol = kInequalityTol);
// Bound form, path form, triangle form, then a record that the bound and
// path forms agree on slack.
std::vector<InequalityCheck> corollary1(InstanceAnalysis& a, std::size_t i, std::size_t j,
                                        double tol = kInequalityTol);
// Against every entry 0..count-1, which must be the family s minimizes entropy over.
std::vector<InequalityCheck> corollary2(InstanceAnalysis& a, std::size_t s, std::size_t count,
                                        double tol = kInequalityTol);
InequalityCheck theorem3(InstanceAnalysis& a, std::size_t s, std::size_t b, double tol = kInequalityTol);
InequalityCheck corollary3(InstanceAnalysis& a, std::size_t i, std::size_t j, double tol = kInequalityTol);
InequalityCheck lower_bound_validity(InstanceAnalysis& a, std::size_t i);
InequalityCheck bound_identity(InstanceAnalysis& a, std::size_t i);

// Stand-alone forms that compute everything for the given subtrees.
InequalityCheck check_theorem2(const InferenceProblem& problem, const SubTree& t1, const SubTree& t2,
                               double tol = kInequalityTol);
std::vector<InequalityCheck> check_corollary1(const InferenceProblem& problem, const SubTree& t1, const SubTree& t2,
                                              double tol = kInequalityTol);
std::vector<InequalityCheck> check_corollary2(const InferenceProblem& problem, const SubtreeCatalog& catalog,
                                              double tol = kInequalityTol);
InequalityCheck check_theorem3(const InferenceProblem& problem, const SubtreeCatalog& catalog,
                               double tol = kInequalityTol);
// Roles are assigned inside the pair: S has the smaller entropy, B the
// larger bound.  When one tree is both, the check is 0 <= 0.
InequalityCheck check_corollary3(const InferenceProblem& problem, const SubTree& t_s, const SubTree& t_b,
                                 double tol = kInequalityTol);

struct FaultInjection {
  std::size_t instance = 0;
  std::size_t entry = 0;
  double delta = 1.0;
};

struct SuiteConfig {
  std::vector<std::string> families;
  std::size_t instances = 100;  // instance i uses families[i % size] and seed base_seed + i
  std::uint64_t base_seed = 1;
  double tol = kInequalityTol;
  bool allow_zeros = false;
  CatalogOptions catalog;
  OracleLimits limits;
  std::optional<FaultInjection> fault;  // adds delta to one catalog L before checking
};

SuiteConfig default_suite();

struct InstanceRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string family;
  std::size_t catalog_size = 0;
  std::size_t partition_pairs = 0;
  double log_z = 0.0;
  std::string min_entropy_id;
  std::string best_bound_id;
  std::string error;  // non-empty when the instance could not be analysed
};

struct CheckRecord {
  std::size_t instance;
  InequalityCheck check;
};

struct CheckSummary {
  std::size_t total = 0;
  std::size_t violations = 0;
  double min_slack = 0.0;
};

struct SuiteReport {
  std::vector<InstanceRecord> instances;
  std::vector<CheckRecord> checks;

  std::size_t violations() const;
  std::size_t errors() const;
  std::map<std::string, CheckSummary> summary() const;
  bool ok() const { return violations() == 0; }
};

// Never throws for per-instance failures: they land in InstanceRecord::error.
SuiteReport run_suite(const SuiteConfig& config);

// One JSON object per line, fixed field order; infinities as "inf"/"-inf".
void write_structured(const SuiteReport& report, std::ostream& out);
void write_human(const SuiteReport& report, std::ostream& out);

}  // namespace jtb

#endif  // JTBOUND_VERIFY_HPP_
