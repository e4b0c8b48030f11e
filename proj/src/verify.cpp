#include "jtbound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "jtbound/errors.hpp"
#include "jtbound/generate.hpp"

namespace jtb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// a - b where an infinite a minus an infinite b is read as +inf: the
// corresponding bound term carries no information.
double ext_sub(double a, double b) {
  if (a == kInf) return kInf;
  if (b == kInf) return -kInf;
  return a - b;
}

// a + b on the right of a check: -inf + +inf reads as +inf (no constraint).
double ext_add(double a, double b) {
  if (a == kInf || b == kInf) return kInf;
  return a + b;
}

// a + b on the left of a check: -inf + +inf reads as -inf.
double ext_add_lhs(double a, double b) {
  if (a == -kInf || b == -kInf) return -kInf;
  return a + b;
}

bool nearly_less(double x, double y) { return x < y - 1e-12 * std::max(1.0, std::abs(y)); }

std::string pair_context(const InstanceAnalysis& a, std::size_t first, std::size_t second, bool swapped) {
  return "t1=" + a.report(first).subtree.id() + " t2=" + a.report(second).subtree.id() +
         " swapped=" + (swapped ? "1" : "0");
}

// (q1, q2, swapped) with H(q1) <= H(q2).
std::tuple<std::size_t, std::size_t, bool> by_entropy(const InstanceAnalysis& a, std::size_t i, std::size_t j) {
  if (a.report(i).entropy > a.report(j).entropy) return {j, i, true};
  return {i, j, false};
}

BoundReport report_for(const InferenceProblem& problem, const SubTree& t) {
  BoundOptions opts;
  opts.with_divergence = false;
  return subtree_lower_bound(problem, t, opts);
}

}  // namespace

InequalityCheck make_check(std::string name, double lhs, double rhs, double tol, std::string context) {
  InequalityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.tol = tol;
  c.context = std::move(context);
  if (lhs == -kInf || rhs == kInf) {
    c.slack = kInf;
    c.satisfied = true;
  } else if (lhs == kInf || rhs == -kInf) {
    c.slack = -kInf;
    c.satisfied = false;
  } else {
    c.slack = rhs - lhs;
    c.satisfied = lhs <= rhs + tol;
  }
  return c;
}

InstanceAnalysis::InstanceAnalysis(const InferenceProblem& problem, std::vector<BoundReport> reports,
                                   OracleLimits limits)
    : problem_(problem),
      limits_(limits),
      reports_(std::move(reports)),
      p_(joint_distribution(problem, limits)),
      log_z_(p_.log_norm()),
      q_(reports_.size()),
      bar_(reports_.size()) {}

std::size_t InstanceAnalysis::add(BoundReport report) {
  reports_.push_back(std::move(report));
  q_.emplace_back();
  bar_.emplace_back();
  return reports_.size() - 1;
}

const DenseDistribution& InstanceAnalysis::q(std::size_t i) {
  if (!q_[i]) q_[i] = subset_distribution(problem_, reports_[i].subtree.kernels, limits_);
  return *q_[i];
}

const DenseDistribution& InstanceAnalysis::bar(std::size_t i) {
  if (!bar_[i]) bar_[i] = subset_distribution(problem_, complement_kernels(problem_, reports_[i].subtree), limits_);
  return *bar_[i];
}

double InstanceAnalysis::d_q_q(std::size_t i, std::size_t j) {
  if (i == j) return 0.0;
  auto [it, fresh] = dqq_.try_emplace({i, j}, 0.0);
  if (fresh) it->second = kl_divergence(q(i), q(j));
  return it->second;
}

double InstanceAnalysis::d_q_bar(std::size_t i, std::size_t j) {
  auto [it, fresh] = dqbar_.try_emplace({i, j}, 0.0);
  if (fresh) it->second = kl_divergence(q(i), bar(j));
  return it->second;
}

double InstanceAnalysis::d_q_p(std::size_t i) {
  auto [it, fresh] = dqp_.try_emplace(i, 0.0);
  if (fresh) it->second = kl_divergence(q(i), p_);
  return it->second;
}

bool InstanceAnalysis::complement_empty(std::size_t i) const {
  return static_cast<int>(reports_[i].subtree.kernels.size()) == problem_.num_kernels();
}

bool InstanceAnalysis::partitions(std::size_t i, std::size_t j) const {
  const auto& a = reports_[i].subtree.kernels;
  const auto& b = reports_[j].subtree.kernels;
  return set_intersection(a, b).empty() &&
         static_cast<int>(a.size() + b.size()) == problem_.num_kernels();
}

InequalityCheck theorem2(InstanceAnalysis& a, std::size_t i, std::size_t j, double tol) {
  const auto [q1, q2, swapped] = by_entropy(a, i, j);
  const double via_own = ext_sub(a.d_q_bar(q1, q1), a.d_q_q(q2, q1));
  const double via_other = ext_add(a.d_q_q(q1, q2), a.d_q_bar(q1, q2));
  const double rhs = ext_add(a.report(q1).lower_bound, std::min(via_own, via_other));
  return make_check("theorem2", a.report(q2).lower_bound, rhs, tol, pair_context(a, q1, q2, swapped));
}

std::vector<InequalityCheck> corollary1(InstanceAnalysis& a, std::size_t i, std::size_t j, double tol) {
  if (!a.partitions(i, j)) throw ContractError("corollary1: kernel sets do not partition R");
  const auto [q1, q2, swapped] = by_entropy(a, i, j);
  const auto ctx = pair_context(a, q1, q2, swapped);
  const double d12 = a.d_q_q(q1, q2);
  const double d21 = a.d_q_q(q2, q1);
  const double d1p = a.d_q_p(q1);
  const double d2p = a.d_q_p(q2);
  std::vector<InequalityCheck> out;
  out.push_back(make_check("corollary1_bound", ext_add_lhs(a.report(q2).lower_bound, d21),
                           ext_add(a.report(q1).lower_bound, d12), tol, ctx));
  out.push_back(make_check("corollary1_path", ext_add(d21, d1p), ext_add(d12, d2p), tol, ctx));
  out.push_back(make_check("triangle_path", d1p, ext_add(d12, d2p), tol, ctx));
  const double s11 = out[0].slack;
  const double s12 = out[1].slack;
  double gap = 0.0;
  if (std::isfinite(s11) && std::isfinite(s12)) {
    gap = std::abs(s11 - s12);
  } else if (s11 != s12) {
    gap = kInf;
  }
  out.push_back(make_check("corollary1_consistency", gap, 0.0, kConsistencyTol, ctx));
  return out;
}

std::vector<InequalityCheck> corollary2(InstanceAnalysis& a, std::size_t s, std::size_t count, double tol) {
  const double guarantee = a.d_q_bar(s, s);
  const double rhs = ext_add(a.report(s).lower_bound, guarantee);
  std::vector<InequalityCheck> out;
  for (std::size_t t = 0; t < count; ++t) {
    out.push_back(make_check("corollary2", a.report(t).lower_bound, rhs, tol,
                             "t=" + a.report(t).subtree.id() + " s=" + a.report(s).subtree.id()));
  }
  return out;
}

InequalityCheck theorem3(InstanceAnalysis& a, std::size_t s, std::size_t b, double tol) {
  return make_check("theorem3", a.d_q_q(b, s), a.d_q_bar(s, s), tol,
                    "s=" + a.report(s).subtree.id() + " b=" + a.report(b).subtree.id());
}

InequalityCheck corollary3(InstanceAnalysis& a, std::size_t i, std::size_t j, double tol) {
  if (!a.partitions(i, j)) throw ContractError("corollary3: kernel sets do not partition R");
  if (a.report(j).subtree < a.report(i).subtree) std::swap(i, j);
  const std::size_t s = nearly_less(a.report(j).entropy, a.report(i).entropy) ? j : i;
  const auto& li = a.report(i).lower_bound;
  const auto& lj = a.report(j).lower_bound;
  const bool j_better = (li == -kInf) ? lj > -kInf : lj > li + 1e-12 * std::max(1.0, std::abs(li));
  const std::size_t b = j_better ? j : i;
  const std::string ctx = "s=" + a.report(s).subtree.id() + " b=" + a.report(b).subtree.id();
  if (s == b) return make_check("corollary3", 0.0, 0.0, tol, ctx + " same=1");
  return make_check("corollary3", a.d_q_q(b, s), a.d_q_q(s, b), tol, ctx + " same=0");
}

InequalityCheck lower_bound_validity(InstanceAnalysis& a, std::size_t i) {
  return make_check("bound_below_log_z", a.report(i).lower_bound, a.log_z(), kIdentityTol, "t=" + a.report(i).subtree.id());
}

InequalityCheck bound_identity(InstanceAnalysis& a, std::size_t i) {
  const double l = a.report(i).lower_bound;
  const double d = a.d_q_p(i);
  double gap = 0.0;
  if (l == -kInf || d == kInf) {
    gap = (l == -kInf && d == kInf) ? 0.0 : kInf;
  } else {
    gap = std::abs(l - (a.log_z() - d));
  }
  return make_check("bound_identity", gap, 0.0, kIdentityTol, "t=" + a.report(i).subtree.id());
}

InequalityCheck check_theorem2(const InferenceProblem& problem, const SubTree& t1, const SubTree& t2, double tol) {
  InstanceAnalysis a(problem, {report_for(problem, t1), report_for(problem, t2)});
  return theorem2(a, 0, 1, tol);
}

std::vector<InequalityCheck> check_corollary1(const InferenceProblem& problem, const SubTree& t1, const SubTree& t2,
                                              double tol) {
  InstanceAnalysis a(problem, {report_for(problem, t1), report_for(problem, t2)});
  return corollary1(a, 0, 1, tol);
}

std::vector<InequalityCheck> check_corollary2(const InferenceProblem& problem, const SubtreeCatalog& catalog,
                                              double tol) {
  InstanceAnalysis a(problem, catalog.entries);
  if (a.complement_empty(catalog.min_entropy)) throw ContractError("corollary2: complement of q_S is empty");
  return corollary2(a, catalog.min_entropy, catalog.entries.size(), tol);
}

InequalityCheck check_theorem3(const InferenceProblem& problem, const SubtreeCatalog& catalog, double tol) {
  InstanceAnalysis a(problem, catalog.entries);
  return theorem3(a, catalog.min_entropy, catalog.best_bound, tol);
}

InequalityCheck check_corollary3(const InferenceProblem& problem, const SubTree& t_s, const SubTree& t_b,
                                 double tol) {
  InstanceAnalysis a(problem, {report_for(problem, t_s), report_for(problem, t_b)});
  return corollary3(a, 0, 1, tol);
}

SuiteConfig default_suite() {
  SuiteConfig c;
  c.families = {"cycle(3)", "grid(2,2)", "grid(2,3)", "grid(3,3)"};
  return c;
}

std::size_t SuiteReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckRecord& r) { return !r.check.satisfied; }));
}

std::size_t SuiteReport::errors() const {
  return static_cast<std::size_t>(
      std::count_if(instances.begin(), instances.end(), [](const InstanceRecord& r) { return !r.error.empty(); }));
}

std::map<std::string, CheckSummary> SuiteReport::summary() const {
  std::map<std::string, CheckSummary> out;
  for (const auto& r : checks) {
    auto& s = out[r.check.name];
    s.min_slack = s.total == 0 ? r.check.slack : std::min(s.min_slack, r.check.slack);
    ++s.total;
    if (!r.check.satisfied) ++s.violations;
  }
  return out;
}

namespace {

void analyse_instance(const SuiteConfig& config, InstanceRecord& rec, std::vector<CheckRecord>& sink) {
  const auto family = parse_family(config.families[rec.index % config.families.size()]);
  rec.family = family.text;
  const auto model = generate(family, rec.seed, config.allow_zeros);
  const auto validation = validate_junction_graph(model.problem, model.graph);
  if (!validation.ok()) throw ValidationError("generated graph invalid: " + validation.violations.front().message);

  SubtreeCatalog catalog = build_catalog(model.problem, model.graph, config.catalog);
  if (config.fault && config.fault->instance == rec.index && config.fault->entry < catalog.entries.size()) {
    catalog.entries[config.fault->entry].lower_bound += config.fault->delta;
    for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
      if (catalog.entries[i].lower_bound > catalog.entries[catalog.best_bound].lower_bound) catalog.best_bound = i;
    }
  }
  const std::size_t count = catalog.entries.size();
  rec.catalog_size = count;
  rec.min_entropy_id = catalog.entries[catalog.min_entropy].subtree.id();
  rec.best_bound_id = catalog.entries[catalog.best_bound].subtree.id();

  InstanceAnalysis a(model.problem, catalog.entries, config.limits);
  rec.log_z = a.log_z();
  std::vector<InequalityCheck> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(lower_bound_validity(a, i));
    out.push_back(bound_identity(a, i));
  }
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) out.push_back(theorem2(a, i, j, config.tol));
  }
  if (!a.complement_empty(catalog.min_entropy)) {
    for (auto& c : corollary2(a, catalog.min_entropy, count, config.tol)) out.push_back(std::move(c));
    out.push_back(theorem3(a, catalog.min_entropy, catalog.best_bound, config.tol));
  }

  // Two-tree partitions: catalog entries whose complement also has a
  // junction-tree representation.
  std::map<std::vector<int>, std::size_t> by_vertices;
  for (std::size_t i = 0; i < count; ++i) by_vertices.emplace(a.report(i).subtree.vertices, i);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    const auto comp = complement_kernels(model.problem, a.report(i).subtree);
    if (comp.empty()) continue;
    std::size_t j = 0;
    if (auto it = by_vertices.find(comp); it != by_vertices.end()) {
      j = it->second;
    } else if (auto partner = find_subtree_on(model.graph, comp)) {
      BoundOptions opts = config.catalog.bounds;
      opts.with_divergence = false;
      j = a.add(subtree_lower_bound(model.problem, *partner, opts));
      by_vertices.emplace(comp, j);
    } else {
      continue;
    }
    pairs.emplace(std::min(i, j), std::max(i, j));
  }
  rec.partition_pairs = pairs.size();
  for (const auto& [i, j] : pairs) {
    for (auto& c : corollary1(a, i, j, config.tol)) out.push_back(std::move(c));
    out.push_back(corollary3(a, i, j, config.tol));
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const InequalityCheck& x, const InequalityCheck& y) { return x.name < y.name; });
  for (auto& c : out) sink.push_back({rec.index, std::move(c)});
}

nlohmann::ordered_json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << x;
  return os.str();
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  SuiteReport report;
  if (config.families.empty()) return report;
  for (std::size_t i = 0; i < config.instances; ++i) {
    InstanceRecord rec;
    rec.index = i;
    rec.seed = config.base_seed + i;
    rec.family = config.families[i % config.families.size()];
    std::vector<CheckRecord> checks;
    try {
      analyse_instance(config, rec, checks);
    } catch (const Error& e) {
      rec.error = e.what();
      checks.clear();
    }
    report.instances.push_back(std::move(rec));
    for (auto& c : checks) report.checks.push_back(std::move(c));
  }
  return report;
}

void write_structured(const SuiteReport& report, std::ostream& out) {
  using nlohmann::ordered_json;
  for (const auto& r : report.instances) {
    ordered_json j;
    j["record"] = "instance";
    j["instance"] = r.index;
    j["seed"] = r.seed;
    j["family"] = r.family;
    j["catalog_size"] = r.catalog_size;
    j["partition_pairs"] = r.partition_pairs;
    j["log_z"] = num(r.log_z);
    j["min_entropy"] = r.min_entropy_id;
    j["best_bound"] = r.best_bound_id;
    j["error"] = r.error;
    out << j.dump() << '\n';
  }
  for (const auto& c : report.checks) {
    const auto& inst = report.instances[c.instance];
    ordered_json j;
    j["record"] = "check";
    j["instance"] = c.instance;
    j["seed"] = inst.seed;
    j["family"] = inst.family;
    j["check"] = c.check.name;
    j["lhs"] = num(c.check.lhs);
    j["rhs"] = num(c.check.rhs);
    j["slack"] = num(c.check.slack);
    j["tol"] = num(c.check.tol);
    j["satisfied"] = c.check.satisfied;
    j["context"] = c.check.context;
    out << j.dump() << '\n';
  }
  for (const auto& [name, s] : report.summary()) {
    ordered_json j;
    j["record"] = "summary";
    j["check"] = name;
    j["total"] = s.total;
    j["violations"] = s.violations;
    j["min_slack"] = num(s.min_slack);
    out << j.dump() << '\n';
  }
  ordered_json t;
  t["record"] = "totals";
  t["instances"] = report.instances.size();
  t["errors"] = report.errors();
  t["checks"] = report.checks.size();
  t["violations"] = report.violations();
  out << t.dump() << '\n';
}

void write_human(const SuiteReport& report, std::ostream& out) {
  out << "instances: " << report.instances.size() << "  errors: " << report.errors()
      << "  checks: " << report.checks.size() << "  violations: " << report.violations() << "\n\n";
  out << std::left << std::setw(24) << "check" << std::right << std::setw(10) << "total" << std::setw(12)
      << "violations" << std::setw(16) << "min slack" << '\n';
  for (const auto& [name, s] : report.summary()) {
    out << std::left << std::setw(24) << name << std::right << std::setw(10) << s.total << std::setw(12)
        << s.violations << std::setw(16) << fmt(s.min_slack) << '\n';
  }
  std::size_t shown = 0;
  for (const auto& c : report.checks) {
    if (c.check.satisfied) continue;
    if (shown++ == 0) out << "\nviolations:\n";
    if (shown > 20) {
      out << "  ...\n";
      break;
    }
    const auto& inst = report.instances[c.instance];
    out << "  " << c.check.name << " seed=" << inst.seed << " " << inst.family << " lhs=" << fmt(c.check.lhs)
        << " rhs=" << fmt(c.check.rhs) << " " << c.check.context << '\n';
  }
  for (const auto& r : report.instances) {
    if (!r.error.empty()) out << "\nerror: seed=" << r.seed << " " << r.family << ": " << r.error << '\n';
  }
}

}  // namespace jtb
