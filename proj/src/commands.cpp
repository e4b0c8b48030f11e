#include "jtbound/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "jtbound/bounds.hpp"
#include "jtbound/errors.hpp"
#include "jtbound/gdl.hpp"
#include "jtbound/generate.hpp"
#include "jtbound/model_io.hpp"
#include "jtbound/oracle.hpp"

namespace jtb {

namespace {

using nlohmann::ordered_json;

std::string real(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

ordered_json jnum(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

OracleLimits oracle_limits(const RunConfig& c) {
  if (c.max_states == 0) throw ContractError("--max-states must be positive");
  return {c.max_states};
}

CatalogOptions catalog_options(const RunConfig& c) {
  if (c.max_vertices <= 0) throw ContractError("enumeration limit must be positive");
  CatalogOptions o;
  o.mode = c.enumerate;
  o.enumeration.max_vertices = c.max_vertices;
  o.bounds.limits = oracle_limits(c);
  o.bounds.with_divergence = false;
  return o;
}

ModelFile load(const RunConfig& c) {
  if (c.model_path.empty()) throw ContractError("--model is required");
  return load_model(c.model_path);
}

JunctionGraph require_graph(const ModelFile& m) {
  if (!m.graph) throw ValidationError("model has no junction graph ('edges' missing)");
  const auto v = validate_junction_graph(m.problem, *m.graph);
  if (!v.ok()) {
    std::string msg = "invalid junction graph:";
    for (const auto& x : v.violations) msg += "\n  " + x.message;
    throw ValidationError(msg);
  }
  return *m.graph;
}

}  // namespace

int cmd_solve(const RunConfig& config, std::ostream& out) {
  const auto model = load(config);
  const auto& problem = model.problem;
  const auto limits = oracle_limits(config);
  const auto p = joint_distribution(problem, limits);
  const double oracle = p.log_norm();

  std::optional<double> tree;
  std::string tree_note;
  if (!model.graph) {
    tree_note = "not-applicable (no junction graph)";
  } else {
    require_graph(model);
    if (!is_junction_tree(*model.graph)) {
      tree_note = "not-applicable (cyclic)";
    } else {
      const auto beliefs =
          beliefs_from_messages(problem, *model.graph, run_gdl(problem, *model.graph, TreeExact{}));
      tree = beliefs.log_partition;
      // Variables no kernel touches contribute their cardinality.
      std::vector<int> touched;
      for (const auto& k : problem.kernels()) touched = set_union(touched, k.scope);
      for (int v = 0; v < problem.num_vars(); ++v) {
        if (!std::binary_search(touched.begin(), touched.end(), v)) {
          *tree += std::log(static_cast<double>(problem.cardinalities()[static_cast<std::size_t>(v)]));
        }
      }
      if (std::abs(*tree - oracle) > kIdentityTol && !(std::isinf(*tree) && *tree == oracle)) {
        throw std::logic_error("tree and oracle ln Z disagree: " + real(*tree) + " vs " + real(oracle));
      }
    }
  }

  std::vector<Table> marginals;
  for (int v = 0; v < problem.num_vars(); ++v) marginals.push_back(p.marginal(std::vector<int>{v}));

  if (config.format == ReportFormat::structured) {
    ordered_json j;
    j["log_z_oracle"] = jnum(oracle);
    j["log_z_tree"] = tree ? jnum(*tree) : ordered_json(tree_note);
    ordered_json m = ordered_json::array();
    for (const auto& t : marginals) m.push_back(t.values);
    j["marginals"] = std::move(m);
    out << j.dump() << '\n';
    return kExitOk;
  }
  out << "ln Z (oracle): " << real(oracle) << '\n';
  out << "ln Z (tree):   " << (tree ? real(*tree) : tree_note) << '\n';
  out << "marginals:\n";
  for (std::size_t v = 0; v < marginals.size(); ++v) {
    out << "  x" << v << ':';
    for (double x : marginals[v].values) out << ' ' << real(x);
    out << '\n';
  }
  return kExitOk;
}

int cmd_bounds(const RunConfig& config, std::ostream& out) {
  const auto model = load(config);
  const auto graph = require_graph(model);
  const auto& problem = model.problem;
  const auto options = catalog_options(config);
  const auto catalog = build_catalog(problem, graph, options);

  std::vector<BoundReport> rows = catalog.entries;
  std::size_t s = catalog.min_entropy;
  if (config.strategy == Strategy::greedy) {
    // The greedy pick may fall outside the catalog; it is then an extra row.
    const auto pick = min_entropy_subtree(problem, graph, Strategy::greedy, options);
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const BoundReport& r) { return r.subtree == pick.subtree; });
    s = static_cast<std::size_t>(it - rows.begin());
    if (it == rows.end()) rows.push_back(subtree_lower_bound(problem, pick.subtree, options.bounds));
  }
  const std::size_t b = catalog.best_bound;

  const double log_z = brute_force_log_partition(problem, oracle_limits(config));
  std::optional<double> guarantee;
  double gap = std::numeric_limits<double>::quiet_NaN();
  InstanceAnalysis a(problem, rows, oracle_limits(config));
  if (!a.complement_empty(s)) {
    gap = a.d_q_bar(s, s);
    guarantee = rows[s].lower_bound + gap;
    if (rows[s].lower_bound == -std::numeric_limits<double>::infinity() && std::isinf(gap)) {
      guarantee = std::numeric_limits<double>::infinity();
    }
  }
  const double d_b_s = a.d_q_q(b, s);

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return rows[x].lower_bound > rows[y].lower_bound; });

  if (config.format == ReportFormat::structured) {
    for (std::size_t i : order) {
      const auto& r = rows[i];
      ordered_json j;
      j["record"] = "entry";
      j["subtree"] = r.subtree.id();
      j["lower_bound"] = jnum(r.lower_bound);
      j["log_z_t"] = jnum(r.log_z_t);
      j["excluded_term"] = jnum(r.excluded_term);
      j["entropy"] = jnum(r.entropy);
      j["min_entropy"] = i == s;
      j["best_bound"] = i == b;
      out << j.dump() << '\n';
    }
    ordered_json j;
    j["record"] = "summary";
    j["mode"] = to_string(catalog.mode);
    j["strategy"] = config.strategy == Strategy::greedy ? "greedy" : "exhaustive";
    j["log_z"] = jnum(log_z);
    j["guarantee"] = guarantee ? jnum(*guarantee) : ordered_json("not-applicable");
    j["d_q_s_qbar_s"] = guarantee ? jnum(gap) : ordered_json("not-applicable");
    j["d_q_b_q_s"] = jnum(d_b_s);
    out << j.dump() << '\n';
    return kExitOk;
  }

  char line[256];
  std::snprintf(line, sizeof line, "%-28s %18s %18s %18s %18s  %s\n", "subtree", "L", "ln Z_T", "excluded",
                "H(q_T)", "flags");
  out << line;
  for (std::size_t i : order) {
    const auto& r = rows[i];
    std::string flags;
    if (i == s) flags += "S";
    if (i == b) flags += "B";
    std::string l = real(r.lower_bound);
    if (std::isinf(r.lower_bound)) l += " (zero hit)";
    std::snprintf(line, sizeof line, "%-28s %18s %18s %18s %18s  %s\n", r.subtree.id().c_str(), l.c_str(),
                  real(r.log_z_t).c_str(), real(r.excluded_term).c_str(), real(r.entropy).c_str(), flags.c_str());
    out << line;
  }
  out << "\nmode: " << to_string(catalog.mode) << "   entries: " << catalog.entries.size() << '\n';
  out << "ln Z (oracle):             " << real(log_z) << '\n';
  if (guarantee) {
    out << "guarantee L_S + D(S||S~): " << real(*guarantee) << "  (D = " << real(gap) << ")\n";
  } else {
    out << "guarantee L_S + D(S||S~): not-applicable (S uses every kernel)\n";
  }
  out << "D(q_B || q_S):             " << real(d_b_s) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  SuiteConfig suite = default_suite();
  if (!config.families.empty()) suite.families = config.families;
  for (const auto& f : suite.families) parse_family(f);
  suite.instances = config.instances;
  suite.base_seed = config.seed;
  suite.tol = config.tol;
  suite.allow_zeros = config.allow_zeros;
  suite.catalog = catalog_options(config);
  suite.limits = oracle_limits(config);
  suite.fault = config.inject_fault;
  const auto report = run_suite(suite);
  if (config.format == ReportFormat::structured) {
    write_structured(report, out);
  } else {
    write_human(report, out);
  }
  return report.ok() ? kExitOk : kExitViolation;
}

int cmd_gen(const RunConfig& config, std::ostream& out) {
  if (config.families.empty()) throw ContractError("--family is required");
  const auto family = parse_family(config.families.front());
  const auto model = generate(family, config.seed, config.allow_zeros);
  const auto v = validate_junction_graph(model.problem, model.graph);
  if (!v.ok()) throw std::logic_error("generator produced an invalid junction graph");
  out << emit_model(model.problem, &model.graph);
  return kExitOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const StructuralError*>(&e)) {
    return kExitInvalidModel;
  }
  if (dynamic_cast<const CapacityError*>(&e)) return kExitCapacity;
  if (dynamic_cast<const DegenerateModelError*>(&e)) return kExitDegenerate;
  return kExitUsage;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.out_path.empty()) {
      file.open(config.out_path);
      if (!file) throw Error("cannot write '" + config.out_path + "'");
      sink = &file;
    }
    if (config.command == "solve") return cmd_solve(config, *sink);
    if (config.command == "bounds") return cmd_bounds(config, *sink);
    if (config.command == "verify") return cmd_verify(config, *sink);
    if (config.command == "gen") return cmd_gen(config, *sink);
    throw ContractError("unknown command '" + config.command + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace jtb
