#include "jtbound/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "jtbound/errors.hpp"

namespace jtb {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  // False when a and b were already joined.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[static_cast<std::size_t>(b)] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

bool strictly_increasing(std::span<const int> xs) {
  return std::adjacent_find(xs.begin(), xs.end(), std::greater_equal<>()) == xs.end();
}

std::string join(std::span<const int> xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

// For every variable, the subgraph of vertices whose label contains it and
// edges (among `edge_ids`) whose label contains it must be a tree.
std::vector<Violation> label_tree_violations(const JunctionGraph& g, std::span<const int> vertex_ids,
                                             std::span<const int> edge_ids) {
  std::map<int, std::vector<int>> holders;
  for (int v : vertex_ids) {
    for (int var : g.vertex_labels[static_cast<std::size_t>(v)]) holders[var].push_back(v);
  }
  std::vector<Violation> out;
  for (const auto& [var, verts] : holders) {
    std::map<int, int> local;
    for (int v : verts) local.emplace(v, static_cast<int>(local.size()));
    DisjointSets ds(static_cast<int>(verts.size()));
    int components = static_cast<int>(verts.size());
    bool cycle = false;
    for (int e : edge_ids) {
      const auto& edge = g.edges[static_cast<std::size_t>(e)];
      if (!std::binary_search(edge.label.begin(), edge.label.end(), var)) continue;
      auto iu = local.find(edge.u);
      auto iv = local.find(edge.v);
      if (iu == local.end() || iv == local.end()) continue;  // reported as subset violation
      if (ds.unite(iu->second, iv->second)) {
        --components;
      } else {
        cycle = true;
      }
    }
    if (cycle) {
      out.push_back({ViolationKind::label_cycle, -1, var, -1,
                     "label " + std::to_string(var) + " induces a cycle"});
    }
    if (components > 1) {
      out.push_back({ViolationKind::label_disconnected, -1, var, -1,
                     "label " + std::to_string(var) + " induces a disconnected subgraph"});
    }
  }
  return out;
}

}  // namespace

InferenceProblem::InferenceProblem(std::vector<int> cardinalities, std::vector<Kernel> kernels)
    : cards_(std::move(cardinalities)), kernels_(std::move(kernels)) {
  std::vector<std::string> problems;
  const int n = static_cast<int>(cards_.size());
  if (n == 0) problems.push_back("num_vars must be positive");
  for (int i = 0; i < n; ++i) {
    if (cards_[static_cast<std::size_t>(i)] < 1) {
      problems.push_back("variable " + std::to_string(i) + " has non-positive cardinality");
    }
  }
  if (kernels_.empty()) problems.push_back("at least one kernel is required");
  std::vector<bool> covered(static_cast<std::size_t>(n), false);
  const bool header_ok = problems.empty();
  for (std::size_t k = 0; k < kernels_.size() && header_ok; ++k) {
    auto& ker = kernels_[k];
    const std::string tag = "kernel " + std::to_string(k) + ": ";
    if (ker.scope.empty()) {
      problems.push_back(tag + "empty scope");
      continue;
    }
    if (!strictly_increasing(ker.scope)) {
      problems.push_back(tag + "scope indices must be strictly increasing");
      continue;
    }
    if (ker.scope.front() < 0 || ker.scope.back() >= n) {
      problems.push_back(tag + "scope index out of range");
      continue;
    }
    for (int v : ker.scope) covered[static_cast<std::size_t>(v)] = true;
    std::vector<int> expected;
    for (int v : ker.scope) expected.push_back(cards_[static_cast<std::size_t>(v)]);
    if (ker.cards.empty()) {
      ker.cards = expected;
    } else if (ker.cards != expected) {
      problems.push_back(tag + "cardinalities disagree with the problem");
      continue;
    }
    if (ker.values.size() != domain_size(ker.cards)) {
      problems.push_back(tag + "table length " + std::to_string(ker.values.size()) +
                         " does not match joint domain size " +
                         std::to_string(domain_size(ker.cards)));
      continue;
    }
    for (double x : ker.values) {
      if (!std::isfinite(x) || x < 0.0) {
        problems.push_back(tag + "table entries must be finite and non-negative");
        break;
      }
    }
  }
  if (header_ok) {
    for (int i = 0; i < n; ++i) {
      if (!covered[static_cast<std::size_t>(i)]) {
        problems.push_back("variable " + std::to_string(i) + " appears in no kernel scope");
      }
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid model:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
}

JunctionGraph JunctionGraph::for_problem(const InferenceProblem& problem, std::vector<GraphEdge> edges) {
  JunctionGraph g;
  for (const auto& k : problem.kernels()) g.vertex_labels.push_back(k.scope);
  g.edges = std::move(edges);
  return g;
}

std::vector<std::vector<std::pair<int, int>>> JunctionGraph::adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(vertex_labels.size());
  for (int e = 0; e < num_edges(); ++e) {
    const auto& edge = edges[static_cast<std::size_t>(e)];
    adj[static_cast<std::size_t>(edge.u)].emplace_back(edge.v, e);
    adj[static_cast<std::size_t>(edge.v)].emplace_back(edge.u, e);
  }
  return adj;
}

ValidationResult validate_junction_graph(const InferenceProblem& problem, const JunctionGraph& graph) {
  if (graph.num_vertices() != problem.num_kernels()) {
    throw StructuralError("junction graph has " + std::to_string(graph.num_vertices()) +
                          " vertices but the problem has " + std::to_string(problem.num_kernels()) +
                          " kernels");
  }
  ValidationResult result;
  auto& out = result.violations;
  for (int v = 0; v < graph.num_vertices(); ++v) {
    if (graph.vertex_labels[static_cast<std::size_t>(v)] != problem.kernel(v).scope) {
      out.push_back({ViolationKind::label_mismatch, -1, -1, v,
                     "vertex " + std::to_string(v) + " label differs from kernel scope"});
    }
  }
  std::set<std::pair<int, int>> seen;
  std::vector<int> usable;
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto& edge = graph.edges[static_cast<std::size_t>(e)];
    const std::string tag = "edge " + std::to_string(e) + " (" + std::to_string(edge.u) + "," +
                            std::to_string(edge.v) + ")";
    if (edge.u == edge.v) {
      out.push_back({ViolationKind::self_loop, e, -1, edge.u, tag + " is a self-loop"});
      continue;
    }
    if (edge.u < 0 || edge.v < 0 || edge.u >= graph.num_vertices() ||
        edge.v >= graph.num_vertices() || edge.u > edge.v) {
      out.push_back({ViolationKind::bad_endpoint, e, -1, -1,
                     tag + " has endpoints out of range or not ordered u < v"});
      continue;
    }
    if (!seen.emplace(edge.u, edge.v).second) {
      out.push_back({ViolationKind::duplicate_edge, e, -1, -1, tag + " duplicates an earlier edge"});
      continue;
    }
    if (!strictly_increasing(edge.label)) {
      out.push_back({ViolationKind::unsorted_label, e, -1, -1,
                     tag + " label must be strictly increasing"});
      continue;
    }
    const auto common = set_intersection(graph.vertex_labels[static_cast<std::size_t>(edge.u)],
                                         graph.vertex_labels[static_cast<std::size_t>(edge.v)]);
    if (!is_subset(edge.label, common)) {
      out.push_back({ViolationKind::edge_label_not_subset, e, -1, -1,
                     tag + " label {" + join(edge.label) + "} not a subset of the endpoint intersection {" +
                         join(common) + "}"});
      continue;
    }
    usable.push_back(e);
  }
  std::vector<int> all(static_cast<std::size_t>(graph.num_vertices()));
  std::iota(all.begin(), all.end(), 0);
  auto label_issues = label_tree_violations(graph, all, usable);
  out.insert(out.end(), label_issues.begin(), label_issues.end());
  return result;
}

bool is_junction_tree(const JunctionGraph& graph) {
  const int n = graph.num_vertices();
  if (n == 0 || graph.num_edges() != n - 1) return false;
  DisjointSets ds(n);
  for (const auto& e : graph.edges) {
    if (!ds.unite(e.u, e.v)) return false;
  }
  return true;
}

std::vector<int> SubTree::variables() const {
  std::vector<int> vars;
  for (const auto& l : local.vertex_labels) vars = set_union(vars, l);
  return vars;
}

std::string SubTree::id() const { return "v[" + join(vertices) + "]e[" + join(edges) + "]"; }

bool SubTree::operator<(const SubTree& o) const {
  if (vertices != o.vertices) return vertices < o.vertices;
  return edges < o.edges;
}

const char* to_string(Rejection r) {
  switch (r) {
    case Rejection::none: return "none";
    case Rejection::cycle: return "cycle";
    case Rejection::disconnected: return "disconnected";
    case Rejection::edge_outside: return "edge endpoint outside vertex subset";
    case Rejection::junction_broken: return "junction property broken after restriction";
    case Rejection::empty: return "empty vertex subset";
  }
  return "unknown";
}

SubtreeExtraction extract_subtree(const JunctionGraph& graph, std::span<const int> vertices_in,
                                  std::span<const int> edges_in) {
  std::vector<int> vertices(vertices_in.begin(), vertices_in.end());
  std::vector<int> edges(edges_in.begin(), edges_in.end());
  std::sort(vertices.begin(), vertices.end());
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end() ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw ContractError("extract_subtree: repeated vertex or edge id");
  }
  for (int v : vertices) {
    if (v < 0 || v >= graph.num_vertices()) throw ContractError("extract_subtree: no vertex " + std::to_string(v));
  }
  for (int e : edges) {
    if (e < 0 || e >= graph.num_edges()) throw ContractError("extract_subtree: no edge " + std::to_string(e));
  }

  SubtreeExtraction res;
  if (vertices.empty()) {
    res.reason = Rejection::empty;
    return res;
  }
  std::map<int, int> local;
  for (int v : vertices) local.emplace(v, static_cast<int>(local.size()));
  DisjointSets ds(static_cast<int>(vertices.size()));
  int components = static_cast<int>(vertices.size());
  for (int e : edges) {
    const auto& edge = graph.edges[static_cast<std::size_t>(e)];
    auto iu = local.find(edge.u);
    auto iv = local.find(edge.v);
    if (iu == local.end() || iv == local.end()) {
      res.reason = Rejection::edge_outside;
      res.detail = "edge " + std::to_string(e);
      return res;
    }
    if (!ds.unite(iu->second, iv->second)) {
      res.reason = Rejection::cycle;
      res.detail = "edge " + std::to_string(e) + " closes a cycle";
      return res;
    }
    --components;
  }
  if (components > 1) {
    res.reason = Rejection::disconnected;
    res.detail = std::to_string(components) + " components";
    return res;
  }
  auto broken = label_tree_violations(graph, vertices, edges);
  if (!broken.empty()) {
    res.reason = Rejection::junction_broken;
    res.detail = broken.front().message;
    return res;
  }

  SubTree t;
  t.vertices = vertices;
  t.edges = edges;
  t.kernels = vertices;
  for (int v : vertices) t.local.vertex_labels.push_back(graph.vertex_labels[static_cast<std::size_t>(v)]);
  for (int e : edges) {
    const auto& edge = graph.edges[static_cast<std::size_t>(e)];
    int a = local.at(edge.u);
    int b = local.at(edge.v);
    if (a > b) std::swap(a, b);
    t.local.edges.push_back({a, b, edge.label});
  }
  res.subtree = std::move(t);
  return res;
}

RestrictedProblem restrict_to_kernels(const InferenceProblem& problem, std::span<const int> kernel_ids) {
  std::vector<int> vars;
  for (int k : kernel_ids) vars = set_union(vars, problem.kernel(k).scope);
  std::vector<int> remap(static_cast<std::size_t>(problem.num_vars()), -1);
  std::vector<int> cards;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    remap[static_cast<std::size_t>(vars[i])] = static_cast<int>(i);
    cards.push_back(problem.cardinalities()[static_cast<std::size_t>(vars[i])]);
  }
  std::vector<Kernel> kernels;
  for (int k : kernel_ids) {
    Kernel copy = problem.kernel(k);
    for (int& v : copy.scope) v = remap[static_cast<std::size_t>(v)];
    kernels.push_back(std::move(copy));
  }
  return {InferenceProblem(std::move(cards), std::move(kernels)), std::move(vars)};
}

}  // namespace jtb
