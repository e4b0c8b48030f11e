#include "jtbound/subtree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include "jtbound/errors.hpp"
#include "jtbound/gdl.hpp"

namespace jtb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
  return x;
}

bool contains(std::span<const int> sorted, int x) { return std::binary_search(sorted.begin(), sorted.end(), x); }

std::vector<int> induced_edges(const JunctionGraph& g, std::span<const int> vertices) {
  std::vector<int> out;
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& edge = g.edges[static_cast<std::size_t>(e)];
    if (contains(vertices, edge.u) && contains(vertices, edge.v)) out.push_back(e);
  }
  return out;
}

// Connectivity of the vertex subset through `edges`, optionally restricted
// to edges (and vertices) carrying `label`.
bool connected(const JunctionGraph& g, std::span<const int> vertices, std::span<const int> edges,
               int label = -1) {
  std::vector<int> members;
  for (int v : vertices) {
    if (label < 0 || contains(g.vertex_labels[static_cast<std::size_t>(v)], label)) members.push_back(v);
  }
  if (members.size() <= 1) return true;
  std::vector<int> parent(static_cast<std::size_t>(g.num_vertices()));
  std::iota(parent.begin(), parent.end(), 0);
  int components = static_cast<int>(members.size());
  for (int e : edges) {
    const auto& edge = g.edges[static_cast<std::size_t>(e)];
    if (label >= 0 && !contains(edge.label, label)) continue;
    const int a = find_root(parent, edge.u);
    const int b = find_root(parent, edge.v);
    if (a != b) {
      parent[static_cast<std::size_t>(b)] = a;
      --components;
    }
  }
  return components == 1;
}

bool labels_connected(const JunctionGraph& g, std::span<const int> vertices, std::span<const int> edges) {
  std::vector<int> vars;
  for (int v : vertices) vars = set_union(vars, g.vertex_labels[static_cast<std::size_t>(v)]);
  for (int var : vars) {
    if (!connected(g, vertices, edges, var)) return false;
  }
  return true;
}

// Calls `emit` with every spanning tree (as sorted edge ids) of the
// subgraph on `vertices` formed by `edges`.
void for_each_spanning_tree(const JunctionGraph& g, std::span<const int> vertices, std::span<const int> edges,
                            const std::function<void(const std::vector<int>&)>& emit) {
  const std::size_t need = vertices.size() - 1;
  std::vector<int> chosen;
  std::vector<int> parent(static_cast<std::size_t>(g.num_vertices()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<void(std::size_t, std::vector<int>&)> rec = [&](std::size_t i, std::vector<int>& par) {
    if (chosen.size() == need) {
      emit(chosen);
      return;
    }
    if (edges.size() - i < need - chosen.size()) return;
    const auto& edge = g.edges[static_cast<std::size_t>(edges[i])];
    const int a = find_root(par, edge.u);
    const int b = find_root(par, edge.v);
    if (a != b) {
      std::vector<int> next = par;
      next[static_cast<std::size_t>(b)] = a;
      chosen.push_back(edges[i]);
      rec(i + 1, next);
      chosen.pop_back();
    }
    rec(i + 1, par);
  };
  rec(0, parent);
}

JunctionGraph restrict_graph(const JunctionGraph& g, std::span<const int> vertices, std::span<const int> edges) {
  JunctionGraph out;
  std::map<int, int> local;
  for (int v : vertices) {
    local.emplace(v, static_cast<int>(local.size()));
    out.vertex_labels.push_back(g.vertex_labels[static_cast<std::size_t>(v)]);
  }
  for (int e : edges) {
    const auto& edge = g.edges[static_cast<std::size_t>(e)];
    int a = local.at(edge.u);
    int b = local.at(edge.v);
    if (a > b) std::swap(a, b);
    out.edges.push_back({a, b, edge.label});
  }
  return out;
}

bool better_min(double candidate, double incumbent) {
  return candidate < incumbent - 1e-12 * std::max(1.0, std::abs(incumbent));
}

bool better_max(double candidate, double incumbent) {
  if (incumbent == -kInf) return candidate > -kInf;
  return candidate > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent));
}

// Entropy estimate for a (possibly cyclic) candidate structure.
double entropy_estimate(const InferenceProblem& problem, const JunctionGraph& g, std::span<const int> vertices,
                        std::span<const int> edges) {
  const JunctionGraph local = restrict_graph(g, vertices, edges);
  std::vector<Kernel> kernels;
  for (int v : vertices) kernels.push_back(problem.kernel(v));
  try {
    const Schedule schedule = is_junction_tree(local) ? Schedule{TreeExact{}} : Schedule{Synchronous{200, 1e-10}};
    const auto beliefs = beliefs_from_messages(kernels, local, run_gdl(kernels, local, schedule));
    double h = 0.0;
    for (const auto& b : beliefs.vertex_beliefs) h += table_entropy(b);
    for (const auto& b : beliefs.edge_beliefs) h -= table_entropy(b);
    std::vector<int> vars;
    for (const auto& l : local.vertex_labels) vars = set_union(vars, l);
    for (int v = 0; v < problem.num_vars(); ++v) {
      if (!contains(vars, v)) h += std::log(static_cast<double>(problem.cardinalities()[static_cast<std::size_t>(v)]));
    }
    return h;
  } catch (const DegenerateModelError&) {
    return kInf;
  }
}

}  // namespace

const char* to_string(EnumerationMode mode) {
  return mode == EnumerationMode::exhaustive ? "exhaustive" : "spanning";
}

std::vector<SubTree> enumerate_subtrees(const JunctionGraph& graph, EnumerationMode mode, int min_vertices,
                                        EnumerationLimits limits) {
  const int n = graph.num_vertices();
  if (n > limits.max_vertices) {
    throw CapacityError("junction graph has " + std::to_string(n) + " vertices; enumeration limit is " +
                        std::to_string(limits.max_vertices));
  }
  std::vector<SubTree> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> vertices;
    for (int v = 0; v < n; ++v) {
      if (mask & (std::uint64_t{1} << v)) vertices.push_back(v);
    }
    const auto edges = induced_edges(graph, vertices);
    if (!connected(graph, vertices, edges) || !labels_connected(graph, vertices, edges)) continue;
    for_each_spanning_tree(graph, vertices, edges, [&](const std::vector<int>& tree_edges) {
      auto got = extract_subtree(graph, vertices, tree_edges);
      if (got.ok()) out.push_back(std::move(*got.subtree));
    });
  }
  std::sort(out.begin(), out.end());
  if (mode == EnumerationMode::spanning_only) {
    std::size_t largest = 0;
    for (const auto& t : out) largest = std::max(largest, t.vertices.size());
    std::erase_if(out, [&](const SubTree& t) { return t.vertices.size() != largest; });
  } else {
    std::erase_if(out, [&](const SubTree& t) { return static_cast<int>(t.vertices.size()) < min_vertices; });
  }
  return out;
}

std::optional<SubTree> find_subtree_on(const JunctionGraph& graph, std::span<const int> vertices_in) {
  std::vector<int> vertices(vertices_in.begin(), vertices_in.end());
  std::sort(vertices.begin(), vertices.end());
  if (vertices.empty()) return std::nullopt;
  const auto edges = induced_edges(graph, vertices);
  if (!connected(graph, vertices, edges) || !labels_connected(graph, vertices, edges)) return std::nullopt;
  std::optional<SubTree> best;
  for_each_spanning_tree(graph, vertices, edges, [&](const std::vector<int>& tree_edges) {
    auto got = extract_subtree(graph, vertices, tree_edges);
    if (got.ok() && (!best || *got.subtree < *best)) best = std::move(got.subtree);
  });
  return best;
}

SubtreeCatalog build_catalog(const InferenceProblem& problem, const JunctionGraph& graph,
                             const CatalogOptions& options) {
  SubtreeCatalog cat;
  cat.mode = options.mode;
  for (auto& t : enumerate_subtrees(graph, options.mode, options.min_vertices, options.enumeration)) {
    cat.entries.push_back(subtree_lower_bound(problem, t, options.bounds));
  }
  if (cat.entries.empty()) throw ContractError("junction graph admits no sub-junction-tree");
  for (std::size_t i = 1; i < cat.entries.size(); ++i) {
    if (better_min(cat.entries[i].entropy, cat.entries[cat.min_entropy].entropy)) cat.min_entropy = i;
    if (better_max(cat.entries[i].lower_bound, cat.entries[cat.best_bound].lower_bound)) cat.best_bound = i;
  }
  return cat;
}

EntropyChoice min_entropy_subtree(const InferenceProblem& problem, const JunctionGraph& graph, Strategy strategy,
                                  const CatalogOptions& options) {
  if (strategy == Strategy::exhaustive) {
    auto cat = build_catalog(problem, graph, options);
    auto& e = cat.entries[cat.min_entropy];
    return {e.subtree, e.entropy};
  }

  std::vector<int> vertices(static_cast<std::size_t>(graph.num_vertices()));
  std::iota(vertices.begin(), vertices.end(), 0);
  std::vector<int> edges = induced_edges(graph, vertices);
  if (!connected(graph, vertices, edges) || !labels_connected(graph, vertices, edges)) {
    throw ContractError("greedy search needs a connected junction graph");
  }
  while (edges.size() + 1 != vertices.size()) {
    double best_h = kInf;
    std::vector<int> best_v;
    std::vector<int> best_e;
    bool found = false;
    auto consider = [&](std::vector<int> vs, std::vector<int> es) {
      if (vs.empty() || !connected(graph, vs, es) || !labels_connected(graph, vs, es)) return;
      const double h = entropy_estimate(problem, graph, vs, es);
      if (!found || better_min(h, best_h)) {
        found = true;
        best_h = h;
        best_v = std::move(vs);
        best_e = std::move(es);
      }
    };
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto es = edges;
      es.erase(es.begin() + static_cast<std::ptrdiff_t>(i));
      consider(vertices, std::move(es));
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const int gone = vertices[i];
      auto vs = vertices;
      vs.erase(vs.begin() + static_cast<std::ptrdiff_t>(i));
      std::vector<int> es;
      for (int e : edges) {
        const auto& edge = graph.edges[static_cast<std::size_t>(e)];
        if (edge.u != gone && edge.v != gone) es.push_back(e);
      }
      consider(std::move(vs), std::move(es));
    }
    if (!found) throw ContractError("greedy search found no admissible deletion");
    vertices = std::move(best_v);
    edges = std::move(best_e);
  }
  auto got = extract_subtree(graph, vertices, edges);
  if (!got.ok()) throw std::logic_error(std::string("greedy result rejected: ") + to_string(got.reason));
  const auto report = subtree_lower_bound(problem, *got.subtree, options.bounds);
  return {std::move(*got.subtree), report.entropy};
}

BoundChoice best_bound_subtree(const InferenceProblem& problem, const JunctionGraph& graph,
                               const CatalogOptions& options) {
  auto cat = build_catalog(problem, graph, options);
  auto& e = cat.entries[cat.best_bound];
  return {e.subtree, e.lower_bound};
}

}  // namespace jtb
