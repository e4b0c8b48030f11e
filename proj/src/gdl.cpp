#include "jtbound/gdl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jtbound/errors.hpp"

namespace jtb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t slot(int edge, bool from_u) { return static_cast<std::size_t>(2 * edge + (from_u ? 0 : 1)); }

class Passer {
 public:
  Passer(std::span<const Kernel> kernels, const JunctionGraph& graph, GdlOptions options)
      : kernels_(kernels), graph_(graph), adj_(graph.adjacency()), options_(options) {
    if (static_cast<int>(kernels.size()) != graph.num_vertices()) {
      throw StructuralError("kernel count does not match junction graph vertex count");
    }
  }

  // Message from `from` across edge `e`, computed from the messages in
  // `current`.  Returns the table and the ln of the discarded scale.
  std::pair<Table, double> compute(int from, int e, const std::vector<Table>& current) const {
    const auto& edge = graph_.edges[static_cast<std::size_t>(e)];
    Table acc = kernels_[static_cast<std::size_t>(from)];
    for (const auto& [nbr, ne] : adj_[static_cast<std::size_t>(from)]) {
      if (ne == e) continue;
      const bool nbr_is_u = graph_.edges[static_cast<std::size_t>(ne)].u == nbr;
      acc = multiply(acc, current[slot(ne, nbr_is_u)]);
    }
    Table msg = marginalize(acc, edge.label);
    const double s = stable_sum(msg.values);
    if (!(s > 0.0)) {
      throw DegenerateModelError("message from vertex " + std::to_string(from) + " across edge " +
                                 std::to_string(e) + " has zero mass");
    }
    if (!options_.normalize_messages) return {std::move(msg), 0.0};
    for (double& v : msg.values) v /= s;
    return {std::move(msg), std::log(s)};
  }

  Table initial(int e) const {
    const auto& edge = graph_.edges[static_cast<std::size_t>(e)];
    const auto& lab = graph_.vertex_labels[static_cast<std::size_t>(edge.u)];
    std::vector<int> cards;
    for (int var : edge.label) {
      const auto pos = std::lower_bound(lab.begin(), lab.end(), var) - lab.begin();
      cards.push_back(kernels_[static_cast<std::size_t>(edge.u)].cards[static_cast<std::size_t>(pos)]);
    }
    const auto n = static_cast<std::size_t>(domain_size(cards));
    const double fill = options_.normalize_messages ? 1.0 / static_cast<double>(n) : 1.0;
    return Table(edge.label, std::move(cards), std::vector<double>(n, fill));
  }

  MessageSet tree_exact() const {
    if (!is_junction_tree(graph_)) throw ContractError("tree_exact schedule requires a junction tree");
    MessageSet out;
    out.messages.resize(2 * graph_.edges.size());
    for (int e = 0; e < graph_.num_edges(); ++e) {
      out.messages[slot(e, true)] = initial(e);
      out.messages[slot(e, false)] = initial(e);
    }
    // BFS from vertex 0 gives a parent edge for every other vertex.
    const int n = graph_.num_vertices();
    std::vector<int> order{0};
    std::vector<int> parent_edge(static_cast<std::size_t>(n), -1);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    seen[0] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (const auto& [nbr, e] : adj_[static_cast<std::size_t>(order[i])]) {
        if (seen[static_cast<std::size_t>(nbr)]) continue;
        seen[static_cast<std::size_t>(nbr)] = true;
        parent_edge[static_cast<std::size_t>(nbr)] = e;
        order.push_back(nbr);
      }
    }
    double upward_log_scale = 0.0;
    for (std::size_t i = order.size(); i-- > 1;) {
      const int v = order[i];
      const int e = parent_edge[static_cast<std::size_t>(v)];
      const bool from_u = graph_.edges[static_cast<std::size_t>(e)].u == v;
      auto [msg, log_s] = compute(v, e, out.messages);
      out.messages[slot(e, from_u)] = std::move(msg);
      upward_log_scale += log_s;
      ++out.updates;
    }
    {
      Table root = kernels_[0];
      for (const auto& [nbr, e] : adj_[0]) {
        root = multiply(root, out.messages[slot(e, graph_.edges[static_cast<std::size_t>(e)].u == nbr)]);
      }
      const double mass = stable_sum(root.values);
      if (!(mass > 0.0)) throw DegenerateModelError("root vertex has zero mass");
      out.root_log_partition = std::log(mass) + upward_log_scale;
    }
    for (std::size_t i = 1; i < order.size(); ++i) {
      const int v = order[i];
      const int e = parent_edge[static_cast<std::size_t>(v)];
      const auto& edge = graph_.edges[static_cast<std::size_t>(e)];
      const int parent = edge.u == v ? edge.v : edge.u;
      auto [msg, log_s] = compute(parent, e, out.messages);
      out.messages[slot(e, edge.u == parent)] = std::move(msg);
      ++out.updates;
    }
    out.converged = true;
    return out;
  }

  MessageSet synchronous(const Synchronous& cfg) const {
    MessageSet out;
    out.messages.resize(2 * graph_.edges.size());
    for (int e = 0; e < graph_.num_edges(); ++e) {
      out.messages[slot(e, true)] = initial(e);
      out.messages[slot(e, false)] = initial(e);
    }
    if (graph_.edges.empty()) {
      out.converged = true;
      return out;
    }
    for (int it = 0; it < cfg.max_iters; ++it) {
      std::vector<Table> next(out.messages.size());
      double delta = 0.0;
      for (int e = 0; e < graph_.num_edges(); ++e) {
        const auto& edge = graph_.edges[static_cast<std::size_t>(e)];
        for (bool from_u : {true, false}) {
          auto [msg, log_s] = compute(from_u ? edge.u : edge.v, e, out.messages);
          const auto& old = out.messages[slot(e, from_u)];
          for (std::size_t k = 0; k < msg.size(); ++k) {
            delta = std::max(delta, std::abs(msg.values[k] - old.values[k]));
          }
          next[slot(e, from_u)] = std::move(msg);
          ++out.updates;
        }
      }
      out.messages = std::move(next);
      out.iterations = it + 1;
      if (delta < cfg.tol) {
        out.converged = true;
        break;
      }
    }
    return out;
  }

 private:
  std::span<const Kernel> kernels_;
  const JunctionGraph& graph_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  GdlOptions options_;
};

}  // namespace

MessageSet run_gdl(std::span<const Kernel> kernels, const JunctionGraph& graph, Schedule schedule,
                   GdlOptions options) {
  Passer passer(kernels, graph, options);
  if (std::holds_alternative<TreeExact>(schedule)) return passer.tree_exact();
  return passer.synchronous(std::get<Synchronous>(schedule));
}

MessageSet run_gdl(const InferenceProblem& problem, const JunctionGraph& graph, Schedule schedule,
                   GdlOptions options) {
  return run_gdl(std::span<const Kernel>(problem.kernels()), graph, schedule, options);
}

TreeBeliefs beliefs_from_messages(std::span<const Kernel> kernels, const JunctionGraph& graph,
                                  const MessageSet& messages) {
  if (messages.messages.size() != 2 * graph.edges.size() ||
      static_cast<int>(kernels.size()) != graph.num_vertices()) {
    throw StructuralError("message set is not shaped for this graph");
  }
  const auto adj = graph.adjacency();
  TreeBeliefs out;
  for (int v = 0; v < graph.num_vertices(); ++v) {
    Table b = kernels[static_cast<std::size_t>(v)];
    for (const auto& [nbr, e] : adj[static_cast<std::size_t>(v)]) {
      b = multiply(b, messages.toward(e, graph.edges[static_cast<std::size_t>(e)].u == nbr));
    }
    const double z = normalize(b);
    if (!(z > 0.0)) throw DegenerateModelError("vertex " + std::to_string(v) + " belief has zero mass");
    out.vertex_beliefs.push_back(std::move(b));
    out.log_vertex_norms.push_back(std::log(z));
  }
  for (int e = 0; e < graph.num_edges(); ++e) {
    Table b = multiply(messages.toward(e, true), messages.toward(e, false));
    const double z = normalize(b);
    if (!(z > 0.0)) throw DegenerateModelError("edge " + std::to_string(e) + " belief has zero mass");
    out.edge_beliefs.push_back(std::move(b));
    out.log_edge_norms.push_back(std::log(z));
  }
  if (is_junction_tree(graph)) {
    double log_z = 0.0;
    for (double l : out.log_vertex_norms) log_z += l;
    for (double l : out.log_edge_norms) log_z -= l;
    if (messages.root_log_partition) {
      const double other = *messages.root_log_partition;
      if (std::abs(other - log_z) > 1e-9 * std::max(1.0, std::abs(log_z))) {
        throw std::logic_error("local-normalizer and root-mass routes to ln Z disagree");
      }
    }
    out.log_partition = log_z;
  }
  return out;
}

TreeBeliefs beliefs_from_messages(const InferenceProblem& problem, const JunctionGraph& graph,
                                  const MessageSet& messages) {
  return beliefs_from_messages(std::span<const Kernel>(problem.kernels()), graph, messages);
}

std::vector<Kernel> subtree_kernels(const InferenceProblem& problem, const SubTree& subtree) {
  std::vector<Kernel> out;
  for (int k : subtree.kernels) out.push_back(problem.kernel(k));
  return out;
}

TreeBeliefs solve_subtree(const InferenceProblem& problem, const SubTree& subtree, GdlOptions options) {
  const auto kernels = subtree_kernels(problem, subtree);
  const auto msgs = run_gdl(kernels, subtree.local, TreeExact{}, options);
  return beliefs_from_messages(kernels, subtree.local, msgs);
}

TreePartition tree_log_partition(const InferenceProblem& problem, const SubTree& subtree) {
  try {
    return {*solve_subtree(problem, subtree).log_partition, false};
  } catch (const DegenerateModelError&) {
    return {-kInf, true};
  }
}

double table_entropy(const Table& t) {
  std::vector<double> terms;
  terms.reserve(t.size());
  for (double p : t.values) terms.push_back(p > 0.0 ? -p * std::log(p) : 0.0);
  return stable_sum(terms);
}

double tree_entropy(const TreeBeliefs& beliefs) {
  double h = 0.0;
  for (const auto& b : beliefs.vertex_beliefs) h += table_entropy(b);
  for (const auto& b : beliefs.edge_beliefs) h -= table_entropy(b);
  return std::max(0.0, h);
}

double tree_joint_eval(const TreeBeliefs& beliefs, std::span<const int> assignment) {
  double num = 1.0;
  for (const auto& b : beliefs.vertex_beliefs) {
    num *= b.at(assignment);
    if (num == 0.0) return 0.0;
  }
  double den = 1.0;
  for (const auto& b : beliefs.edge_beliefs) den *= b.at(assignment);
  return den == 0.0 ? 0.0 : num / den;
}

}  // namespace jtb
