#include "jtbound/generate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

#include "jtbound/errors.hpp"

namespace jtb {

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not,
// so conversions are done by hand to keep instances identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }
  double log_uniform(double lo, double hi) {
    return std::exp(std::log(lo) + uniform() * (std::log(hi) - std::log(lo)));
  }

 private:
  std::mt19937_64 engine_;
};

std::string canonical(std::string_view name, const std::vector<double>& args) {
  std::ostringstream os;
  os << name << '(';
  for (std::size_t i = 0; i < args.size(); ++i) os << (i ? "," : "") << args[i];
  os << ')';
  return os.str();
}

std::vector<double> random_table(Rng& rng, std::size_t n, double lo, double hi, bool allow_zeros) {
  std::vector<double> t(n);
  for (double& x : t) x = rng.log_uniform(lo, hi);
  if (allow_zeros && rng.below(3) == 0) t[static_cast<std::size_t>(rng.below(static_cast<int>(n)))] = 0.0;
  return t;
}

bool is_integer(double x) { return std::floor(x) == x; }

}  // namespace

FamilySpec parse_family(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')') {
    throw ParseError("family must look like NAME(args): '" + std::string(text) + "'");
  }
  std::string name(text.substr(0, open));
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
  std::vector<double> args;
  std::string inner(text.substr(open + 1, text.size() - open - 2));
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("bad family argument '" + item + "'");
    }
  }
  FamilySpec spec;
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw ParseError(name + ": " + what);
  };
  if (name == "grid") {
    spec.kind = FamilySpec::Kind::grid;
    require(args.size() == 2 || args.size() == 4, "expects (m, n) or (m, n, lo, hi)");
    require(is_integer(args[0]) && is_integer(args[1]) && args[0] >= 1 && args[1] >= 1, "m, n must be positive integers");
    require(args[0] * args[1] >= 2, "needs at least two variables");
  } else if (name == "cycle") {
    spec.kind = FamilySpec::Kind::cycle;
    require(args.size() == 1 || args.size() == 3, "expects (k) or (k, lo, hi)");
    require(is_integer(args[0]) && args[0] >= 3, "k must be an integer >= 3");
  } else if (name == "random_junction") {
    spec.kind = FamilySpec::Kind::random_junction;
    require(args.size() == 2 || args.size() == 3, "expects (M, max_label) or (M, max_label, max_vars)");
    for (double a : args) require(is_integer(a) && a >= 1, "arguments must be positive integers");
  } else {
    throw ParseError("unknown family '" + name + "'");
  }
  if (spec.kind != FamilySpec::Kind::random_junction && args.size() > 2) {
    const double lo = args[args.size() - 2];
    const double hi = args.back();
    require(lo > 0 && hi >= lo, "coupling range must satisfy 0 < lo <= hi");
  }
  spec.args = args;
  spec.text = canonical(name, args);
  return spec;
}

GeneratedModel pairwise_model(int num_vars, std::vector<std::pair<int, int>> pairs,
                              std::vector<std::vector<double>> tables) {
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pairs[a] < pairs[b]; });
  std::vector<Kernel> kernels;
  for (std::size_t i : order) {
    auto [a, b] = pairs[i];
    if (a > b) std::swap(a, b);
    Kernel k;
    k.scope = {a, b};
    k.values = tables[i];
    kernels.push_back(std::move(k));
  }
  InferenceProblem problem(std::vector<int>(static_cast<std::size_t>(num_vars), 2), std::move(kernels));
  std::vector<GraphEdge> edges;
  for (int var = 0; var < num_vars; ++var) {
    int prev = -1;
    for (int k = 0; k < problem.num_kernels(); ++k) {
      if (!problem.kernel(k).contains(var)) continue;
      if (prev >= 0) edges.push_back({prev, k, {var}});
      prev = k;
    }
  }
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& x, const GraphEdge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  auto graph = JunctionGraph::for_problem(problem, std::move(edges));
  return {std::move(problem), std::move(graph)};
}

GeneratedModel generate(const FamilySpec& family, std::uint64_t seed, bool allow_zeros) {
  Rng rng(seed);
  const auto& a = family.args;
  switch (family.kind) {
    case FamilySpec::Kind::grid:
    case FamilySpec::Kind::cycle: {
      const bool grid = family.kind == FamilySpec::Kind::grid;
      const std::size_t base = grid ? 2 : 1;
      const double lo = a.size() > base ? a[base] : 0.25;
      const double hi = a.size() > base ? a[base + 1] : 4.0;
      std::vector<std::pair<int, int>> pairs;
      int n = 0;
      if (grid) {
        const int rows = static_cast<int>(a[0]);
        const int cols = static_cast<int>(a[1]);
        n = rows * cols;
        for (int r = 0; r < rows; ++r) {
          for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) pairs.emplace_back(r * cols + c, r * cols + c + 1);
            if (r + 1 < rows) pairs.emplace_back(r * cols + c, (r + 1) * cols + c);
          }
        }
      } else {
        n = static_cast<int>(a[0]);
        for (int i = 0; i < n; ++i) pairs.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
      }
      std::sort(pairs.begin(), pairs.end());
      std::vector<std::vector<double>> tables;
      for (std::size_t i = 0; i < pairs.size(); ++i) tables.push_back(random_table(rng, 4, lo, hi, allow_zeros));
      return pairwise_model(n, std::move(pairs), std::move(tables));
    }
    case FamilySpec::Kind::random_junction: {
      const int m = static_cast<int>(a[0]);
      const int max_label = static_cast<int>(a[1]);
      const int max_vars = a.size() > 2 ? static_cast<int>(a[2]) : 10;
      int used = 0;
      std::vector<std::vector<int>> labels;
      std::vector<GraphEdge> edges;
      for (int v = 0; v < m; ++v) {
        std::vector<int> label;
        if (v > 0) {
          const int parent = rng.below(v);
          auto pool = labels[static_cast<std::size_t>(parent)];
          const int cap = std::min(static_cast<int>(pool.size()), max_label);
          int sep = rng.between(0, cap);
          if (sep == 0 && used == max_vars) sep = 1;
          for (int i = 0; i < sep; ++i) {
            const int pick = i + rng.below(static_cast<int>(pool.size()) - i);
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick)]);
          }
          label.assign(pool.begin(), pool.begin() + sep);
          std::sort(label.begin(), label.end());
          edges.push_back({parent, v, label});
        }
        const int room = std::min(max_label - static_cast<int>(label.size()), max_vars - used);
        const int fresh = room <= 0 ? 0 : rng.between(label.empty() ? 1 : 0, room);
        for (int i = 0; i < fresh; ++i) label.push_back(used++);
        std::sort(label.begin(), label.end());
        labels.push_back(label);
      }
      std::vector<Kernel> kernels;
      for (const auto& l : labels) {
        Kernel k;
        k.scope = l;
        k.values = random_table(rng, std::size_t{1} << l.size(), 0.25, 4.0, allow_zeros);
        kernels.push_back(std::move(k));
      }
      InferenceProblem problem(std::vector<int>(static_cast<std::size_t>(used), 2), std::move(kernels));
      auto graph = JunctionGraph::for_problem(problem, std::move(edges));
      return {std::move(problem), std::move(graph)};
    }
  }
  throw ContractError("unknown family kind");
}

}  // namespace jtb
