#include "jtbound/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jtbound/errors.hpp"

namespace jtb {

using nlohmann::json;

namespace {

template <typename T>
std::vector<T> read_list(const json& doc, const char* field, const std::string& where) {
  if (!doc.contains(field)) throw ParseError(where + ": missing field '" + field + "'");
  const auto& node = doc.at(field);
  if (!node.is_array()) throw ParseError(where + ": field '" + field + "' must be a list");
  std::vector<T> out;
  for (const auto& x : node) {
    if constexpr (std::is_integral_v<T>) {
      if (!x.is_number_integer()) throw ParseError(where + ": '" + field + "' entries must be integers");
    } else {
      if (!x.is_number()) throw ParseError(where + ": '" + field + "' entries must be numbers");
    }
    out.push_back(x.get<T>());
  }
  return out;
}

}  // namespace

ModelFile parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("model document must be an object");
  if (!doc.contains("num_vars") || !doc.at("num_vars").is_number_integer()) {
    throw ParseError("missing or non-integer 'num_vars'");
  }
  const auto n = doc.at("num_vars").get<long long>();
  auto cards = read_list<int>(doc, "cardinalities", "model");
  if (n < 0 || static_cast<std::size_t>(n) != cards.size()) {
    throw ParseError("'cardinalities' length does not match 'num_vars'");
  }
  if (!doc.contains("kernels") || !doc.at("kernels").is_array()) {
    throw ParseError("missing 'kernels' list");
  }
  std::vector<Kernel> kernels;
  int k = 0;
  for (const auto& node : doc.at("kernels")) {
    const std::string where = "kernel " + std::to_string(k++);
    if (!node.is_object()) throw ParseError(where + ": must be an object");
    Kernel ker;
    ker.scope = read_list<int>(node, "scope", where);
    ker.values = read_list<double>(node, "table", where);
    kernels.push_back(std::move(ker));
  }

  std::optional<JunctionGraph> graph;
  std::vector<GraphEdge> edges;
  if (doc.contains("edges")) {
    if (!doc.at("edges").is_array()) throw ParseError("'edges' must be a list");
    int e = 0;
    for (const auto& node : doc.at("edges")) {
      const std::string where = "edge " + std::to_string(e++);
      if (!node.is_object() || !node.contains("u") || !node.contains("v") ||
          !node.at("u").is_number_integer() || !node.at("v").is_number_integer()) {
        throw ParseError(where + ": needs integer 'u' and 'v'");
      }
      edges.push_back({node.at("u").get<int>(), node.at("v").get<int>(), read_list<int>(node, "label", where)});
    }
  }
  InferenceProblem problem(std::move(cards), std::move(kernels));
  if (doc.contains("edges")) graph = JunctionGraph::for_problem(problem, std::move(edges));
  return {std::move(problem), std::move(graph)};
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string emit_model(const InferenceProblem& problem, const JunctionGraph* graph) {
  json doc = json::object();
  doc["num_vars"] = problem.num_vars();
  doc["cardinalities"] = std::vector<int>(problem.cardinalities().begin(), problem.cardinalities().end());
  json kernels = json::array();
  for (const auto& k : problem.kernels()) {
    kernels.push_back(json{{"scope", k.scope}, {"table", k.values}});
  }
  doc["kernels"] = std::move(kernels);
  if (graph != nullptr) {
    json edges = json::array();
    for (const auto& e : graph->edges) edges.push_back(json{{"u", e.u}, {"v", e.v}, {"label", e.label}});
    doc["edges"] = std::move(edges);
  }
  return doc.dump(2) + "\n";
}

void save_model(const std::string& path, const InferenceProblem& problem, const JunctionGraph* graph) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << emit_model(problem, graph);
}

}  // namespace jtb
