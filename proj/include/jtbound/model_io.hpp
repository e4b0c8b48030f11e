#ifndef JTBOUND_MODEL_IO_HPP_
#define JTBOUND_MODEL_IO_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "jtbound/model.hpp"

namespace jtb {

// On-disk model: a JSON document
//
//   { "num_vars": 3,
//     "cardinalities": [2, 2, 2],
//     "kernels": [ {"scope": [0, 1], "table": [2, 1, 1, 2]}, ... ],
//     "edges":   [ {"u": 0, "v": 1, "label": [1]}, ... ] }      (optional)
//
// Tables are row-major with the last scope variable fastest.
struct ModelFile {
  InferenceProblem problem;
  std::optional<JunctionGraph> graph;
};

// Throws ParseError for malformed documents and ValidationError for
// documents that parse but describe an invalid problem.
ModelFile parse_model(std::string_view text);
ModelFile load_model(const std::string& path);

// Doubles are written in shortest round-trip form, so parse(emit(m))
// reproduces every table entry bit-exactly.
std::string emit_model(const InferenceProblem& problem, const JunctionGraph* graph);
void save_model(const std::string& path, const InferenceProblem& problem, const JunctionGraph* graph);

}  // namespace jtb

#endif  // JTBOUND_MODEL_IO_HPP_
