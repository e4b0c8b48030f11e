#include <doctest.h>

#include <cstring>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "jtbound/errors.hpp"
#include "jtbound/model_io.hpp"

using namespace jtb;

TEST_SUITE("model_io") {
  TEST_CASE("round trip is bit-exact") {
    std::mt19937_64 rng(7);
    std::vector<double> awkward{0.1, 1.0 / 3.0, 1e-300, 4.9406564584124654e-324, 1.7976931348623157e308, 0.0};
    for (int i = 0; i < 40; ++i) {
      const std::uint64_t bits = (rng() >> 2) & 0x7fefffffffffffffULL;
      double x;
      std::memcpy(&x, &bits, sizeof x);
      awkward.push_back(x);
    }
    std::vector<Kernel> kernels;
    for (std::size_t i = 0; i + 4 <= awkward.size(); i += 4) {
      kernels.push_back(Kernel({0, 1}, {}, {awkward[i], awkward[i + 1], awkward[i + 2], awkward[i + 3]}));
    }
    const InferenceProblem p({2, 2}, kernels);
    const auto text = emit_model(p, nullptr);
    const auto back = parse_model(text);
    REQUIRE(back.problem.num_kernels() == p.num_kernels());
    for (int k = 0; k < p.num_kernels(); ++k) {
      for (std::size_t i = 0; i < 4; ++i) {
        const double a = p.kernel(k).values[i];
        const double b = back.problem.kernel(k).values[i];
        CHECK(std::memcmp(&a, &b, sizeof a) == 0);
      }
    }
    CHECK_FALSE(back.graph.has_value());
    CHECK(emit_model(back.problem, nullptr) == text);
  }

  TEST_CASE("graph survives the round trip") {
    const auto m = fx::triangle({2.5, 1, 1, 2}, {0.25, 4, 1, 3}, {1, 1, 1, 1});
    const auto back = parse_model(emit_model(m.problem, &m.graph));
    REQUIRE(back.graph.has_value());
    CHECK(back.graph->edges == m.graph.edges);
    CHECK(back.graph->vertex_labels == m.graph.vertex_labels);
  }

  TEST_CASE("malformed documents are parse errors") {
    CHECK_THROWS_AS(parse_model("{"), ParseError);
    CHECK_THROWS_AS(parse_model("[]"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"num_vars": 2})"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"num_vars": 2, "cardinalities": [2], "kernels": []})"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"num_vars": 1, "cardinalities": [2], "kernels": [{"scope": [0], "table": ["a", 1]}]})"),
                    ParseError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ParseError);
  }

  TEST_CASE("well-formed but invalid models are validation errors") {
    CHECK_THROWS_AS(parse_model(R"({"num_vars": 1, "cardinalities": [2], "kernels": [{"scope": [0], "table": [1, -1]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_model(R"({"num_vars": 2, "cardinalities": [2, 2], "kernels": [{"scope": [0], "table": [1, 1]}]})"),
                    ValidationError);
  }
}
