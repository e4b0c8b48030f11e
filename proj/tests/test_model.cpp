#include <doctest.h>

#include <algorithm>
#include <limits>

#include "fixtures.hpp"
#include "jtbound/errors.hpp"
#include "jtbound/generate.hpp"
#include "jtbound/model.hpp"

using namespace jtb;

namespace {

InferenceProblem two_vertex_chain() {
  return InferenceProblem({2, 2, 2}, {Kernel({0, 1}, {}, {1, 1, 1, 1}), Kernel({1, 2}, {}, {1, 1, 1, 1})});
}

bool has_kind(const ValidationResult& r, ViolationKind k) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == k; });
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("problem invariants are all reported") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(InferenceProblem({2, 2}, {Kernel({0}, {}, {1, -1})}), ValidationError);
    CHECK_THROWS_AS(InferenceProblem({2, 2}, {Kernel({1, 0}, {}, {1, 1, 1, 1})}), ValidationError);
    CHECK_THROWS_AS(InferenceProblem({2, 2}, {Kernel({0}, {}, {1, nan})}), ValidationError);
    CHECK_THROWS_AS(InferenceProblem({2, 2}, {Kernel({0}, {}, {1, 1, 1})}), ValidationError);
    CHECK_THROWS_AS(InferenceProblem({2, 2}, {Kernel({}, {}, {1})}), ValidationError);
    try {
      InferenceProblem({2, 2, 2}, {Kernel({0}, {}, {1, -1})});
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("negative") != std::string::npos);
      CHECK(msg.find("variable 1") != std::string::npos);
    }
  }

  TEST_CASE("chain with a shared-variable edge is valid") {
    const auto p = two_vertex_chain();
    const auto g = JunctionGraph::for_problem(p, {{0, 1, {1}}});
    CHECK(validate_junction_graph(p, g).ok());
    CHECK(is_junction_tree(g));
  }

  TEST_CASE("edge label outside the endpoint intersection") {
    const auto p = two_vertex_chain();
    const auto g = JunctionGraph::for_problem(p, {{0, 1, {0, 1}}});
    const auto r = validate_junction_graph(p, g);
    CHECK(has_kind(r, ViolationKind::edge_label_not_subset));
  }

  TEST_CASE("triangle with single-variable labels is a valid cyclic junction graph") {
    const auto m = fx::triangle();
    CHECK(validate_junction_graph(m.problem, m.graph).ok());
    CHECK_FALSE(is_junction_tree(m.graph));
  }

  TEST_CASE("label cycles and disconnections are caught") {
    const auto m = fx::triangle();
    auto g = m.graph;
    g.edges[0].label = {};  // x0 now lives on vertices 0 and 1 with no connecting edge
    CHECK(has_kind(validate_junction_graph(m.problem, g), ViolationKind::label_disconnected));

    const InferenceProblem p({2}, {Kernel({0}, {}, {1, 1}), Kernel({0}, {}, {1, 1}), Kernel({0}, {}, {1, 1})});
    const auto cyc = JunctionGraph::for_problem(p, {{0, 1, {0}}, {0, 2, {0}}, {1, 2, {0}}});
    CHECK(has_kind(validate_junction_graph(p, cyc), ViolationKind::label_cycle));
  }

  TEST_CASE("malformed edges") {
    const auto p = two_vertex_chain();
    CHECK(has_kind(validate_junction_graph(p, JunctionGraph::for_problem(p, {{0, 0, {}}})), ViolationKind::self_loop));
    CHECK(has_kind(validate_junction_graph(p, JunctionGraph::for_problem(p, {{0, 5, {}}})), ViolationKind::bad_endpoint));
    CHECK(has_kind(validate_junction_graph(p, JunctionGraph::for_problem(p, {{0, 1, {1}}, {0, 1, {1}}})),
                   ViolationKind::duplicate_edge));
    auto g = JunctionGraph::for_problem(p, {{0, 1, {1}}});
    g.vertex_labels[0] = {0};
    CHECK(has_kind(validate_junction_graph(p, g), ViolationKind::label_mismatch));
    g.vertex_labels.pop_back();
    CHECK_THROWS_AS(validate_junction_graph(p, g), StructuralError);
  }

  TEST_CASE("is_junction_tree") {
    JunctionGraph single{{{0}}, {}};
    CHECK(is_junction_tree(single));
    JunctionGraph two{{{0}, {1}}, {}};
    CHECK_FALSE(is_junction_tree(two));
  }

  TEST_CASE("extract_subtree on the triangle") {
    const auto m = fx::triangle();
    SUBCASE("dropping a vertex and its edges leaves a chain") {
      const auto got = extract_subtree(m.graph, std::vector<int>{0, 2}, std::vector<int>{1});
      REQUIRE(got.ok());
      CHECK(got.subtree->id() == "v[0,2]e[1]");
      CHECK(got.subtree->kernels == std::vector<int>{0, 2});
      CHECK(got.subtree->variables() == std::vector<int>{0, 1, 2});
      CHECK(got.subtree->local.edges[0].u == 0);
      CHECK(got.subtree->local.edges[0].v == 1);
    }
    SUBCASE("all three edges form a cycle") {
      const auto got = extract_subtree(m.graph, std::vector<int>{0, 1, 2}, std::vector<int>{0, 1, 2});
      CHECK(got.reason == Rejection::cycle);
    }
    SUBCASE("two edges on three vertices disconnect the dropped edge's label") {
      const auto got = extract_subtree(m.graph, std::vector<int>{0, 1, 2}, std::vector<int>{1, 2});
      CHECK_FALSE(got.ok());
      CHECK(got.reason == Rejection::junction_broken);
    }
    SUBCASE("edge leaving the vertex set") {
      CHECK(extract_subtree(m.graph, std::vector<int>{0}, std::vector<int>{0}).reason == Rejection::edge_outside);
    }
    SUBCASE("missing connection") {
      CHECK(extract_subtree(m.graph, std::vector<int>{0, 2}, std::vector<int>{}).reason ==
            Rejection::disconnected);
    }
    SUBCASE("empty and unknown ids") {
      CHECK(extract_subtree(m.graph, std::vector<int>{}, std::vector<int>{}).reason == Rejection::empty);
      CHECK_THROWS_AS(extract_subtree(m.graph, std::vector<int>{7}, std::vector<int>{}), ContractError);
      CHECK_THROWS_AS(extract_subtree(m.graph, std::vector<int>{0, 0}, std::vector<int>{}), ContractError);
    }
  }

  TEST_CASE("restrict_to_kernels re-indexes touched variables") {
    const auto m = jtb::pairwise_model(4, {{0, 1}, {2, 3}}, {{1, 2, 3, 4}, {5, 6, 7, 8}});
    const auto r = restrict_to_kernels(m.problem, std::vector<int>{1});
    CHECK(r.original_vars == std::vector<int>{2, 3});
    CHECK(r.problem.num_vars() == 2);
    CHECK(r.problem.kernel(0).scope == std::vector<int>{0, 1});
    CHECK(r.problem.kernel(0).values == std::vector<double>{5, 6, 7, 8});
  }

  TEST_CASE("generated families always validate") {
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
      const auto t = generate(parse_family(fx::random_tree_family(seed)), seed);
      CHECK(validate_junction_graph(t.problem, t.graph).ok());
      CHECK(is_junction_tree(t.graph));
      CHECK(t.problem.num_vars() <= 10);
    }
    for (const char* f : {"cycle(3)", "cycle(5)", "grid(2,2)", "grid(3,3)", "grid(2,4,0.5,2)"}) {
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto g = generate(parse_family(f), seed, seed % 2 == 0);
        CHECK(validate_junction_graph(g.problem, g.graph).ok());
        CHECK_FALSE(is_junction_tree(g.graph));
      }
    }
  }

  TEST_CASE("grid(2,2) has four variables, four kernels and one cycle") {
    const auto g = generate(parse_family("grid(2,2)"), 9);
    CHECK(g.problem.num_vars() == 4);
    CHECK(g.problem.num_kernels() == 4);
    CHECK(g.graph.num_edges() == 4);
  }

  TEST_CASE("family parsing") {
    CHECK(parse_family(" grid( 3 , 3 ) ").text == "grid(3,3)");
    CHECK_THROWS_AS(parse_family("torus(3)"), ParseError);
    CHECK_THROWS_AS(parse_family("grid(3)"), ParseError);
    CHECK_THROWS_AS(parse_family("cycle(2)"), ParseError);
    CHECK_THROWS_AS(parse_family("grid(2,2,4,1)"), ParseError);
  }

  TEST_CASE("generation is a function of the seed") {
    const auto f = parse_family("grid(3,3)");
    const auto a = generate(f, 42);
    const auto b = generate(f, 42);
    const auto c = generate(f, 43);
    CHECK(a.problem.kernel(5).values == b.problem.kernel(5).values);
    CHECK(a.problem.kernel(5).values != c.problem.kernel(5).values);
    for (const auto& k : a.problem.kernels()) {
      for (double x : k.values) {
        CHECK(x >= 0.25);
        CHECK(x <= 4.0);
      }
    }
  }
}
