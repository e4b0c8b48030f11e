#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "jtbound/errors.hpp"
#include "jtbound/verify.hpp"

using namespace jtb;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("verify") {
  TEST_CASE("extended-real comparisons") {
    CHECK(make_check("x", -kInf, -kInf, 1e-8, "").satisfied);
    CHECK(make_check("x", kInf, kInf, 1e-8, "").satisfied);
    CHECK_FALSE(make_check("x", kInf, 3.0, 1e-8, "").satisfied);
    CHECK_FALSE(make_check("x", 0.0, -kInf, 1e-8, "").satisfied);
    CHECK(make_check("x", 1.0 + 5e-9, 1.0, 1e-8, "").satisfied);
    CHECK_FALSE(make_check("x", 1.0 + 2e-8, 1.0, 1e-8, "").satisfied);
    const auto c = make_check("x", 1.0, kInf, 1e-8, "");
    CHECK(c.slack == kInf);
  }

  TEST_CASE("theorem2 on identical and distinct subtrees") {
    const auto m = fx::triangle();
    const auto trees = enumerate_subtrees(m.graph, EnumerationMode::spanning_only);
    const auto same = check_theorem2(m.problem, trees[0], trees[0]);
    CHECK(same.satisfied);
    CHECK(same.slack >= 0.0);
    for (std::size_t i = 0; i < trees.size(); ++i) {
      for (std::size_t j = 0; j < trees.size(); ++j) {
        const auto c = check_theorem2(m.problem, trees[i], trees[j]);
        CHECK(c.satisfied);
        CHECK(std::isfinite(c.slack));
        CHECK(c.context.find("t1=") != std::string::npos);
      }
    }
  }

  TEST_CASE("corollary1 on a partition") {
    const auto m = fx::triangle();
    const auto chain = fx::chain_without_a02(m);
    const auto single = *find_subtree_on(m.graph, std::vector<int>{1});
    const auto checks = check_corollary1(m.problem, chain, single);
    REQUIRE(checks.size() == 4);
    CHECK(checks[0].name == "corollary1_bound");
    CHECK(checks[1].name == "corollary1_path");
    CHECK(checks[2].name == "triangle_path");
    for (const auto& c : checks) CHECK(c.satisfied);
    CHECK(checks[0].slack == doctest::Approx(checks[1].slack).epsilon(1e-9));

    const auto flat = fx::triangle({1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1});
    for (const auto& c : check_corollary1(flat.problem, fx::chain_without_a02(flat),
                                          *find_subtree_on(flat.graph, std::vector<int>{1}))) {
      CHECK(c.satisfied);
      CHECK(std::abs(c.slack) < 1e-12);
    }

    CHECK_THROWS_AS(check_corollary1(m.problem, chain, chain), ContractError);
    CHECK_THROWS_AS(check_corollary3(m.problem, chain, chain), ContractError);
  }

  TEST_CASE("corollary2 and theorem3 over a catalog") {
    const auto m = fx::triangle();
    const auto cat = build_catalog(m.problem, m.graph);
    const auto c2 = check_corollary2(m.problem, cat);
    REQUIRE(c2.size() == 3);
    for (const auto& c : c2) {
      CHECK(c.satisfied);
      CHECK(c.slack == doctest::Approx(c2[0].slack).epsilon(1e-9));
    }
    const auto t3 = check_theorem3(m.problem, cat);
    CHECK(t3.satisfied);
    CHECK(t3.lhs == 0.0);

    const auto sharp = fx::triangle({10, 1, 1, 10});
    const auto sc = build_catalog(sharp.problem, sharp.graph);
    const auto s3 = check_theorem3(sharp.problem, sc);
    CHECK(s3.satisfied);
    CHECK(std::isfinite(s3.slack));
  }

  TEST_CASE("corollary3 assigns the roles inside the pair") {
    const auto m = fx::triangle({10, 1, 1, 10});
    const auto chain = fx::chain_without_a02(m);
    const auto single = *find_subtree_on(m.graph, std::vector<int>{1});
    CHECK(check_corollary3(m.problem, chain, single).satisfied);
    CHECK(check_corollary3(m.problem, single, chain).satisfied);
  }

  TEST_CASE("suite with no families is empty and clean") {
    SuiteConfig c;
    const auto r = run_suite(c);
    CHECK(r.instances.empty());
    CHECK(r.checks.empty());
    CHECK(r.ok());
  }

  TEST_CASE("symmetric triangle family") {
    SuiteConfig c;
    c.families = {"cycle(3,2,2)"};
    c.instances = 2;
    const auto r = run_suite(c);
    CHECK(r.ok());
    CHECK(r.errors() == 0);
    const auto s = r.summary();
    for (const char* name : {"theorem2", "corollary1_bound", "corollary1_path", "triangle_path", "corollary2",
                             "theorem3", "corollary3"}) {
      CHECK_MESSAGE(s.count(name) == 1, name);
    }
  }

  TEST_CASE("an injected fault is detected") {
    SuiteConfig c = default_suite();
    c.instances = 4;
    for (std::size_t inst = 0; inst < 4; ++inst) {
      c.fault = FaultInjection{inst, 0, 1.0};
      CHECK(run_suite(c).violations() > 0);
    }
  }

  TEST_CASE("capacity problems are recorded per instance") {
    SuiteConfig c;
    c.families = {"grid(3,3)", "cycle(3)"};
    c.instances = 2;
    c.limits.max_states = 64;
    const auto r = run_suite(c);
    CHECK(!r.instances[0].error.empty());
    CHECK(r.instances[1].error.empty());
  }

  TEST_CASE("structured output is line-delimited with a fixed field order") {
    SuiteConfig c = default_suite();
    c.instances = 2;
    std::ostringstream a, b;
    write_structured(run_suite(c), a);
    write_structured(run_suite(c), b);
    CHECK(a.str() == b.str());
    std::istringstream lines(a.str());
    std::string first;
    std::getline(lines, first);
    CHECK(first.rfind(R"x({"record":"instance","instance":0,"seed":1,"family":"cycle(3)")x", 0) == 0);
    std::ostringstream h;
    write_human(run_suite(c), h);
    CHECK(h.str().find("theorem2") != std::string::npos);
  }
}
