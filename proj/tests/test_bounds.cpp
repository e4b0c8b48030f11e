#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "jtbound/bounds.hpp"
#include "jtbound/errors.hpp"
#include "jtbound/subtree.hpp"

using namespace jtb;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("bounds") {
  TEST_CASE("a subtree covering a tree model is exact") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      const auto m = generate(parse_family(fx::random_tree_family(seed)), seed);
      const auto r = subtree_lower_bound(m.problem, fx::whole_tree(m.graph));
      CHECK(r.excluded_term == 0.0);
      CHECK(r.lower_bound == doctest::Approx(brute_force_log_partition(m.problem)).epsilon(1e-12));
      CHECK(std::abs(*r.divergence_to_p) < 1e-12);
    }
  }

  TEST_CASE("triangle chain") {
    const auto m = fx::triangle();
    const auto r = subtree_lower_bound(m.problem, fx::chain_without_a02(m));
    CHECK(r.log_z_t == doctest::Approx(std::log(18.0)).epsilon(1e-14));
    CHECK(r.excluded_term == doctest::Approx(5.0 / 9.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(r.lower_bound == doctest::Approx(3.275453524873912).epsilon(1e-14));
    CHECK(r.lower_bound <= std::log(28.0));
    CHECK(*r.divergence_to_p == doctest::Approx(std::log(28.0) - r.lower_bound).epsilon(1e-12));
  }

  TEST_CASE("an all-ones excluded kernel costs nothing") {
    const auto m = fx::triangle({2, 1, 1, 2}, {1, 1, 1, 1}, {3, 1, 1, 2});
    const auto r = subtree_lower_bound(m.problem, fx::chain_without_a02(m));
    CHECK(r.excluded_term == 0.0);
    CHECK(r.lower_bound == doctest::Approx(brute_force_log_partition(m.problem)).epsilon(1e-14));
  }

  TEST_CASE("untouched variables enter ln Z_T and H as uniform") {
    const auto m = jtb::pairwise_model(3, {{0, 1}, {1, 2}}, {{4, 1, 1, 4}, {1, 2, 3, 4}});
    const std::vector<int> v{0};
    const auto t = *extract_subtree(m.graph, v, std::vector<int>{}).subtree;
    const auto r = subtree_lower_bound(m.problem, t);
    CHECK(r.log_z_tree == doctest::Approx(std::log(10.0)));
    CHECK(r.log_z_t == doctest::Approx(std::log(20.0)));
    const auto q = subset_distribution(m.problem, t.kernels);
    CHECK(r.entropy == doctest::Approx(entropy(q)).epsilon(1e-12));
    CHECK(*r.divergence_to_p == doctest::Approx(brute_force_log_partition(m.problem) - r.lower_bound).epsilon(1e-12));
  }

  TEST_CASE("dense and elimination routes agree") {
    for (const char* f : {"cycle(3)", "cycle(6)", "grid(2,3)", "grid(3,3)"}) {
      for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto m = generate(parse_family(f), seed, seed % 3 == 0);
        const auto trees = enumerate_subtrees(m.graph, EnumerationMode::exhaustive);
        for (std::size_t i = 0; i < trees.size(); i += 7) {
          BoundOptions dense{.limits = {}, .route = ExcludedRoute::dense, .with_divergence = true};
          BoundOptions elim{.limits = {}, .route = ExcludedRoute::elimination, .with_divergence = false};
          const auto a = subtree_lower_bound(m.problem, trees[i], dense);
          const auto b = subtree_lower_bound(m.problem, trees[i], elim);
          CHECK(fx::close(a.lower_bound, b.lower_bound, 1e-12));
          CHECK(fx::close(a.excluded_term, b.excluded_term, 1e-12));
          CHECK(fx::close(a.lower_bound, brute_force_log_partition(m.problem) - *a.divergence_to_p, 1e-9));
        }
      }
    }
  }

  TEST_CASE("zero kernel hits give -inf and infinite divergence") {
    const auto m = fx::triangle({2, 1, 1, 2}, {0, 1, 1, 1}, {2, 1, 1, 2});
    const auto r = subtree_lower_bound(m.problem, fx::chain_without_a02(m));
    CHECK(r.excluded_term == -kInf);
    CHECK(r.lower_bound == -kInf);
    CHECK(*r.divergence_to_p == kInf);
  }

  TEST_CASE("a degenerate subtree is an error") {
    const auto m = fx::triangle({0, 0, 0, 0}, {2, 1, 1, 2}, {2, 1, 1, 2});
    CHECK_THROWS_AS(subtree_lower_bound(m.problem, fx::chain_without_a02(m)), DegenerateModelError);
  }

  TEST_CASE("elimination respects the cap") {
    const auto m = generate(parse_family("grid(3,3)"), 1);
    const auto t = enumerate_subtrees(m.graph, EnumerationMode::spanning_only).front();
    const std::vector<int> scope{0, 8};
    CHECK_THROWS_AS(eliminate_marginal(m.problem, t, scope, OracleLimits{2}), CapacityError);
    const auto full = eliminate_marginal(m.problem, t, scope);
    const auto q = subset_distribution(m.problem, t.kernels);
    const auto want = q.marginal(scope);
    for (std::size_t i = 0; i < 4; ++i) CHECK(full.values[i] == doctest::Approx(want.values[i]).epsilon(1e-12));
  }

  TEST_CASE("complement distribution") {
    const auto m = fx::triangle();
    const auto t = fx::chain_without_a02(m);
    CHECK(complement_kernels(m.problem, t) == std::vector<int>{1});
    const auto c = complement_distribution(m.problem, t);
    const auto p = c.complement_dist.probs();
    // q-bar is proportional to a02 over (x0, x2) and uniform in x1.
    CHECK(p[0] == doctest::Approx(2.0 / 12.0));
    CHECK(p[1] == doctest::Approx(1.0 / 12.0));
    CHECK(p[2] == doctest::Approx(2.0 / 12.0));

    const auto ones = fx::triangle({2, 1, 1, 2}, {1, 1, 1, 1}, {2, 1, 1, 2});
    const auto t1 = fx::chain_without_a02(ones);
    const auto c1 = complement_distribution(ones.problem, t1);
    const auto r1 = subtree_lower_bound(ones.problem, t1);
    CHECK(c1.self_gap == doctest::Approx(3 * std::log(2.0) - r1.entropy).epsilon(1e-12));

    const auto flat = fx::triangle({1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1});
    CHECK(complement_distribution(flat.problem, fx::chain_without_a02(flat)).self_gap == doctest::Approx(0.0));

    const auto tree = generate(parse_family("random_junction(3,2)"), 5);
    CHECK_THROWS_AS(complement_distribution(tree.problem, fx::whole_tree(tree.graph)), ContractError);
  }

  TEST_CASE("pairwise divergences") {
    const auto m = fx::triangle();
    const auto trees = enumerate_subtrees(m.graph, EnumerationMode::spanning_only);
    REQUIRE(trees.size() == 3);
    const auto same = pairwise_divergences(m.problem, trees[0], trees[0]);
    CHECK(same.d_q1_q2 == 0.0);
    CHECK(same.d_q2_q1 == 0.0);
    CHECK(same.h_q1 == same.h_q2);
    const auto d = pairwise_divergences(m.problem, trees[0], trees[1]);
    CHECK(d.d_q1_q2 == doctest::Approx(d.d_q2_q1).epsilon(1e-12));
    CHECK(d.d_q1_q2 > 0.0);

    const auto flat = jtb::pairwise_model(4, {{0, 1}, {2, 3}}, {{1, 1, 1, 1}, {1, 1, 1, 1}});
    const auto a = *extract_subtree(flat.graph, std::vector<int>{0}, std::vector<int>{}).subtree;
    const auto b = *extract_subtree(flat.graph, std::vector<int>{1}, std::vector<int>{}).subtree;
    const auto z = pairwise_divergences(flat.problem, a, b);
    for (double x : {z.d_q1_q2, z.d_q2_q1, z.d_q1_bar1, z.d_q1_bar2, z.d_q2_bar2}) CHECK(std::abs(x) < 1e-15);
  }
}
