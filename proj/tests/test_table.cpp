#include <doctest.h>

#include <cmath>
#include <limits>

#include "jtbound/table.hpp"

using namespace jtb;

TEST_SUITE("table") {
  TEST_CASE("row-major layout with the last variable fastest") {
    Table t({0, 2}, {2, 3}, {0, 1, 2, 3, 4, 5});
    CHECK(t.strides() == std::vector<std::size_t>{3, 1});
    const std::vector<int> x{1, 7, 2};
    CHECK(t.at(x) == 5);
  }

  TEST_CASE("multiply aligns scopes") {
    Table a({0}, {2}, {1, 2});
    Table b({1}, {2}, {3, 5});
    const auto c = multiply(a, b);
    CHECK(c.scope == std::vector<int>{0, 1});
    CHECK(c.values == std::vector<double>{3, 5, 6, 10});
    const auto d = multiply(c, a);
    CHECK(d.values == std::vector<double>{3, 5, 12, 20});
  }

  TEST_CASE("marginalize and normalize") {
    Table t({0, 1}, {2, 2}, {1, 2, 3, 4});
    CHECK(marginalize(t, std::vector<int>{0}).values == std::vector<double>{3, 7});
    CHECK(marginalize(t, std::vector<int>{1}).values == std::vector<double>{4, 6});
    CHECK(marginalize(t, std::vector<int>{}).values == std::vector<double>{10});
    CHECK(normalize(t) == 10);
    CHECK(t.values[3] == doctest::Approx(0.4));
  }

  TEST_CASE("sorted set helpers") {
    const std::vector<int> a{0, 2, 4}, b{2, 3};
    CHECK(set_union(a, b) == std::vector<int>{0, 2, 3, 4});
    CHECK(set_intersection(a, b) == std::vector<int>{2});
    CHECK(set_difference(a, b) == std::vector<int>{0, 4});
    CHECK(is_subset(std::vector<int>{2}, a));
    CHECK_FALSE(is_subset(b, a));
  }

  TEST_CASE("log_sum_exp ignores -inf terms and handles large magnitudes") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(log_sum_exp(std::vector<double>{-inf, std::log(2.0), std::log(3.0)}) == doctest::Approx(std::log(5.0)));
    CHECK(log_sum_exp(std::vector<double>{-inf, -inf}) == -inf);
    CHECK(log_sum_exp(std::vector<double>{1000.0, 1000.0}) == doctest::Approx(1000.0 + std::log(2.0)));
  }

  TEST_CASE("compensated sums recover small addends") {
    std::vector<double> xs(10000, 1e-16);
    xs.insert(xs.begin(), 1.0);
    CHECK(stable_sum(xs) == doctest::Approx(1.0 + 1e-12).epsilon(1e-15));
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);
  }

  TEST_CASE("domain size saturates instead of overflowing") {
    std::vector<int> cards(70, 2);
    CHECK(domain_size(cards) == std::numeric_limits<std::uint64_t>::max());
    CHECK(domain_size(std::vector<int>{2, 3}) == 6);
  }

  TEST_CASE("next_assignment walks every state once") {
    std::vector<int> digits{0, 0};
    const std::vector<int> cards{2, 3};
    int n = 1;
    while (next_assignment(digits, cards)) ++n;
    CHECK(n == 6);
    CHECK(digits == std::vector<int>{0, 0});
  }
}
