#include "jtbound/table.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace jtb {

namespace {

constexpr std::size_t kCompensationThreshold = std::size_t{1} << 12;

// For each position of `space`, the stride that position carries in `t`
// (zero when the variable is absent from t's scope).
std::vector<std::size_t> aligned_strides(const Table& t, std::span<const int> space) {
  const auto own = t.strides();
  std::vector<std::size_t> out(space.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < space.size() && k < t.scope.size(); ++i) {
    if (space[i] == t.scope[k]) {
      out[i] = own[k];
      ++k;
    }
  }
  return out;
}

// Walks every assignment of `cards` and keeps the linear index into each of
// the aligned tables in sync.
template <typename Fn>
void sweep(std::span<const int> cards, std::span<const std::vector<std::size_t>> strides, Fn&& fn) {
  const std::size_t n = cards.size();
  std::vector<int> digits(n, 0);
  std::vector<std::size_t> idx(strides.size(), 0);
  const std::uint64_t total = domain_size(cards);
  for (std::uint64_t step = 0; step < total; ++step) {
    fn(step, std::span<const std::size_t>(idx));
    for (std::size_t pos = n; pos-- > 0;) {
      if (++digits[pos] < cards[pos]) {
        for (std::size_t t = 0; t < strides.size(); ++t) idx[t] += strides[t][pos];
        break;
      }
      for (std::size_t t = 0; t < strides.size(); ++t) {
        idx[t] -= static_cast<std::size_t>(cards[pos] - 1) * strides[t][pos];
      }
      digits[pos] = 0;
    }
  }
}

}  // namespace

Table::Table(std::vector<int> scope_in, std::vector<int> cards_in, std::vector<double> values_in)
    : scope(std::move(scope_in)), cards(std::move(cards_in)), values(std::move(values_in)) {
  // Empty cards are left for the owning problem to fill in.
  if (!cards.empty() && scope.size() != cards.size()) {
    throw std::invalid_argument("table scope/cardinality length mismatch");
  }
}

Table Table::constant(std::vector<int> scope, std::span<const int> all_cards, double fill) {
  std::vector<int> cards;
  cards.reserve(scope.size());
  for (int v : scope) cards.push_back(all_cards[static_cast<std::size_t>(v)]);
  const auto n = static_cast<std::size_t>(domain_size(cards));
  return Table(std::move(scope), std::move(cards), std::vector<double>(n, fill));
}

std::vector<std::size_t> Table::strides() const {
  std::vector<std::size_t> s(scope.size(), 1);
  for (std::size_t i = scope.size(); i-- > 1;) {
    s[i - 1] = s[i] * static_cast<std::size_t>(cards[i]);
  }
  return s;
}

std::size_t Table::index_of(std::span<const int> assignment) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    idx = idx * static_cast<std::size_t>(cards[i]) +
          static_cast<std::size_t>(assignment[static_cast<std::size_t>(scope[i])]);
  }
  return idx;
}

bool Table::contains(int var) const {
  return std::binary_search(scope.begin(), scope.end(), var);
}

std::uint64_t domain_size(std::span<const int> cards) {
  std::uint64_t n = 1;
  for (int c : cards) {
    const auto uc = static_cast<std::uint64_t>(c);
    if (uc != 0 && n > std::numeric_limits<std::uint64_t>::max() / uc) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    n *= uc;
  }
  return n;
}

Table multiply(const Table& a, const Table& b) {
  std::vector<int> scope;
  std::vector<int> cards;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.scope.size() || j < b.scope.size()) {
    if (j == b.scope.size() || (i < a.scope.size() && a.scope[i] < b.scope[j])) {
      scope.push_back(a.scope[i]);
      cards.push_back(a.cards[i++]);
    } else if (i == a.scope.size() || b.scope[j] < a.scope[i]) {
      scope.push_back(b.scope[j]);
      cards.push_back(b.cards[j++]);
    } else {
      if (a.cards[i] != b.cards[j]) throw std::invalid_argument("cardinality mismatch in multiply");
      scope.push_back(a.scope[i]);
      cards.push_back(a.cards[i]);
      ++i;
      ++j;
    }
  }
  Table out(scope, cards, std::vector<double>(static_cast<std::size_t>(domain_size(cards)), 0.0));
  const std::vector<std::vector<std::size_t>> strides{aligned_strides(a, scope),
                                                      aligned_strides(b, scope)};
  sweep(cards, strides, [&](std::uint64_t step, std::span<const std::size_t> idx) {
    out.values[step] = a.values[idx[0]] * b.values[idx[1]];
  });
  return out;
}

Table marginalize(const Table& t, std::span<const int> keep) {
  if (!is_subset(keep, t.scope)) throw std::invalid_argument("marginalize: keep not a subset of scope");
  std::vector<int> cards;
  for (int v : keep) {
    const auto pos = std::lower_bound(t.scope.begin(), t.scope.end(), v) - t.scope.begin();
    cards.push_back(t.cards[static_cast<std::size_t>(pos)]);
  }
  Table out(std::vector<int>(keep.begin(), keep.end()), cards,
            std::vector<double>(static_cast<std::size_t>(domain_size(cards)), 0.0));
  if (keep.size() == t.scope.size()) {
    out.values = t.values;
    return out;
  }
  const std::vector<std::vector<std::size_t>> strides{aligned_strides(out, t.scope)};
  if (t.size() > kCompensationThreshold) {
    std::vector<CompensatedSum> acc(out.size());
    sweep(t.cards, strides, [&](std::uint64_t step, std::span<const std::size_t> idx) {
      acc[idx[0]].add(t.values[step]);
    });
    for (std::size_t k = 0; k < acc.size(); ++k) out.values[k] = acc[k].value();
  } else {
    sweep(t.cards, strides, [&](std::uint64_t step, std::span<const std::size_t> idx) {
      out.values[idx[0]] += t.values[step];
    });
  }
  return out;
}

double normalize(Table& t) {
  const double s = stable_sum(t.values);
  if (s > 0.0) {
    for (double& v : t.values) v /= s;
  }
  return s;
}

std::vector<int> set_union(std::span<const int> a, std::span<const int> b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> set_intersection(std::span<const int> a, std::span<const int> b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> set_difference(std::span<const int> a, std::span<const int> b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(std::span<const int> sub, std::span<const int> super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double stable_sum(std::span<const double> xs) {
  if (xs.size() <= kCompensationThreshold) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

double log_sum_exp(std::span<const double> log_terms) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double peak = kNegInf;
  for (double x : log_terms) peak = std::max(peak, x);
  if (peak == kNegInf) return kNegInf;
  std::vector<double> shifted;
  shifted.reserve(log_terms.size());
  for (double x : log_terms) shifted.push_back(x == kNegInf ? 0.0 : std::exp(x - peak));
  return peak + std::log(stable_sum(shifted));
}

bool next_assignment(std::span<int> digits, std::span<const int> cards) {
  for (std::size_t pos = digits.size(); pos-- > 0;) {
    if (++digits[pos] < cards[pos]) return true;
    digits[pos] = 0;
  }
  return false;
}

}  // namespace jtb
