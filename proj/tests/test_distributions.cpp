#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgvqa/distributions.hpp"
#include "sgvqa/errors.hpp"

using namespace sgvqa;

namespace {

const Vocabulary& vocab() {
  static const Vocabulary v = Vocabulary::builtin();
  return v;
}

void check_is_distribution(const std::vector<double>& w) {
  double sum = 0.0;
  for (double x : w) {
    CHECK(x >= 0.0);
    sum += x;
  }
  CHECK(std::abs(sum - 1.0) < 1e-9);
}

}  // namespace

TEST_CASE("power law with a=1 is uniform") {
  const auto d = power_law_distribution(1.0, 8);
  REQUIRE(d.weights.size() == 8);
  for (double w : d.weights) CHECK(w == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("power law a=2 K=4 matches the hand-normalized geometric series") {
  // Oracle: weights 1, 1/2, 1/4, 1/8 over total 15/8.
  const auto d = power_law_distribution(2.0, 4);
  CHECK(d.weights[0] == doctest::Approx(8.0 / 15.0).epsilon(1e-12));
  CHECK(d.weights[1] == doctest::Approx(4.0 / 15.0).epsilon(1e-12));
  CHECK(d.weights[2] == doctest::Approx(2.0 / 15.0).epsilon(1e-12));
  CHECK(d.weights[3] == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("power law with one concept is the point distribution") {
  const auto d = power_law_distribution(1.3, 1);
  REQUIRE(d.weights.size() == 1);
  CHECK(d.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("power law rejects bad parameters") {
  CHECK_THROWS_AS(power_law_distribution(0.0, 4), Error);
  CHECK_THROWS_AS(power_law_distribution(-1.0, 4), Error);
  CHECK_THROWS_AS(power_law_distribution(2.0, 0), Error);
}

TEST_CASE("power law is strictly decreasing for a>1 and flat for a=1") {
  for (double a : {1.3, 2.0, 5.0}) {
    const auto d = power_law_distribution(a, 21);
    for (std::size_t i = 1; i < d.weights.size(); ++i) CHECK(d.weights[i] < d.weights[i - 1]);
  }
  const auto flat = power_law_distribution(1.0, 21);
  for (std::size_t i = 1; i < flat.weights.size(); ++i)
    CHECK(flat.weights[i] == doctest::Approx(flat.weights[0]));
}

TEST_CASE("slt colors follow the a=1.3 law") {
  const auto d = variant_distribution(DistVariant::Slt, Axis::Color, vocab());
  double norm = 0.0;
  for (int i = 0; i < 8; ++i) norm += std::pow(1.3, -i);
  for (int i = 0; i < 8; ++i)
    CHECK(d.weights[i] == doctest::Approx(std::pow(1.3, -i) / norm).epsilon(1e-12));
}

TEST_CASE("oppo reverses the long distribution") {
  const auto lng = variant_distribution(DistVariant::Long, Axis::Color, vocab());
  const auto opp = variant_distribution(DistVariant::Oppo, Axis::Color, vocab());
  for (int i = 0; i < 8; ++i) CHECK(opp.weights[i] == doctest::Approx(lng.weights[7 - i]));
}

TEST_CASE("head keeps the first half of the long weights, renormalized") {
  // Oracle: long-8 head support {0..3}, weights prop to [1, .5, .25, .125].
  const auto d = variant_distribution(DistVariant::Head, Axis::Color, vocab());
  const double total = 1.0 + 0.5 + 0.25 + 0.125;
  CHECK(d.weights[0] == doctest::Approx(1.0 / total));
  CHECK(d.weights[1] == doctest::Approx(0.5 / total));
  CHECK(d.weights[2] == doctest::Approx(0.25 / total));
  CHECK(d.weights[3] == doctest::Approx(0.125 / total));
  for (int i = 4; i < 8; ++i) CHECK(d.weights[i] == 0.0);
}

TEST_CASE("head and tail supports are disjoint and cover all indices") {
  for (Axis axis : {Axis::Shape, Axis::Color, Axis::Material}) {
    const auto head = variant_distribution(DistVariant::Head, axis, vocab());
    const auto tail = variant_distribution(DistVariant::Tail, axis, vocab());
    REQUIRE(head.weights.size() == tail.weights.size());
    for (std::size_t i = 0; i < head.weights.size(); ++i) {
      const bool in_head = head.weights[i] > 0.0;
      const bool in_tail = tail.weights[i] > 0.0;
      CHECK(in_head != in_tail);
    }
  }
}

TEST_CASE("every variant yields a valid distribution on every axis") {
  for (Axis axis : {Axis::Shape, Axis::Color, Axis::Material}) {
    for (DistVariant v : {DistVariant::Bal, DistVariant::Slt, DistVariant::Long,
                          DistVariant::Head, DistVariant::Tail, DistVariant::Oppo}) {
      const auto d = variant_distribution(v, axis, vocab());
      check_is_distribution(d.weights);
    }
  }
}

TEST_CASE("co-0 is the flat matrix") {
  const auto m = co_matrix(CoVariant::Co0, vocab(), 0.8);
  for (const auto& row : m.rows)
    for (double p : row) CHECK(p == doctest::Approx(0.125));
}

TEST_CASE("co-2 with peak 1 gives identical one-hot rows within a category") {
  const auto m = co_matrix(CoVariant::Co2, vocab(), 1.0);
  const auto motorcycle_rows = vocab().shapes_in_category("motorcycle");
  const auto car_rows = vocab().shapes_in_category("car");
  auto row_of = [&](const std::string& shape) {
    return m.rows[vocab().index_of(Axis::Shape, shape)];
  };
  const auto first = row_of(motorcycle_rows[0]);
  for (const auto& s : motorcycle_rows) CHECK(row_of(s) == first);
  CHECK(row_of(car_rows[0]) != first);
  int ones = 0;
  for (double p : first) ones += (p == 1.0);
  CHECK(ones == 1);
}

TEST_CASE("co-2 rows within a category are exactly equal for soft peaks too") {
  const auto m = co_matrix(CoVariant::Co2, vocab(), 0.8);
  for (const auto& cat : vocab().categories()) {
    const auto shapes = vocab().shapes_in_category(cat);
    const auto& first = m.rows[vocab().index_of(Axis::Shape, shapes[0])];
    for (const auto& s : shapes) CHECK(m.rows[vocab().index_of(Axis::Shape, s)] == first);
  }
}

TEST_CASE("co-1 argmax colors are pairwise distinct within a category") {
  const auto m = co_matrix(CoVariant::Co1, vocab(), 0.6);
  for (const auto& cat : vocab().categories()) {
    std::vector<int> argmaxes;
    for (const auto& s : vocab().shapes_in_category(cat)) {
      const auto& row = m.rows[vocab().index_of(Axis::Shape, s)];
      argmaxes.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
    }
    for (std::size_t i = 0; i < argmaxes.size(); ++i)
      for (std::size_t j = i + 1; j < argmaxes.size(); ++j) CHECK(argmaxes[i] != argmaxes[j]);
  }
}

TEST_CASE("co-1 shares assigned colors across categories by position") {
  const auto m = co_matrix(CoVariant::Co1, vocab(), 0.6);
  // First shapes of each category share an assigned color.
  std::vector<int> firsts;
  for (const auto& cat : vocab().categories()) {
    const auto& row = m.rows[vocab().index_of(Axis::Shape, vocab().shapes_in_category(cat)[0])];
    firsts.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
  }
  for (int f : firsts) CHECK(f == firsts[0]);
}

TEST_CASE("co matrix rejects out-of-range peaks") {
  CHECK_THROWS_AS(co_matrix(CoVariant::Co1, vocab(), 0.125), Error);
  CHECK_THROWS_AS(co_matrix(CoVariant::Co2, vocab(), 1.0001), Error);
  CHECK_THROWS_AS(co_matrix(CoVariant::Co1, vocab(), 0.0), Error);
}

TEST_CASE("sampling a degenerate distribution always returns its support") {
  ConceptDistribution d;
  d.axis = Axis::Color;
  d.weights = {1.0, 0.0, 0.0, 0.0};
  for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
    Rng rng(seed);
    for (int i = 0; i < 100; ++i) CHECK(sample_concept(d, rng) == 0);
  }
}

TEST_CASE("empirical frequencies track the target within statistical bounds") {
  // Oracle: direct frequency counting. At N = 100k, each cell is within
  // 0.005 of its target with overwhelming margin.
  const int n = 100000;
  SUBCASE("uniform over 8") {
    const auto d = power_law_distribution(1.0, 8);
    Rng rng(0);
    std::vector<int> counts(8, 0);
    for (int i = 0; i < n; ++i) counts[sample_concept(d, rng)]++;
    for (int i = 0; i < 8; ++i)
      CHECK(std::abs(counts[i] / double(n) - 0.125) <= 0.005);
  }
  SUBCASE("long over 21 shapes") {
    const auto d = variant_distribution(DistVariant::Long, Axis::Shape, vocab());
    Rng rng(0);
    std::vector<int> counts(21, 0);
    for (int i = 0; i < n; ++i) counts[sample_concept(d, rng)]++;
    double linf = 0.0;
    for (int i = 0; i < 21; ++i)
      linf = std::max(linf, std::abs(counts[i] / double(n) - d.weights[i]));
    CHECK(linf <= 0.005);
  }
}

TEST_CASE("equal seeds give equal draw sequences") {
  const auto d = variant_distribution(DistVariant::Long, Axis::Shape, vocab());
  Rng a(123), b(123), c(124);
  std::vector<int> sa, sb, sc;
  for (int i = 0; i < 500; ++i) {
    sa.push_back(sample_concept(d, a));
    sb.push_back(sample_concept(d, b));
    sc.push_back(sample_concept(d, c));
  }
  CHECK(sa == sb);
  CHECK(sa != sc);
}
