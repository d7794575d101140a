#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/space.hpp"

using namespace gibbsdecomp;

TEST_CASE("enumeration order is mixed radix with the last coordinate fastest") {
  SpaceSpec one;
  one.alphabets = {{"a"}};
  auto s1 = ProductSpace::make(one);
  const auto c1 = enumerate_configs(*s1);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].symbols == std::vector<std::size_t>{0});

  auto s2 = ProductSpace::uniform({2, 2});
  const auto c2 = enumerate_configs(*s2);
  REQUIRE(c2.size() == 4);
  CHECK(c2[1].symbols == std::vector<std::size_t>{0, 1});
  CHECK(c2[2].symbols == std::vector<std::size_t>{1, 0});
  for (std::size_t k = 0; k < c2.size(); ++k) CHECK(c2[k].index == k);

  auto s3 = ProductSpace::uniform({2, 2, 2});
  const std::vector<std::size_t> x{1, 0, 1};
  CHECK(s3->encode(x) == 5);
  CHECK(s3->decode(5) == x);
}

TEST_CASE("state budget is enforced with the state count in the message") {
  try {
    ProductSpace::uniform(std::vector<std::size_t>(21, 2));
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(std::string(e.what()).find("2097152") != std::string::npos);
  }
  CHECK_NOTHROW(ProductSpace::uniform(std::vector<std::size_t>(21, 2), std::size_t{1} << 21));
}

TEST_CASE("space validation names the coordinate and field") {
  SpaceSpec spec;
  spec.alphabets = {{"0", "1"}, {"0", "1"}};
  spec.metrics = {{{0, 1}, {1, 0}}, {{0, 0.5}, {0.4, 0}}};
  try {
    ProductSpace::make(spec);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("coordinate 1") != std::string::npos);
    CHECK(msg.find("metrics") != std::string::npos);
  }
  spec.metrics.clear();
  spec.reference_measures = {{0.5, 0.5}, {1.0, 0.0}};
  CHECK_THROWS_AS(ProductSpace::make(spec), ConfigError);
  spec.reference_measures = {{0.5, 0.5}, {0.7, 0.2}};
  CHECK_THROWS_AS(ProductSpace::make(spec), ConfigError);
  spec.reference_measures.clear();
  spec.reference_points = {0, 2};
  CHECK_THROWS_AS(ProductSpace::make(spec), ConfigError);
}

TEST_CASE("hamming distance examples") {
  auto s2 = ProductSpace::uniform({2, 2});
  Config a{{0, 0}, 0}, b{{0, 1}, 1};
  CHECK(hamming_distance(*s2, a, a) == 0.0);
  CHECK(hamming_distance(*s2, a, b) == 0.5);
  auto s4 = ProductSpace::uniform({2, 2, 2, 2});
  CHECK(hamming_distance(*s4, Config{{0, 0, 0, 0}, 0}, Config{{1, 1, 1, 1}, 15}) == 1.0);
  CHECK(s4->distance(0, 15) == 1.0);
}

TEST_CASE("marginal examples") {
  auto s = ProductSpace::uniform({2, 2});
  Distribution mu(s, {0.5, 0.0, 0.0, 0.5});
  const std::vector<std::size_t> second{1};
  const Distribution m = marginal(mu, second);
  CHECK(m.size() == 2);
  CHECK(m[0] == doctest::Approx(0.5));
  CHECK(m[1] == doctest::Approx(0.5));

  auto s3 = ProductSpace::uniform({2, 2, 2});
  const std::vector<std::size_t> c13{0, 2};
  const Distribution u = marginal(Distribution::uniform(s3), c13);
  for (std::size_t x = 0; x < 4; ++x) CHECK(u[x] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(marginal(mu, std::vector<std::size_t>{}), ConfigError);

  // Product distribution: the marginal is the factor product.
  Distribution prod(s3, {0.3 * 0.6 * 0.1, 0.3 * 0.6 * 0.9, 0.3 * 0.4 * 0.1, 0.3 * 0.4 * 0.9,
                         0.7 * 0.6 * 0.1, 0.7 * 0.6 * 0.9, 0.7 * 0.4 * 0.1, 0.7 * 0.4 * 0.9});
  const Distribution pm = marginal(prod, c13);
  CHECK(pm[0] == doctest::Approx(0.03));
  CHECK(pm[3] == doctest::Approx(0.63));
}

TEST_CASE("condition examples") {
  auto s = ProductSpace::uniform({2, 2});
  const Distribution u = Distribution::uniform(s);
  const std::vector<std::size_t> all{0, 1, 2, 3}, low{0, 1}, high{2, 3};
  const Distribution same = condition(u, all);
  for (std::size_t x = 0; x < 4; ++x) CHECK(same[x] == u[x]);
  const Distribution half = condition(u, low);
  CHECK(half[0] == 0.5);
  CHECK(half[2] == 0.0);
  Distribution mu(s, {0.1, 0.2, 0.3, 0.4});
  const Distribution c = condition(mu, high);
  CHECK(c[2] == doctest::Approx(3.0 / 7.0));
  CHECK(c[3] == doctest::Approx(4.0 / 7.0));
  Distribution zero(s, {0.5, 0.5, 0.0, 0.0});
  CHECK_THROWS_AS(condition(zero, high), ZeroMassError);
}

TEST_CASE("property: encode and decode are inverse on random shapes") {
  gen::Gen g(11);
  for (int t = 0; t < 100; ++t) {
    auto s = g.space(5, 4);
    for (std::size_t x = 0; x < s->state_count(); ++x) {
      const auto sym = s->decode(x);
      REQUIRE(s->encode(sym) == x);
      for (std::size_t i = 0; i < s->dims(); ++i) REQUIRE(sym[i] == s->symbol(x, i));
    }
  }
}

TEST_CASE("property: conditioning and marginals preserve mass") {
  gen::Gen g(12);
  for (int t = 0; t < 100; ++t) {
    auto s = g.space(4, 3);
    const Distribution mu = g.distribution(s, 0.2);
    const PartitionOfSpace P = g.partition(s->state_count(), 4);
    // Law of total probability on a random event.
    std::vector<std::size_t> event;
    for (std::size_t x = 0; x < s->state_count(); ++x)
      if (g.coin()) event.push_back(x);
    double total = 0.0;
    for (std::size_t p = 0; p < P.size(); ++p) {
      const double mass = mu.mass(P.part(p));
      if (mass == 0.0) continue;
      const Distribution c = condition(mu, P.part(p));
      total += mass * c.mass(event);
      std::vector<std::size_t> coords{g.index(s->dims())};
      const Distribution m = marginal(c, coords);
      double sum = 0.0;
      for (std::size_t x = 0; x < m.size(); ++x) sum += m[x];
      REQUIRE(std::abs(sum - 1.0) < 1e-12);
    }
    REQUIRE(std::abs(total - mu.mass(event)) < 1e-12);
  }
}

TEST_CASE("property: d_n is a metric bounded by one") {
  gen::Gen g(13);
  for (int t = 0; t < 50; ++t) {
    auto s = g.space(5, 4);
    const std::size_t N = s->state_count();
    for (int k = 0; k < 200; ++k) {
      const std::size_t x = g.index(N), y = g.index(N), z = g.index(N);
      const double dxy = s->distance(x, y);
      REQUIRE(dxy == s->distance(y, x));
      REQUIRE(dxy <= 1.0);
      REQUIRE(s->distance(x, x) == 0.0);
      REQUIRE(dxy <= s->distance(x, z) + s->distance(z, y) + 1e-15);
    }
  }
}
