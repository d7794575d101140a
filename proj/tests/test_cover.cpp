#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "generators.hpp"
#include "gibbsdecomp/cover.hpp"
#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/models.hpp"
#include "oracles.hpp"

using namespace gibbsdecomp;

namespace {

double brute_diameter(const Potential& f, std::span<const std::size_t> part) {
  double d = 0.0;
  for (std::size_t a = 0; a < part.size(); ++a)
    for (std::size_t b = a + 1; b < part.size(); ++b)
      d = std::max(d, oracle::gradient_distance(f, part[a], part[b]));
  return d;
}

}  // namespace

TEST_CASE("separable potentials need one center") {
  gen::Gen r(61);
  for (int t = 0; t < 10; ++t) {
    auto s = r.space(4, 3);
    const GradientCover c = greedy_cover(to_potential(r.separable(s)), 1e-6);
    CHECK(c.part_count() == 1);
    CHECK(covering_exponent(c) == 0.0);
  }
  CHECK_THROWS_AS(greedy_cover(make_curie_weiss(3, 1, 0), 0.0), ConfigError);
}

TEST_CASE("Curie-Weiss gradients are all distinct") {
  // grad f(x,.) has +1 entries (2 beta / n) sum_{j != i} x_j + 2h; the vector
  // of leave-one-out sums determines x, so there are 2^n distinct rows.
  for (std::size_t n : {2, 4, 6, 8}) {
    const Potential f = make_curie_weiss(n, 1.0, 0.2);
    const GradientMap g(f);
    std::set<std::vector<double>> rows;
    for (std::size_t x = 0; x < g.rows(); ++x) rows.insert(g.row_values(x));
    CHECK(rows.size() == (std::size_t{1} << n));
    // Closest distinct pair: swapping a +1 and a -1 moves two entries by
    // 4 beta / n in opposite directions.
    double closest = 1e300;
    for (std::size_t x = 0; x < g.rows(); ++x)
      for (std::size_t y = x + 1; y < g.rows(); ++y) closest = std::min(closest, g.distance(x, y));
    CHECK(closest == doctest::Approx(4.0 / double(n)));
    const GradientCover fine = greedy_cover(g, 0.99 * closest / double(n));
    CHECK(fine.part_count() == (std::size_t{1} << n));
  }
  const GradientCover c8 = greedy_cover(make_curie_weiss(8, 1.0, 0.0), 0.05);
  CHECK(covering_exponent(c8) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("a large delta gives one part") {
  gen::Gen r(62);
  for (int t = 0; t < 10; ++t) {
    auto s = r.space(4, 3);
    const Potential f = r.potential(s);
    const GradientMap g(f);
    const double diam = gradient_diameter(g).diameter;
    const GradientCover c = greedy_cover(g, diam > 0.0 ? 2.0 * diam / double(s->dims()) : 1.0);
    CHECK(c.part_count() == 1);
  }
}

TEST_CASE("partition hypothesis examples") {
  gen::Gen r(63);
  auto s = r.space(4, 3, 81);
  const Potential f = r.potential(s);
  const std::size_t N = s->state_count();
  CHECK(verify_partition_hypothesis(f, PartitionOfSpace::singletons(N)).diameter == 0.0);
  std::vector<std::size_t> all(N);
  for (std::size_t x = 0; x < N; ++x) all[x] = x;
  const HypothesisCheck one = verify_partition_hypothesis(f, PartitionOfSpace::trivial(N));
  CHECK(one.diameter == doctest::Approx(brute_diameter(f, all)).epsilon(1e-12));
  CHECK(one.exact);
  CHECK(one.delta_eff == doctest::Approx(one.diameter / double(s->dims())));
  for (double delta : {0.05, 0.2, 0.5}) {
    const GradientCover c = greedy_cover(f, delta);
    const PartitionOfSpace P = c.partition();
    const HypothesisCheck h = verify_partition_hypothesis(f, P);
    CHECK(h.diameter <= delta * double(s->dims()) + 1e-12);
    CHECK(c.radius_check <= delta * double(s->dims()) / 2.0 + 1e-12);
    for (std::size_t p = 0; p < P.size(); ++p)
      CHECK(h.part_diameters[p] == doctest::Approx(brute_diameter(f, P.part(p))).epsilon(1e-12));
  }
}

TEST_CASE("over the pair budget the diameter is a flagged upper bound") {
  gen::Gen r(64);
  auto s = r.space(4, 3, 81);
  const Potential f = r.potential(s);
  const auto P = PartitionOfSpace::trivial(s->state_count());
  const HypothesisCheck exact = verify_partition_hypothesis(f, P);
  const HypothesisCheck bound = verify_partition_hypothesis(f, P, 10);
  CHECK_FALSE(bound.exact);
  CHECK(bound.diameter >= exact.diameter - 1e-12);
  CHECK(bound.diameter <= 2.0 * exact.diameter + 1e-12);
}

TEST_CASE("property: covers are deterministic, nested and sound") {
  gen::Gen r(65);
  for (int t = 0; t < 30; ++t) {
    auto s = r.space(5, 3, 243);
    const Potential f = r.potential(s);
    const GradientMap g(f);
    std::size_t prev = SIZE_MAX;
    for (double delta : {0.02, 0.05, 0.1, 0.2, 0.5, 1.0}) {
      const GradientCover a = greedy_cover(g, delta), b = greedy_cover(g, delta);
      REQUIRE(a.centers == b.centers);
      REQUIRE(a.assignment == b.assignment);
      REQUIRE(a.centers[0] == 0);
      REQUIRE(a.part_count() <= prev);
      prev = a.part_count();
      // Every configuration sits with its nearest center, ties to the lowest.
      for (std::size_t x = 0; x < s->state_count(); ++x) {
        const double own = g.distance(x, a.centers[a.assignment[x]]);
        for (std::size_t c = 0; c < a.centers.size(); ++c) {
          const double d = g.distance(x, a.centers[c]);
          REQUIRE(own <= d);
          if (d == own) REQUIRE(a.assignment[x] <= c);
        }
      }
      const HypothesisCheck h = verify_partition_hypothesis(g, a.partition());
      REQUIRE(h.delta_eff <= delta + 1e-12);
    }
  }
}
