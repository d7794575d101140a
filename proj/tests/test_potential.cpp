#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "gibbsdecomp/cover.hpp"
#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/models.hpp"
#include "gibbsdecomp/potential.hpp"
#include "oracles.hpp"

using namespace gibbsdecomp;

TEST_CASE("Curie-Weiss tables") {
  const Potential cw = make_curie_weiss(2, 1.0, 0.0);
  // Symbol 0 is -1, symbol 1 is +1.
  CHECK(cw(0) == doctest::Approx(1.0));
  CHECK(cw(1) == doctest::Approx(0.0));
  CHECK(cw(2) == doctest::Approx(0.0));
  CHECK(cw(3) == doctest::Approx(1.0));
  CHECK(eval(cw, Config{{1, 1}, 3}) == doctest::Approx(1.0));
  CHECK(eval(cw, Config{{1, 0}, 2}) == doctest::Approx(0.0));
  const Potential z = make_curie_weiss(5, 0.0, 0.0);
  for (double v : z.values()) CHECK(v == 0.0);
  const Potential zero = Potential::zero(ProductSpace::uniform({3, 2}));
  for (std::size_t x = 0; x < 6; ++x) CHECK(zero(x) == 0.0);
}

TEST_CASE("partial gradients and gradients") {
  const Potential cw = make_curie_weiss(2, 1.0, 0.0);
  CHECK(partial_gradient(cw, 0, 0, 1) == doctest::Approx(-1.0));
  CHECK(partial_gradient(cw, Config{{0, 0}, 0}, 0, 1) == doctest::Approx(-1.0));
  const SeparableFunction g = gradient(cw, 0);
  CHECK(g.part(0)[1] == doctest::Approx(-1.0));
  CHECK(g.part(1)[1] == doctest::Approx(-1.0));
  CHECK(g.part(0)[0] == 0.0);

  gen::Gen r(21);
  for (int t = 0; t < 20; ++t) {
    auto s = r.space(4, 3);
    const Potential f = r.potential(s);
    const std::size_t x = r.index(s->state_count());
    for (std::size_t i = 0; i < s->dims(); ++i)
      CHECK(partial_gradient(f, x, i, s->reference_point(i)) == 0.0);
    // Separable: the partial gradient is g_i(y) - g_i(*_i) at every x.
    const SeparableFunction sep = r.separable(s);
    const Potential fs = to_potential(sep);
    for (std::size_t i = 0; i < s->dims(); ++i)
      for (std::size_t a = 0; a < s->radix(i); ++a)
        CHECK(partial_gradient(fs, x, i, a) == doctest::Approx(sep.part(i)[a]).epsilon(1e-12));
  }
  const SeparableFunction zg = gradient(Potential::zero(ProductSpace::uniform({2, 3})), 4);
  for (double v : zg.flat()) CHECK(v == 0.0);
}

TEST_CASE("separable functions are pinned at the reference points") {
  auto s = ProductSpace::uniform({3, 2})->with_reference_points({2, 1});
  const SeparableFunction g(s, {1, 2, 3, 4, 5});
  CHECK(g.part(0)[2] == 0.0);
  CHECK(g.part(1)[1] == 0.0);
  CHECK(g.part(0)[0] == -2.0);
  CHECK_THROWS_AS(SeparableFunction(s, {1, 2}), ConfigError);
}

TEST_CASE("sep_sup_norm examples and brute-force agreement") {
  gen::Gen r(22);
  auto s1 = ProductSpace::uniform({4});
  const SeparableFunction a(s1, {0, 0.3, -0.9, 0.2});
  const SeparableFunction zero = SeparableFunction::zero(s1);
  CHECK(sep_sup_norm(a, a) == 0.0);
  CHECK(sep_sup_norm(a, zero) == doctest::Approx(0.9));
  for (int t = 0; t < 200; ++t) {
    auto s = r.space(6, 4);
    const SeparableFunction x = r.separable(s), y = r.separable(s);
    REQUIRE(sep_sup_norm(x, y) == doctest::Approx(oracle::brute_sup(x, y)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(sep_sup_norm(a, SeparableFunction::zero(ProductSpace::uniform({2}))),
                  ConfigError);
}

TEST_CASE("random models are reproducible from the seed") {
  const Potential a = make_random_potential(4, 3, 7, 1.0);
  const Potential b = make_random_potential(4, 3, 7, 1.0);
  const Potential c = make_random_potential(4, 3, 8, 1.0);
  CHECK(std::vector<double>(a.values().begin(), a.values().end()) ==
        std::vector<double>(b.values().begin(), b.values().end()));
  CHECK(std::vector<double>(a.values().begin(), a.values().end()) !=
        std::vector<double>(c.values().begin(), c.values().end()));
  for (double v : a.values()) CHECK(std::abs(v) <= 1.0);
  auto s = ProductSpace::uniform({2, 2, 2});
  const Potential l1 = make_low_rank(s, 2, 3), l2 = make_low_rank(s, 2, 3);
  CHECK(std::vector<double>(l1.values().begin(), l1.values().end()) ==
        std::vector<double>(l2.values().begin(), l2.values().end()));
}

TEST_CASE("property: cocycle equation under a change of reference points") {
  gen::Gen r(23);
  for (int t = 0; t < 30; ++t) {
    auto s = r.space(4, 3);
    std::vector<std::size_t> ref2(s->dims());
    for (std::size_t i = 0; i < s->dims(); ++i) ref2[i] = r.index(s->radix(i));
    auto s2 = s->with_reference_points(ref2);
    const Potential f = r.potential(s);
    const Potential f2 = f.on(s2);
    const std::size_t star2 = s->encode(ref2);
    for (std::size_t x = 0; x < s->state_count(); ++x) {
      const SeparableFunction g = gradient(f, x), g2 = gradient(f2, x);
      for (std::size_t y = 0; y < s->state_count(); ++y)
        REQUIRE(std::abs(g2(y) - (g(y) - g(star2))) < 1e-10);
    }
    // Diameters under the new reference points at most double.
    const GradientMap m1(f), m2(f2);
    const auto P = gen::Gen(t).partition(s->state_count(), 3);
    const double d1 = verify_partition_hypothesis(m1, P).diameter;
    const double d2 = verify_partition_hypothesis(m2, P).diameter;
    REQUIRE(d2 <= 2.0 * d1 + 1e-10);
  }
}

TEST_CASE("property: constant gradient iff separable") {
  gen::Gen r(24);
  for (int t = 0; t < 30; ++t) {
    auto s = r.space(4, 3);
    const Potential sep = to_potential(r.separable(s));
    const GradientMap gs(sep);
    CHECK(gradient_diameter(gs).diameter < 1e-12);
    // Adding a constant keeps it separable.
    std::vector<double> shifted(sep.values().begin(), sep.values().end());
    for (double& v : shifted) v += 3.0;
    CHECK(gradient_diameter(GradientMap(Potential(s, shifted))).diameter < 1e-12);
    // A generic table on a space with two non-trivial coordinates is not.
    std::size_t nontrivial = 0;
    for (std::size_t i = 0; i < s->dims(); ++i) nontrivial += s->radix(i) > 1;
    if (nontrivial >= 2) CHECK(gradient_diameter(GradientMap(r.potential(s))).diameter > 1e-6);
  }
}

TEST_CASE("gradient map rows agree with gradient()") {
  gen::Gen r(25);
  auto s = r.space(4, 3);
  const Potential f = r.potential(s);
  const GradientMap m(f);
  for (std::size_t x = 0; x < s->state_count(); ++x) {
    const SeparableFunction g = gradient(f, x);
    CHECK(m.row(x) == g);
    for (std::size_t y = 0; y < s->state_count(); y += 3)
      CHECK(m.distance(x, y) == doctest::Approx(oracle::gradient_distance(f, x, y)).epsilon(1e-12));
  }
}
