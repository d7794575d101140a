#include <doctest.h>

#include <cmath>
#include <limits>

#include "generators.hpp"
#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/gibbs.hpp"
#include "gibbsdecomp/infotheory.hpp"
#include "gibbsdecomp/models.hpp"
#include "oracles.hpp"

using namespace gibbsdecomp;

TEST_CASE("kl examples") {
  auto s4 = ProductSpace::uniform({2, 2});
  const Distribution u = Distribution::uniform(s4);
  CHECK(kl(u, u) == 0.0);
  CHECK(kl(Distribution::point_mass(s4, 2), u) == doctest::Approx(std::log(4.0)));
  auto s1 = ProductSpace::uniform({2});
  const double v = kl(Distribution(s1, {0.5, 0.5}), Distribution(s1, {0.25, 0.75}));
  CHECK(v == doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)));
  CHECK(v == doctest::Approx(0.14384).epsilon(1e-4));
  CHECK(std::isinf(kl(u, Distribution::point_mass(s4, 0))));
  CHECK(kl(Distribution::point_mass(s4, 0), u) > 0.0);
}

TEST_CASE("partition entropy examples") {
  auto s = ProductSpace::uniform({2, 2});
  const Distribution u = Distribution::uniform(s);
  CHECK(partition_entropy(u, PartitionOfSpace::trivial(4)) == 0.0);
  const std::vector<std::size_t> halves{0, 0, 1, 1};
  CHECK(partition_entropy(u, PartitionOfSpace::from_labels(halves)) ==
        doctest::Approx(std::log(2.0)));
  gen::Gen r(41);
  for (int t = 0; t < 50; ++t) {
    auto sp = r.space(4, 3);
    const auto P = r.partition(sp->state_count(), 6);
    CHECK(partition_entropy(r.distribution(sp, 0.3), P) <=
          std::log(double(P.size())) + 1e-12);
  }
}

TEST_CASE("partitions are validated") {
  CHECK_THROWS_AS(PartitionOfSpace::from_parts(3, {{0, 1}, {1, 2}}), ConfigError);
  CHECK_THROWS_AS(PartitionOfSpace::from_parts(3, {{0}, {2}}), ConfigError);
  CHECK_THROWS_AS(PartitionOfSpace::from_parts(3, {{0, 1, 2}, {}}), ConfigError);
  const auto P = PartitionOfSpace::from_labels(std::vector<std::size_t>{7, 3, 7});
  CHECK(P.size() == 2);
  CHECK(P.labels() == std::vector<std::size_t>{0, 1, 0});
}

TEST_CASE("modified chain rule") {
  gen::Gen r(42);
  auto s = r.space(6, 2);
  const Distribution mu = r.distribution(s);
  const Distribution gamma = r.distribution(s);
  CHECK(modified_chain_rule_residual(mu, gamma, PartitionOfSpace::trivial(s->state_count())) ==
        doctest::Approx(0.0).epsilon(1e-15));
  const auto P = r.partition(s->state_count(), 5);
  CHECK(modified_chain_rule_residual(mu, mu, P) < 1e-12);
  for (int t = 0; t < 50; ++t) {
    auto sp = r.space(6, 3);
    REQUIRE(modified_chain_rule_residual(r.distribution(sp, 0.2), r.distribution(sp),
                                         r.partition(sp->state_count(), 8)) < 1e-9);
  }
  auto s2 = ProductSpace::uniform({2});
  CHECK_THROWS_AS(modified_chain_rule_residual(Distribution::uniform(s2),
                                               Distribution::point_mass(s2, 0),
                                               PartitionOfSpace::trivial(2)),
                  InfiniteDivergence);
}

TEST_CASE("variational gap") {
  gen::Gen r(43);
  const Potential cw = make_curie_weiss(4, 1.0, 0.2);
  const GibbsMeasure mu = gibbs(cw);
  CHECK(std::abs(variational_gap(mu.dist, cw)) < 1e-12);
  for (int t = 0; t < 20; ++t) {
    const Distribution nu = r.distribution(cw.space_ptr());
    const double gap = variational_gap(nu, cw);
    REQUIRE(gap >= 0.0);
    REQUIRE(std::abs(gap - kl(nu, mu.dist)) < 1e-9);
  }
  auto s = r.space(4, 3);
  const Distribution nu = r.distribution(s);
  CHECK(variational_gap(nu, Potential::zero(s)) ==
        doctest::Approx(kl(nu, Distribution::reference(s))).epsilon(1e-12));
}

TEST_CASE("dtc examples") {
  auto s2 = ProductSpace::uniform({2, 2});
  CHECK(dtc_definitional(Distribution(s2, {0.5, 0.0, 0.0, 0.5})) ==
        doctest::Approx(std::log(2.0)));
  CHECK(std::abs(dtc_definitional(Distribution::uniform(ProductSpace::uniform({2, 2, 2})))) <
        1e-14);
  gen::Gen r(44);
  for (int t = 0; t < 20; ++t) {
    auto s = r.space(4, 3);
    CHECK(std::abs(dtc_definitional(product_gibbs(r.separable(s)).to_distribution())) < 1e-12);
    CHECK(std::abs(dtc_gibbs(to_potential(r.separable(s)))) < 1e-12);
    CHECK(std::abs(dtc_gibbs(Potential::zero(s))) < 1e-14);
  }
  const Potential cw = make_curie_weiss(2, 1.0, 0.0);
  CHECK(dtc_gibbs(cw) == doctest::Approx(dtc_definitional(gibbs(cw).dist)).epsilon(1e-12));
}

TEST_CASE("property: dtc agrees with the marginal-entropy identity and Han's inequality") {
  gen::Gen r(45);
  for (int t = 0; t < 100; ++t) {
    auto s = r.space(5, 3);
    const Distribution mu = r.distribution(s, 0.3);
    const double d = dtc_definitional(mu);
    REQUIRE(d >= -1e-10);
    REQUIRE(std::abs(d - oracle::dtc_by_marginals(mu)) < 1e-10);
    const Potential f = r.potential(s, 2.0);
    REQUIRE(std::abs(dtc_gibbs(f) - dtc_definitional(gibbs(f).dist)) < 1e-8);
  }
}

TEST_CASE("property: kl is nonnegative, zero on the diagonal, additive on products") {
  gen::Gen r(46);
  for (int t = 0; t < 100; ++t) {
    auto s = r.space(4, 3);
    const Distribution a = r.distribution(s, 0.3), b = r.distribution(s);
    REQUIRE(kl(a, b) >= 0.0);
    REQUIRE(kl(a, a) == 0.0);
    const ProductMeasure p = product_gibbs(r.separable(s)), q = product_gibbs(r.separable(s));
    const double joint = kl(p.to_distribution(), q.to_distribution());
    REQUIRE(std::abs(kl(p, q) - joint) < 1e-10);
    REQUIRE(std::abs(kl(a, q) - kl(a, q.to_distribution())) < 1e-10);
  }
}
