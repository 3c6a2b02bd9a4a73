#include "rfs/cardinality.hpp"
#include "rfs/gaussian.hpp"
#include "rfs/grid.hpp"
#include "rfs/moments.hpp"
#include "rfs/rng.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <cmath>

using namespace rfs;
using namespace testutil;

TEST_CASE("mixture mass over the whole space is the weight sum") {
  GaussianMixture gm(1);
  gm.add(comp1(0.3, 0.0, 1.0));
  gm.add(comp1(0.7, 1.0, 1.0));
  CHECK(gm.mass() == doctest::Approx(1.0).epsilon(1e-12));

  GaussianMixture empty(1);
  CHECK(empty.mass() == 0.0);
}

TEST_CASE("mass in a half-space of a centered Gaussian is half the weight") {
  GaussianMixture gm(1);
  gm.add(comp1(0.8, 0.0, 1.0));
  CHECK(gm.mass_in_box(vec1(0.0), vec1(1e9)) == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("intensity of the basic families") {
  auto rng = make_stream(1, 0);

  SUBCASE("poisson rate scales the spatial density") {
    PoissonDensity d{2.0, random_spd(rng)};
    CHECK(phd_of(d).mass() == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("bernoulli existence scales the spatial density") {
    BernoulliComponent d{0.7, random_spd(rng)};
    const GaussianMixture phd = phd_of(d);
    CHECK(phd.mass() == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(phd.eval(vec1(5.0)) == doctest::Approx(0.7 * d.spd.eval(vec1(5.0))).epsilon(1e-12));
  }
  SUBCASE("iid-cluster mass is the cardinality mean") {
    IidcDensity d;
    d.cardinality = CardinalityPmf({0.5, 0.0, 0.5});
    d.spd = random_spd(rng);
    CHECK(phd_of(d).mass() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("labeled intensity per label") {
  auto rng = make_stream(2, 0);
  const Label l{1, 0};

  SUBCASE("lmb track mass is its existence") {
    LmbDensity lmb;
    lmb.tracks[l] = {0.4, random_spd(rng)};
    CHECK(lphd_of(lmb, l).mass() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(lphd_of(lmb, Label{9, 9}).mass() == 0.0);
  }
  SUBCASE("single-hypothesis density has unit label mass") {
    DeltaGlmbDensity d;
    d.hypotheses.push_back({{l}, "h0", 1.0});
    d.trackDensities[{"h0", l}] = random_spd(rng);
    CHECK(lphd_of(d, l).mass() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("label mass sums only hypotheses containing the label") {
    const Label l2{1, 1};
    DeltaGlmbDensity d;
    d.hypotheses.push_back({{l}, "h0", 0.3});
    d.hypotheses.push_back({{l2}, "h1", 0.7});
    d.trackDensities[{"h0", l}] = random_spd(rng);
    d.trackDensities[{"h1", l2}] = random_spd(rng);
    CHECK(lphd_of(d, l).mass() == doctest::Approx(0.3).epsilon(1e-12));
  }
}

TEST_CASE("cardinality distributions") {
  auto rng = make_stream(3, 0);

  SUBCASE("bernoulli") {
    const CardinalityPmf p = cardinality_of(BernoulliComponent{0.3, random_spd(rng)});
    CHECK(p[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.3).epsilon(1e-12));
  }
  SUBCASE("two-component convolution") {
    MultiBernoulli mb;
    mb.components.push_back({0.5, random_spd(rng)});
    mb.components.push_back({0.5, random_spd(rng)});
    const CardinalityPmf p = cardinality_of(mb);
    CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("poisson series") {
    const CardinalityPmf p = CardinalityPmf::poisson(1.0, 10);
    CHECK(p[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(p.total() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("truncation warning when the tail is heavy") {
    CHECK(CardinalityPmf::poisson(10.0, 3).truncation_warning());
    CHECK_FALSE(CardinalityPmf::poisson(1.0, 20).truncation_warning());
  }
  SUBCASE("multi-bernoulli mean adds existences") {
    const MultiBernoulli mb = random_mb(rng, 4);
    double sum = 0.0;
    for (const auto& c : mb.components) sum += c.existence;
    CHECK(cardinality_of(mb).mean() == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("set-level density values") {
  auto rng = make_stream(4, 0);

  SUBCASE("bernoulli cases are exact") {
    BernoulliComponent d{0.8, random_spd(rng)};
    CHECK(set_density_eval(d, {}) == doctest::Approx(0.2).epsilon(1e-15));
    const auto x = vec1(5.0);
    CHECK(set_density_eval(d, {x}) == doctest::Approx(0.8 * d.spd.eval(x)).epsilon(1e-15));
    CHECK(set_density_eval(d, {x, x}) == 0.0);
  }
  SUBCASE("poisson at the empty set") {
    PoissonDensity d{1.0, random_spd(rng)};
    CHECK(set_density_eval(d, {}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("two-component two-point value enumerates both assignments") {
    MultiBernoulli mb;
    mb.components.push_back({0.3, random_spd(rng)});
    mb.components.push_back({0.6, random_spd(rng)});
    const auto a = vec1(4.0);
    const auto b = vec1(7.0);
    const auto& c0 = mb.components[0];
    const auto& c1 = mb.components[1];
    const double expected = c0.existence * c0.spd.eval(a) * c1.existence * c1.spd.eval(b) +
                            c0.existence * c0.spd.eval(b) * c1.existence * c1.spd.eval(a);
    CHECK(set_density_eval(mb, {a, b}) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("cardinality above the enumeration cap is refused") {
    const MultiBernoulli mb = random_mb(rng, 2);
    const std::vector<Eigen::VectorXd> big(5, vec1(5.0));
    CHECK_THROWS(set_density_eval(mb, big));
  }
}

TEST_CASE("set-integral intensity oracle basics") {
  SUBCASE("certain existence reproduces the spatial density with unit mass") {
    GaussianMixture spd(1);
    spd.add(comp1(1.0, 6.0, 1.0));
    BernoulliComponent d{1.0, spd};
    const GridDensity grid = eval_grid_1d();
    const GridDensity phd = brute_force_phd(d, grid, 4);
    CHECK(phd.mass() == doctest::Approx(1.0).epsilon(1e-6));
    // Only singleton sets contribute, so each cell holds s(y) itself.
    for (std::size_t i = 0; i < grid.points.size(); ++i)
      CHECK(phd.values[i] == doctest::Approx(spd.eval(grid.points[i])).epsilon(1e-9));
  }
  SUBCASE("zero-rate process has zero intensity") {
    PoissonDensity d{0.0, GaussianMixture(1)};
    const GridDensity phd = brute_force_phd(d, eval_grid_1d(), 4);
    for (double v : phd.values) CHECK(v == 0.0);
  }
  SUBCASE("single-target cluster density has unit oracle mass") {
    IidcDensity d;
    d.cardinality = CardinalityPmf({0.0, 1.0});
    GaussianMixture spd(1);
    spd.add(comp1(1.0, 6.0, 1.0));
    d.spd = spd;
    const GridDensity phd = brute_force_phd(d, eval_grid_1d(), 4);
    CHECK(phd.mass() == doctest::Approx(1.0).epsilon(1e-7));
  }
  SUBCASE("oversized grids are refused") {
    const GridDensity big = GridDensity::uniform_1d(0.0, 13.0, 13);
    GaussianMixture spd(1);
    spd.add(comp1(1.0, 6.0, 1.0));
    CHECK_THROWS(brute_force_phd(PoissonDensity{0.1, spd}, big, 4));
  }
}

TEST_CASE("mixture reduction") {
  auto rng = make_stream(5, 0);

  SUBCASE("everything below the prune threshold vanishes") {
    GaussianMixture gm(1);
    gm.add(comp1(1e-7, 0.0, 1.0));
    CHECK(gm_reduce(gm, 1e-5, 4.0, 100).empty());
  }
  SUBCASE("identical components merge moment-matched") {
    GaussianMixture gm(1);
    gm.add(comp1(0.4, 2.0, 1.5));
    gm.add(comp1(0.6, 2.0, 1.5));
    const GaussianMixture red = gm_reduce(gm, 1e-5, 4.0, 100);
    REQUIRE(red.size() == 1);
    CHECK(red[0].weight == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(red[0].mean(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(red[0].cov(0, 0) == doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("capping preserves mass within 0.1%") {
    std::uniform_real_distribution<double> mean(-50.0, 50.0);
    std::uniform_real_distribution<double> wgt(0.01, 1.0);
    GaussianMixture gm(1);
    for (int i = 0; i < 100; ++i) gm.add(comp1(wgt(rng), mean(rng), 1.0));
    const double before = gm.mass();
    const GaussianMixture red = gm_reduce(gm, 1e-5, 4.0, 10);
    CHECK(red.size() <= 10);
    CHECK(red.mass() == doctest::Approx(before).epsilon(1e-3));
  }
}

TEST_CASE("grid divergence") {
  SUBCASE("self-divergence is zero") {
    GridDensity p = GridDensity::uniform_1d(0.0, 10.0, 50);
    for (auto& v : p.values) v = 0.02;
    CHECK(kl_grid(p, p) == 0.0);
  }
  SUBCASE("disjoint support gives the infinite sentinel") {
    GridDensity p = GridDensity::uniform_1d(0.0, 2.0, 2);
    GridDensity q = p;
    p.values = {1.0, 0.0};
    q.values = {0.0, 1.0};
    CHECK(std::isinf(kl_grid(p, q)));
  }
  SUBCASE("unit-shift Gaussians have divergence one half") {
    const GridDensity grid = GridDensity::uniform_1d(-8.0, 8.0, 1601);
    GaussianMixture a(1), b(1);
    a.add(comp1(1.0, 0.0, 1.0));
    b.add(comp1(1.0, 1.0, 1.0));
    GridDensity p = GridDensity::from_mixture(a, grid);
    GridDensity q = GridDensity::from_mixture(b, grid);
    p.normalize();
    q.normalize();
    CHECK(kl_grid(p, q) == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("grid mismatch is rejected") {
    const GridDensity p = GridDensity::uniform_1d(0.0, 1.0, 4);
    const GridDensity q = GridDensity::uniform_1d(0.0, 1.0, 5);
    CHECK_THROWS(kl_grid(p, q));
  }
}

TEST_CASE("intensity mass matches the cardinality mean per family") {
  auto rng = make_stream(6, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const MultiBernoulli mb = random_mb(rng, 3);
    CHECK(phd_of(mb).mass() == doctest::Approx(cardinality_of(mb).mean()).epsilon(1e-9));
    const MbMixture mbm = random_mbm(rng);
    CHECK(phd_of(mbm).mass() == doctest::Approx(cardinality_of(mbm).mean()).epsilon(1e-9));
  }
}
