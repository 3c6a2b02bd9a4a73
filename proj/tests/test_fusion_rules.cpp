#include "rfs/fusion.hpp"
#include "rfs/moments.hpp"
#include "rfs/rng.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <cmath>

using namespace rfs;
using namespace testutil;

TEST_CASE("fusion weights live on the open simplex") {
  CHECK_THROWS(FusionWeights({0.5, 0.6}));
  CHECK_THROWS(FusionWeights({1.0, 0.0}));
  const FusionWeights u = FusionWeights::uniform(4);
  for (int i = 0; i < 4; ++i) CHECK(u[i] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("mixture averaging") {
  auto rng = make_stream(10, 0);
  const FusionWeights half({0.5, 0.5});

  SUBCASE("mass is the weighted sum of input masses") {
    GaussianMixture a(1), b(1);
    a.add(comp1(2.0, 0.0, 1.0));
    b.add(comp1(4.0, 1.0, 1.0));
    CHECK(aa_gm({a, b}, half).mass() == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("identical inputs keep their mass") {
    const GaussianMixture s = random_spd(rng);
    CHECK(aa_gm({s, s}, half).mass() == doctest::Approx(s.mass()).epsilon(1e-12));
  }
  SUBCASE("single sensor is the identity") {
    const GaussianMixture s = random_spd(rng);
    const GaussianMixture out = aa_gm({s}, FusionWeights({1.0}));
    CHECK(out.size() == s.size());
    CHECK(out.eval(vec1(5.0)) == doctest::Approx(s.eval(vec1(5.0))).epsilon(1e-12));
  }
  SUBCASE("first moment is the weight-scaled sum of first moments") {
    const GaussianMixture a = random_spd(rng, 3);
    const GaussianMixture b = random_spd(rng, 3);
    const FusionWeights w({0.3, 0.7});
    const Eigen::VectorXd lhs = aa_gm({a, b}, w).weighted_mean_sum();
    const Eigen::VectorXd rhs = 0.3 * a.weighted_mean_sum() + 0.7 * b.weighted_mean_sum();
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("cardinality averaging") {
  const FusionWeights half({0.5, 0.5});
  const CardinalityPmf a({1.0});
  const CardinalityPmf b({0.0, 1.0});
  const CardinalityPmf f = aa_cardinality({a, b}, half);
  CHECK(f[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx(0.5).epsilon(1e-12));

  const CardinalityPmf p1 = CardinalityPmf::poisson(1.0);
  const CardinalityPmf p3 = CardinalityPmf::poisson(3.0);
  CHECK(aa_cardinality({p1, p3}, half).mean() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("poisson fusion averages the rates") {
  auto rng = make_stream(11, 0);
  const FusionWeights half({0.5, 0.5});
  PoissonDensity a{2.0, random_spd(rng)};
  PoissonDensity b{4.0, random_spd(rng)};
  const PoissonDensity f = fuse_poisson({a, b}, half);
  CHECK(f.rate == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.spd.mass() == doctest::Approx(1.0).epsilon(1e-9));

  SUBCASE("zero-rate sensors contribute nothing to the spatial density") {
    PoissonDensity z{0.0, GaussianMixture(1)};
    const PoissonDensity g = fuse_poisson({a, z}, half);
    CHECK(g.rate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.spd.eval(vec1(5.0)) == doctest::Approx(a.spd.eval(vec1(5.0))).epsilon(1e-12));
  }
}

TEST_CASE("iid-cluster fusion cardinalizes the spatial average") {
  auto rng = make_stream(12, 0);
  const FusionWeights half({0.5, 0.5});
  IidcDensity a, b;
  a.cardinality = CardinalityPmf({0.0, 1.0});       // mean 1
  b.cardinality = CardinalityPmf({0.0, 0.0, 0.0, 1.0});  // mean 3
  a.spd = random_spd(rng);
  b.spd = random_spd(rng);
  const IidcDensity f = fuse_iidc({a, b}, half);
  // Coefficients w_i * mean_i / fused mean = 0.25 and 0.75.
  const auto x = vec1(6.0);
  CHECK(f.spd.eval(x) ==
        doctest::Approx(0.25 * a.spd.eval(x) + 0.75 * b.spd.eval(x)).epsilon(1e-12));
  CHECK(f.cardinality.mean() == doctest::Approx(2.0).epsilon(1e-9));

  SUBCASE("cardinality commutes with fusion") {
    const CardinalityPmf direct = aa_cardinality({a.cardinality, b.cardinality}, half);
    for (int n = 0; n <= direct.n_max(); ++n)
      CHECK(f.cardinality[n] == doctest::Approx(direct[n]).epsilon(1e-12));
  }
}

TEST_CASE("bernoulli fusion") {
  auto rng = make_stream(13, 0);
  const FusionWeights half({0.5, 0.5});

  SUBCASE("same spatial density keeps it and averages existence") {
    const GaussianMixture s = random_spd(rng);
    const BernoulliComponent f = fuse_bernoulli({{0.6, s}, {0.4, s}}, half);
    CHECK(f.existence == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.spd.eval(vec1(5.0)) == doctest::Approx(s.eval(vec1(5.0))).epsilon(1e-9));
  }
  SUBCASE("existence-weighted spatial mixture") {
    const GaussianMixture s1 = random_spd(rng);
    const GaussianMixture s2 = random_spd(rng);
    const BernoulliComponent f = fuse_bernoulli({{1.0, s1}, {0.5, s2}}, half);
    CHECK(f.existence == doctest::Approx(0.75).epsilon(1e-12));
    const auto x = vec1(6.0);
    CHECK(f.spd.eval(x) ==
          doctest::Approx((2.0 / 3.0) * s1.eval(x) + (1.0 / 3.0) * s2.eval(x)).epsilon(1e-12));
  }
  SUBCASE("empty-set value is the weighted average of the inputs'") {
    const BernoulliComponent a = random_bernoulli(rng);
    const BernoulliComponent b = random_bernoulli(rng);
    const BernoulliComponent f = fuse_bernoulli({a, b}, half);
    CHECK(set_density_eval(f, {}) ==
          doctest::Approx(0.5 * (1.0 - a.existence) + 0.5 * (1.0 - b.existence)).epsilon(1e-12));
  }
}

TEST_CASE("component association") {
  auto rng = make_stream(14, 0);
  GaussianMixture sA(1), sB(1);
  sA.add(comp1(1.0, 0.0, 1.0));
  sB.add(comp1(1.0, 100.0, 1.0));

  SUBCASE("coincident components group together") {
    MultiBernoulli m1, m2;
    m1.components.push_back({0.5, sA});
    m2.components.push_back({0.5, sA});
    const AssociationResult r = associate_components({m1, m2}, 9.0);
    REQUIRE(r.groups.size() == 1);
    CHECK(r.groups[0].size() == 2);
  }
  SUBCASE("distant components stay separate") {
    MultiBernoulli m1, m2;
    m1.components.push_back({0.5, sA});
    m2.components.push_back({0.5, sB});
    const AssociationResult r = associate_components({m1, m2}, 9.0);
    CHECK(r.groups.size() == 2);
  }
  SUBCASE("well-separated targets give one group per target") {
    std::vector<MultiBernoulli> mbs(3);
    for (auto& mb : mbs) {
      mb.components.push_back({0.5, sA});
      mb.components.push_back({0.5, sB});
    }
    const AssociationResult r = associate_components(mbs, 9.0);
    REQUIRE(r.groups.size() == 2);
    for (const auto& g : r.groups) CHECK(g.size() == 3);
  }
  SUBCASE("group count bound holds on random inputs") {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<MultiBernoulli> mbs = {random_mb(rng, 2), random_mb(rng, 3),
                                         random_mb(rng, 1)};
      const AssociationResult r = associate_components(mbs, kDefaultAssociationGate);
      std::size_t total = 0, maxN = 0;
      for (const auto& mb : mbs) {
        total += mb.components.size();
        maxN = std::max(maxN, mb.components.size());
      }
      CHECK(r.groups.size() >= maxN);
      CHECK(r.groups.size() <= total);
      std::size_t grouped = 0;
      for (const auto& g : r.groups) grouped += g.size();
      CHECK(grouped == total);
    }
  }
}

TEST_CASE("multi-bernoulli fusion") {
  auto rng = make_stream(15, 0);
  const FusionWeights half({0.5, 0.5});
  GaussianMixture sA(1), sB(1);
  sA.add(comp1(1.0, 0.0, 1.0));
  sB.add(comp1(1.0, 100.0, 1.0));

  SUBCASE("shared target keeps its existence") {
    MultiBernoulli m1, m2;
    m1.components.push_back({0.8, sA});
    m2.components.push_back({0.8, sA});
    const MultiBernoulli f = fuse_mb({m1, m2}, half);
    REQUIRE(f.components.size() == 1);
    CHECK(f.components[0].existence == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("unassociated components keep the sensor-weighted existence") {
    MultiBernoulli m1, m2;
    m1.components.push_back({0.8, sA});
    m2.components.push_back({0.8, sB});
    const MultiBernoulli f = fuse_mb({m1, m2}, half);
    REQUIRE(f.components.size() == 2);
    for (const auto& c : f.components)
      CHECK(c.existence == doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("intensity mass is preserved on random inputs") {
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<MultiBernoulli> mbs = {random_mb(rng, 2), random_mb(rng, 3),
                                               random_mb(rng, 2)};
      const FusionWeights w({0.2, 0.5, 0.3});
      const MultiBernoulli f = fuse_mb(mbs, w);
      double expected = 0.0;
      for (std::size_t i = 0; i < mbs.size(); ++i) expected += w[i] * phd_of(mbs[i]).mass();
      CHECK(phd_of(f).mass() == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("multi-bernoulli mixture fusion") {
  auto rng = make_stream(16, 0);
  const FusionWeights half({0.5, 0.5});

  SUBCASE("two sensors, two hypotheses each, union of four") {
    const MbMixture a = random_mbm(rng, 2, 2);
    const MbMixture b = random_mbm(rng, 2, 2);
    const MbMixture f = fuse_mbm({a, b}, half, 2);
    REQUIRE(f.hypotheses.size() == 4);
    CHECK(f.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
    // Fused weights are w_i * w_ij; with normalized inputs and full top-K
    // the normalizer is 1. Compare as sorted sets (hypothesis order is
    // not specified).
    std::vector<double> expected, got;
    for (const auto& h : a.hypotheses) expected.push_back(0.5 * h.weight);
    for (const auto& h : b.hypotheses) expected.push_back(0.5 * h.weight);
    for (const auto& h : f.hypotheses) got.push_back(h.weight);
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-9));
  }
  SUBCASE("mass preserved when every hypothesis is kept") {
    for (int trial = 0; trial < 20; ++trial) {
      const MbMixture a = random_mbm(rng, 3, 2);
      const MbMixture b = random_mbm(rng, 2, 3);
      const MbMixture f = fuse_mbm({a, b}, half, 10);
      const double expected = 0.5 * phd_of(a).mass() + 0.5 * phd_of(b).mass();
      CHECK(phd_of(f).mass() == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("geometric-average baseline on grids") {
  const GridDensity grid = GridDensity::uniform_1d(-8.0, 8.0, 801);
  const FusionWeights half({0.5, 0.5});

  SUBCASE("idempotent on identical inputs") {
    GaussianMixture a(1);
    a.add(comp1(1.0, 0.0, 1.0));
    GridDensity p = GridDensity::from_mixture(a, grid);
    p.normalize();
    const GridDensity f = ga_fuse_grid({p, p}, half);
    CHECK(max_cell_diff(f, p) < 1e-9);
  }
  SUBCASE("disjoint supports collapse to zero") {
    GridDensity p = grid, q = grid;
    p.values.assign(grid.points.size(), 0.0);
    q.values.assign(grid.points.size(), 0.0);
    p.values[0] = 1.0;
    q.values[1] = 1.0;
    const GridDensity f = ga_fuse_grid({p, q}, half);
    CHECK(f.mass() == 0.0);
  }
  SUBCASE("equal-covariance Gaussians pool to the midpoint Gaussian") {
    GaussianMixture a(1), b(1), mid(1);
    a.add(comp1(1.0, 0.0, 1.0));
    b.add(comp1(1.0, 2.0, 1.0));
    mid.add(comp1(1.0, 1.0, 1.0));
    GridDensity pa = GridDensity::from_mixture(a, grid);
    GridDensity pb = GridDensity::from_mixture(b, grid);
    GridDensity pm = GridDensity::from_mixture(mid, grid);
    pa.normalize();
    pb.normalize();
    pm.normalize();
    const GridDensity f = ga_fuse_grid({pa, pb}, half);
    CHECK(max_cell_diff(f, pm) < 1e-3);
  }
}

TEST_CASE("arithmetic average minimizes the weighted forward divergence") {
  auto rng = make_stream(17, 0);
  const GridDensity grid = GridDensity::uniform_1d(0.0, 12.0, 120);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GridDensity> ps;
    for (int i = 0; i < 3; ++i) {
      GridDensity p = GridDensity::from_mixture(random_spd(rng, 2), grid);
      p.normalize();
      ps.push_back(std::move(p));
    }
    const FusionWeights w({0.3, 0.3, 0.4});

    GridDensity aa = grid;
    for (std::size_t c = 0; c < aa.values.size(); ++c) {
      aa.values[c] = 0.0;
      for (int i = 0; i < 3; ++i) aa.values[c] += w[i] * ps[i].values[c];
    }
    const double atAa = bfom_objective(ps, w, aa);
    const double atGa = bfom_objective(ps, w, ga_fuse_grid(ps, w));
    CHECK(atAa <= atGa + 1e-12);
    if (std::isfinite(atGa)) CHECK(atGa - atAa >= -1e-12);
    for (int i = 0; i < 3; ++i) {
      const double atInput = bfom_objective(ps, w, ps[i]);
      CHECK(atAa <= atInput + 1e-12);
      if (max_cell_diff(ps[i], aa) > 1e-9) CHECK(atInput - atAa >= 1e-9);
    }
  }
}

TEST_CASE("diversity-preference weight optimization") {
  auto rng = make_stream(18, 0);
  const GridDensity grid = GridDensity::uniform_1d(0.0, 12.0, 120);

  SUBCASE("identical inputs give uniform weights") {
    GridDensity p = GridDensity::from_mixture(random_spd(rng), grid);
    p.normalize();
    const FusionWeights w = bfom_weights({p, p, p});
    for (int i = 0; i < 3; ++i) CHECK(w[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  }
  SUBCASE("mirror-image inputs give equal weights") {
    GaussianMixture a(1), b(1);
    a.add(comp1(1.0, 4.0, 1.0));
    b.add(comp1(1.0, 8.0, 1.0));
    GridDensity pa = GridDensity::from_mixture(a, grid);
    GridDensity pb = GridDensity::from_mixture(b, grid);
    pa.normalize();
    pb.normalize();
    const FusionWeights w = bfom_weights({pa, pb});
    CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-2));
  }
}
