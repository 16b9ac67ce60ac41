#include <catch2/catch_amalgamated.hpp>

#include "dualcone/instance_gen.hpp"
#include "dualcone/transport.hpp"

using namespace dualcone;

namespace {

TransportInstance unit_instance() {
  auto l = make_space({"a", "b"}, {1, 1});
  auto r = make_space({"x", "y"}, {1, 1});
  GeneratorSet h1(l, {FuncOnSpace::constant(l, 1.0)}, Regime::NonNeg);
  GeneratorSet h2(r, {FuncOnSpace::constant(r, 1.0)}, Regime::NonNeg);
  return TransportInstance(std::move(h1), std::move(h2));
}

// Sampled members of the product set H: (beta*mix1) (+) ((1-beta)*mix2); the
// pure embeddings g (+) 0 and 0 (+) g are the beta in {0,1} cases.
FuncOnSpace sampled_member(const TransportInstance& t, const std::vector<double>& lam1,
                           const std::vector<double>& lam2, double beta) {
  std::vector<double> h1v(t.h1().space()->size()), h2v(t.h2().space()->size());
  for (std::size_t x = 0; x < h1v.size(); ++x) {
    ExtReal m = t.h1().mix_at(lam1, x);
    h1v[x] = beta == 0.0 ? 0.0 : (m.is_finite() ? beta * m.finite_value() : kInf);
  }
  for (std::size_t y = 0; y < h2v.size(); ++y) {
    ExtReal m = t.h2().mix_at(lam2, y);
    h2v[y] = beta == 1.0 ? 0.0 : (m.is_finite() ? (1.0 - beta) * m.finite_value() : kInf);
  }
  return oplus(t.product(), FuncOnSpace(t.h1().space(), h1v), FuncOnSpace(t.h2().space(), h2v));
}

}  // namespace

TEST_CASE("transport value examples") {
  TransportInstance t = unit_instance();

  // Identity pattern: one unit of mass on a diagonal cell.
  FuncOnSpace diag(t.product().space(), {1.0, 0.0, 0.0, 1.0});
  TransportResult r = transport_value(t, diag);
  CHECK(r.value.finite_value() == Catch::Approx(1.0));
  REQUIRE(r.certificate);
  CHECK(r.certificate->min_slack() >= -1e-9);
  CHECK(pairing(diag, r.certificate->coupling).finite_value() == Catch::Approx(1.0));

  // Constants: total mass exactly one is optimal.
  CHECK(transport_value(t, FuncOnSpace::constant(t.product().space(), 2.5))
            .value.finite_value() == Catch::Approx(2.5));

  // Marginal caps 1/2 + 1/2.
  auto l = make_space({"a", "b"}, {1, 1});
  auto rr = make_space({"x", "y"}, {1, 1});
  GeneratorSet h1(l, {FuncOnSpace(l, {2.0, 0.0}), FuncOnSpace(l, {0.0, 2.0})}, Regime::NonNeg);
  GeneratorSet h2(rr, {FuncOnSpace::constant(rr, 1.0)}, Regime::NonNeg);
  TransportInstance caps(std::move(h1), std::move(h2));
  CHECK(transport_value(caps, FuncOnSpace::constant(caps.product().space(), 1.0))
            .value.finite_value() == Catch::Approx(1.0));
}

TEST_CASE("superhedge split examples") {
  TransportInstance t = unit_instance();

  FuncOnSpace diag(t.product().space(), {1.0, 0.0, 0.0, 1.0});
  SplitResult s = superhedge_split(t, diag);
  CHECK(s.value.finite_value() == Catch::Approx(1.0));
  REQUIRE(s.f1);
  REQUIRE(s.f2);
  // The split dominates the claim and its price is certified by y.
  FuncOnSpace cover = oplus(t.product(), *s.f1, *s.f2);
  for (std::size_t q = 0; q < t.product().size(); ++q) CHECK(cover[q] >= diag[q] - 1e-9);
  double y_total = 0.0;
  for (double y : s.y1) y_total += y;
  for (double y : s.y2) y_total += y;
  CHECK(y_total == Catch::Approx(s.value.finite_value()));

  CHECK(superhedge_split(t, FuncOnSpace::constant(t.product().space(), 0.0))
            .value.finite_value() == Catch::Approx(0.0).margin(1e-12));

  // A fixed split is feasible, so phi is below its price.
  FuncOnSpace f1(t.h1().space(), {1.0, 0.5}), f2(t.h2().space(), {0.3, 0.0});
  FuncOnSpace claim = oplus(t.product(), f1, f2);
  double pi1 = support_over_polar(t.h1(), f1).value.finite_value();
  double pi2 = support_over_polar(t.h2(), f2).value.finite_value();
  CHECK(superhedge_split(t, claim).value.finite_value() <= pi1 + pi2 + 1e-9);
}

TEST_CASE("product polar check examples") {
  TransportInstance t = unit_instance();
  MeasureOnSpace quarter(t.product().space(), {0.25, 0.25, 0.25, 0.25});
  CHECK(product_polar_check(t, quarter).verdict);

  MeasureOnSpace heavy(t.product().space(), {0.5, 0.5, 0.25, 0.25});  // mass 1.5
  CHECK_FALSE(product_polar_check(t, heavy).verdict);

  MeasureOnSpace zero(t.product().space(), {0.0, 0.0, 0.0, 0.0});
  CHECK(product_polar_check(t, zero).verdict);
}

TEST_CASE("duality report on the worked examples") {
  TransportInstance t = unit_instance();
  std::vector<FuncOnSpace> fs{FuncOnSpace(t.product().space(), {1.0, 0.0, 0.0, 1.0}),
                              FuncOnSpace::constant(t.product().space(), 2.0),
                              FuncOnSpace::constant(t.product().space(), 0.0)};
  TransportDualityReport rep = duality_report(t, fs);
  CHECK(rep.all_ok);
  for (const auto& e : rep.entries) CHECK(e.gap <= 1e-9);
}

TEST_CASE("transport duality on random instances") {
  Rng rng(2025);
  for (int rep = 0; rep < 60; ++rep) {
    TransportInstance t = gen::random_transport_instance(rng, 5, 3);
    FuncOnSpace f = gen::random_product_claim(rng, t);
    TransportResult v = transport_value(t, f);
    SplitResult s = superhedge_split(t, f);
    if (v.value.is_finite()) {
      REQUIRE(s.value.is_finite());
      CHECK(std::abs(v.value.finite_value() - s.value.finite_value()) <=
            1e-7 * (1.0 + std::abs(v.value.finite_value())));
      CHECK(v.certificate->min_slack() >= -1e-9);
    } else {
      CHECK(s.value.is_infinite());
    }
  }
}

TEST_CASE("transport value agrees with the vertex oracle on small instances") {
  Rng rng(606);
  int tested = 0;
  while (tested < 25) {
    TransportInstance t = gen::random_transport_instance(rng, 3, 3);
    if (t.product().size() > 9) continue;
    FuncOnSpace f = gen::random_product_claim(rng, t);
    TransportResult v = transport_value(t, f);
    if (!v.value.is_finite()) continue;
    lp::Polyhedron poly;
    for (std::size_t g = 0; g < t.h1().num_generators(); ++g) {
      std::vector<double> row(t.product().size(), 0.0);
      for (std::size_t i = 0; i < t.h1().space()->size(); ++i)
        for (std::size_t j = 0; j < t.h2().space()->size(); ++j)
          row[t.product().index(i, j)] = t.h1().gen(g)[i];
      poly.a.push_back(std::move(row));
      poly.b.push_back(1.0);
    }
    for (std::size_t g = 0; g < t.h2().num_generators(); ++g) {
      std::vector<double> row(t.product().size(), 0.0);
      for (std::size_t i = 0; i < t.h1().space()->size(); ++i)
        for (std::size_t j = 0; j < t.h2().space()->size(); ++j)
          row[t.product().index(i, j)] = t.h2().gen(g)[j];
      poly.a.push_back(std::move(row));
      poly.b.push_back(1.0);
    }
    auto verts = lp::enumerate_vertices(poly);
    if (verts.empty()) continue;
    double oracle = lp::max_over_vertices(f.values(), verts);
    CHECK(std::abs(v.value.finite_value() - oracle) <= 1e-7 * (1.0 + std::abs(oracle)));
    ++tested;
  }
}

TEST_CASE("pi is sublinear on nonneg claims") {
  Rng rng(11);
  for (int rep = 0; rep < 25; ++rep) {
    TransportInstance t = gen::random_transport_instance(rng, 4, 2);
    FuncOnSpace f = gen::random_product_claim(rng, t);
    FuncOnSpace g = gen::random_product_claim(rng, t);
    TransportResult vf = transport_value(t, f);
    TransportResult vg = transport_value(t, g);
    if (!vf.value.is_finite() || !vg.value.is_finite()) continue;
    std::vector<double> sum(t.product().size());
    for (std::size_t q = 0; q < sum.size(); ++q) sum[q] = f[q] + g[q];
    double vsum = transport_value(t, FuncOnSpace(t.product().space(), sum)).value.finite_value();
    CHECK(vsum <= vf.value.finite_value() + vg.value.finite_value() + 1e-9);

    double alpha = rng.uniform(0.0, 3.0);
    std::vector<double> scaled(t.product().size());
    for (std::size_t q = 0; q < scaled.size(); ++q) scaled[q] = alpha * f[q];
    double vscaled =
        transport_value(t, FuncOnSpace(t.product().space(), scaled)).value.finite_value();
    CHECK(vscaled == Catch::Approx(alpha * vf.value.finite_value()).margin(1e-7));
  }
}

TEST_CASE("membership via pi agrees with decisive rescaling") {
  Rng rng(31);
  int tested = 0;
  while (tested < 15) {
    TransportInstance t = gen::random_transport_instance(rng, 3, 2);
    FuncOnSpace f = gen::random_product_claim(rng, t);
    TransportResult v = transport_value(t, f);
    if (!v.value.is_finite()) continue;
    double val = v.value.finite_value();
    if (val <= 1e-9) continue;
    double target = tested % 2 == 0 ? 0.7 : 1.4;
    std::vector<double> scaled(t.product().size());
    for (std::size_t q = 0; q < scaled.size(); ++q) scaled[q] = f[q] * target / val;
    FuncOnSpace probe(t.product().space(), scaled);
    bool member_by_pi = transport_value(t, probe).value.finite_value() <= 1.0 + kMembershipTol;
    CHECK(member_by_pi == (target < 1.0));
    ++tested;
  }
}

TEST_CASE("regularity identity: sup over members matches the marginal maxima") {
  Rng rng(808);
  for (int rep = 0; rep < 20; ++rep) {
    TransportInstance t = gen::random_transport_instance(rng, 4, 3);
    std::vector<double> w(t.product().size());
    for (double& x : w) x = rng.uniform(0.0, 1.0);
    MeasureOnSpace mu(t.product().space(), std::move(w));
    auto [m1, m2] = marginals(t.product(), mu);

    double rhs = 0.0;
    for (std::size_t g = 0; g < t.h1().num_generators(); ++g)
      rhs = std::max(rhs, pairing(t.h1().gen(g), m1).finite_value());
    for (std::size_t g = 0; g < t.h2().num_generators(); ++g)
      rhs = std::max(rhs, pairing(t.h2().gen(g), m2).finite_value());

    double lhs = 0.0;
    const std::size_t n1 = t.h1().num_generators(), n2 = t.h2().num_generators();
    // Pure generator embeddings reach the maxima; random mixes stay below.
    for (std::size_t g = 0; g < n1; ++g) {
      std::vector<double> lam(n1, 0.0);
      lam[g] = 1.0;
      FuncOnSpace h = sampled_member(t, lam, std::vector<double>(n2, 0.0), 1.0);
      lhs = std::max(lhs, pairing(h, mu).finite_value());
    }
    for (std::size_t g = 0; g < n2; ++g) {
      std::vector<double> lam(n2, 0.0);
      lam[g] = 1.0;
      FuncOnSpace h = sampled_member(t, std::vector<double>(n1, 0.0), lam, 0.0);
      lhs = std::max(lhs, pairing(h, mu).finite_value());
    }
    for (int extra = 0; extra < 10; ++extra) {
      FuncOnSpace h = sampled_member(t, rng.simplex_point(n1), rng.simplex_point(n2),
                                     rng.uniform(0.0, 1.0));
      double v = pairing(h, mu).finite_value();
      CHECK(v <= rhs + 1e-9);
      lhs = std::max(lhs, v);
    }
    CHECK(lhs == Catch::Approx(rhs).margin(1e-9));
  }
}

TEST_CASE("infinite generator values force zero marginal mass") {
  auto l = make_space({"a", "b"}, {1, 1});
  auto r = make_space({"x", "y"}, {1, 1});
  GeneratorSet h1(l, {FuncOnSpace(l, {kInf, 1.0})}, Regime::NonNeg);
  GeneratorSet h2(r, {FuncOnSpace::constant(r, 1.0)}, Regime::NonNeg);
  TransportInstance t(std::move(h1), std::move(h2));

  FuncOnSpace f(t.product().space(), {5.0, 5.0, 1.0, 1.0});
  TransportResult v = transport_value(t, f);
  CHECK(v.value.finite_value() == Catch::Approx(1.0));
  auto [m1, m2] = marginals(t.product(), v.certificate->coupling);
  CHECK(m1[0] <= 1e-12);

  // product_polar_check rejects mass on the forced point.
  MeasureOnSpace bad(t.product().space(), {0.2, 0.0, 0.0, 0.3});
  CHECK_FALSE(product_polar_check(t, bad).verdict);
}

TEST_CASE("unbounded coupling polytope reports +inf with a ray") {
  // Zero generators leave the polar unconstrained.
  auto l = make_space({"a"}, {1});
  auto r = make_space({"x"}, {1});
  GeneratorSet h1(l, {FuncOnSpace::constant(l, 0.0)}, Regime::NonNeg);
  GeneratorSet h2(r, {FuncOnSpace::constant(r, 0.0)}, Regime::NonNeg);
  TransportInstance t(std::move(h1), std::move(h2));
  FuncOnSpace f(t.product().space(), {1.0});
  TransportResult v = transport_value(t, f);
  CHECK(v.value.is_infinite());
  CHECK_FALSE(v.ray.empty());
  CHECK(superhedge_split(t, f).value.is_infinite());
}
