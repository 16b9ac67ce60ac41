#include <catch2/catch_amalgamated.hpp>

#include "dualcone/core_model.hpp"
#include "dualcone/rng.hpp"

using namespace dualcone;

namespace {
SpacePtr two_points() { return make_space({"a", "b"}, {1, 1}); }
}  // namespace

TEST_CASE("space validation") {
  CHECK_THROWS_AS(make_space({"a", "a"}, {1, 1}), InputError);
  CHECK_THROWS_AS(make_space({"a", "b"}, {1, 3}), InputError);  // level 2 skipped
  CHECK_THROWS_AS(make_space({"a"}, {0}), InputError);
  CHECK_THROWS_AS(make_space({}, {}), InputError);
  CHECK_THROWS_AS(make_space({"a"}, {1}, std::vector<double>{kInf}), InputError);
  auto s = make_space({"a", "b", "c"}, {1, 2, 2});
  CHECK(s->max_level() == 2);
  CHECK_FALSE(s->is_compact());
  CHECK(make_space({"a"}, {1})->is_compact());
}

TEST_CASE("ext real conventions") {
  CHECK(scale_nonneg(0.0, ExtReal::infinity()).finite_value() == 0.0);
  CHECK(scale_nonneg(2.0, ExtReal::infinity()).is_infinite());
  CHECK((ExtReal::finite(1.0) + ExtReal::infinity()).is_infinite());
  CHECK_THROWS_AS(ExtReal::from_double(-kInf), InputError);
  CHECK_THROWS_AS(ExtReal::from_double(std::nan("")), InputError);
  CHECK_THROWS_AS(ExtReal::infinity().finite_value(), InputError);
}

TEST_CASE("pairing examples") {
  auto s = two_points();
  FuncOnSpace f(s, {1.0, 2.0});
  MeasureOnSpace mu(s, {0.5, 0.25});
  CHECK(pairing(f, mu).finite_value() == Catch::Approx(1.0));

  FuncOnSpace g(s, {kInf, 1.0});
  CHECK(pairing(g, MeasureOnSpace(s, {0.0, 1.0})).finite_value() == Catch::Approx(1.0));
  CHECK(pairing(g, MeasureOnSpace(s, {0.1, 0.9})).is_infinite());
}

TEST_CASE("pairing is linear and monotone") {
  Rng rng(42);
  auto s = make_space({"a", "b", "c", "d"}, {1, 1, 2, 2});
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> fv(4), gv(4), wv(4);
    for (auto* vec : {&fv, &gv})
      for (double& x : *vec) x = rng.uniform(-3.0, 3.0);
    for (double& x : wv) x = rng.uniform(0.0, 2.0);
    FuncOnSpace f(s, fv), g(s, gv);
    MeasureOnSpace mu(s, wv);
    double a = rng.uniform(0.0, 2.0), b = rng.uniform(0.0, 2.0);
    std::vector<double> comb(4);
    for (int i = 0; i < 4; ++i) comb[i] = a * fv[i] + b * gv[i];
    double lhs = pairing(FuncOnSpace(s, comb), mu).finite_value();
    double rhs = a * pairing(f, mu).finite_value() + b * pairing(g, mu).finite_value();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));

    std::vector<double> above(4);
    for (int i = 0; i < 4; ++i) above[i] = fv[i] + rng.uniform(0.0, 1.0);
    CHECK(pairing(f, mu).finite_value() <=
          pairing(FuncOnSpace(s, above), mu).finite_value() + 1e-12);
  }
}

TEST_CASE("gamma from exhaustion levels") {
  auto s = make_space({"a", "b", "c"}, {1, 2, 3});
  CHECK(gamma(s).values() == std::vector<double>{0.0, 1.0, 2.0});
  auto compact = make_space({"a", "b", "c"}, {1, 1, 1});
  CHECK(gamma(compact).values() == std::vector<double>{0.0, 0.0, 0.0});
  auto s2 = make_space({"a", "b", "c"}, {1, 1, 2});
  CHECK(gamma(s2).values() == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("gamma sublevel sets are the exhaustion") {
  auto s = make_space({"p0", "p1", "p2", "p3", "p4"}, {1, 3, 2, 1, 3});
  FuncOnSpace g = gamma(s);
  for (double c : {0.0, 0.5, 1.0, 1.7, 2.0, 9.0}) {
    int k = static_cast<int>(std::floor(c)) + 1;
    for (std::size_t i = 0; i < s->size(); ++i)
      CHECK((g[i] <= c) == (s->level(i) <= k));
  }
}

TEST_CASE("oplus examples") {
  auto l = two_points();
  auto r = make_space({"x", "y"}, {1, 1});
  ProductSpace prod(l, r);

  FuncOnSpace h1(l, {1.0, 2.0}), h2(r, {10.0, 20.0});
  CHECK(oplus(prod, h1, h2).values() == std::vector<double>{11.0, 21.0, 12.0, 22.0});

  CHECK(oplus(prod, FuncOnSpace::constant(l, 0.0), FuncOnSpace::constant(r, 0.0)).values() ==
        std::vector<double>(4, 0.0));

  FuncOnSpace hinf(l, {kInf, 0.0});
  auto v = oplus(prod, hinf, FuncOnSpace::constant(r, 1.0)).values();
  CHECK(std::isinf(v[0]));
  CHECK(std::isinf(v[1]));
  CHECK(v[2] == 1.0);
  CHECK(v[3] == 1.0);

  CHECK_THROWS_AS(oplus(prod, h2, h1), InputError);  // factors swapped
}

TEST_CASE("marginals examples") {
  auto l = two_points();
  auto r = make_space({"x", "y"}, {1, 1});
  ProductSpace prod(l, r);

  MeasureOnSpace mu(prod.space(), {0.1, 0.2, 0.3, 0.4});
  auto [m1, m2] = marginals(prod, mu);
  CHECK(m1[0] == Catch::Approx(0.3));
  CHECK(m1[1] == Catch::Approx(0.7));
  CHECK(m2[0] == Catch::Approx(0.4));
  CHECK(m2[1] == Catch::Approx(0.6));
  CHECK(m1.total_mass() == Catch::Approx(mu.total_mass()));
  CHECK(m2.total_mass() == Catch::Approx(mu.total_mass()));

  // Product measure splits into its factors.
  std::vector<double> n1{0.25, 0.75}, n2{0.6, 0.4};
  std::vector<double> w(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) w[static_cast<std::size_t>(i * 2 + j)] = n1[i] * n2[j];
  auto [p1, p2] = marginals(prod, MeasureOnSpace(prod.space(), w));
  for (int i = 0; i < 2; ++i) CHECK(p1[i] == Catch::Approx(n1[static_cast<std::size_t>(i)]));
  for (int j = 0; j < 2; ++j) CHECK(p2[j] == Catch::Approx(n2[static_cast<std::size_t>(j)]));

  auto [z1, z2] = marginals(prod, MeasureOnSpace(prod.space(), {0, 0, 0, 0}));
  CHECK(z1.total_mass() == 0.0);
  CHECK(z2.total_mass() == 0.0);
}

TEST_CASE("oplus pairing splits through marginals") {
  Rng rng(7);
  auto l = make_space({"a", "b", "c"}, {1, 2, 2});
  auto r = make_space({"x", "y"}, {1, 2});
  ProductSpace prod(l, r);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> h1(3), h2(2), w(6);
    for (double& x : h1) x = rng.uniform(-2.0, 4.0);
    for (double& x : h2) x = rng.uniform(-2.0, 4.0);
    for (double& x : w) x = rng.uniform(0.0, 1.5);
    MeasureOnSpace mu(prod.space(), w);
    auto [m1, m2] = marginals(prod, mu);
    double lhs = pairing(oplus(prod, FuncOnSpace(l, h1), FuncOnSpace(r, h2)), mu).finite_value();
    double rhs = pairing(FuncOnSpace(l, h1), m1).finite_value() +
                 pairing(FuncOnSpace(r, h2), m2).finite_value();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("product space enumeration and levels") {
  auto l = make_space({"a", "b"}, {1, 2});
  auto r = make_space({"x", "y", "z"}, {1, 2, 3});
  ProductSpace prod(l, r);
  CHECK(prod.size() == 6);
  CHECK(prod.space()->label(0) == "(a,x)");
  CHECK(prod.space()->label(1) == "(a,y)");
  CHECK(prod.space()->label(3) == "(b,x)");
  CHECK(prod.space()->level(prod.index(1, 0)) == 2);  // max(2,1)
  CHECK(prod.space()->level(prod.index(0, 2)) == 3);
  CHECK(prod.left_index(4) == 1);
  CHECK(prod.right_index(4) == 1);
}

TEST_CASE("measure rejects bad weights") {
  auto s = two_points();
  CHECK_THROWS_AS(MeasureOnSpace(s, {-0.1, 0.2}), InputError);
  CHECK_THROWS_AS(MeasureOnSpace(s, {kInf, 0.2}), InputError);
  CHECK_THROWS_WITH(MeasureOnSpace(s, {0.2, -0.1}),
                    Catch::Matchers::ContainsSubstring("index 1"));
}

TEST_CASE("function lower bound cache") {
  auto s = make_space({"a", "b", "c"}, {1, 1, 1});
  CHECK(FuncOnSpace(s, {3.0, -2.0, kInf}).lower_bound() == -2.0);
  CHECK(FuncOnSpace(s, {kInf, kInf, kInf}).lower_bound() == 0.0);
  CHECK(FuncOnSpace(s, {1.0, 2.0, 3.0}).is_nonneg());
  CHECK_FALSE(FuncOnSpace(s, {1.0, -2.0, 3.0}).is_nonneg());
  CHECK_THROWS_AS(FuncOnSpace(s, {1.0, -kInf, 0.0}), InputError);
}
