#include <catch2/catch_amalgamated.hpp>

#include "dualcone/instance_gen.hpp"
#include "dualcone/lp_engine.hpp"
#include "dualcone/rng.hpp"

using namespace dualcone;
using namespace dualcone::lp;

namespace {

Problem textbook_box() {
  Problem p;
  p.sense = Sense::Max;
  p.c = {1.0, 1.0};
  p.rows = {{{1.0, 1.0}, Rel::Le, 1.0}};
  return p;
}

}  // namespace

TEST_CASE("simplex textbook case") {
  Solution s = solve(textbook_box());
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == Catch::Approx(1.0));
  CHECK(s.primal[0] + s.primal[1] == Catch::Approx(1.0));
  CHECK(s.residuals.primal <= 1e-9);
  CHECK(s.residuals.dual <= 1e-9);
  CHECK(s.residuals.slackness <= 1e-9);
  CHECK(s.residuals.duality_gap <= 1e-7 * (1.0 + std::abs(s.value)));
}

TEST_CASE("contradictory bounds are infeasible with a Farkas certificate") {
  Problem p;
  p.sense = Sense::Max;
  p.c = {1.0};
  p.rows = {{{1.0}, Rel::Le, -1.0}};
  Solution s = solve(p);
  REQUIRE(s.status == Status::Infeasible);
  CHECK(farkas_proves_infeasible(p, s.farkas));
}

TEST_CASE("free ray is unbounded with a ray certificate") {
  Problem p;
  p.sense = Sense::Max;
  p.c = {1.0};
  // no rows: x >= 0 alone
  Solution s = solve(p);
  REQUIRE(s.status == Status::Unbounded);
  CHECK(ray_proves_unbounded(p, s.ray));
}

TEST_CASE("check_certificates spots injected defects") {
  Problem p = textbook_box();
  Solution s = solve(p);
  Residuals clean = check_certificates(p, s);
  CHECK(clean.primal <= 1e-12);
  CHECK(clean.dual <= 1e-12);
  CHECK(clean.slackness <= 1e-12);

  Solution bumped = s;
  bumped.primal[0] += 1e-3;
  Residuals r = check_certificates(p, bumped);
  CHECK(r.primal == Catch::Approx(1e-3).margin(1e-9));

  Solution flipped = s;
  flipped.dual[0] = -flipped.dual[0];
  Residuals r2 = check_certificates(p, flipped);
  CHECK(r2.dual > 0.0);
}

TEST_CASE("equality rows and free variables") {
  // min x + y  s.t.  x + y = 2, x - y >= -1, x free, y >= 0.
  Problem p;
  p.sense = Sense::Min;
  p.c = {1.0, 1.0};
  p.rows = {{{1.0, 1.0}, Rel::Eq, 2.0}, {{1.0, -1.0}, Rel::Ge, -1.0}};
  p.bounds = {{std::nullopt, std::nullopt}, {0.0, std::nullopt}};
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == Catch::Approx(2.0));
  CHECK(s.primal[0] + s.primal[1] == Catch::Approx(2.0));
}

TEST_CASE("upper bounds and shifted lower bounds") {
  // max 2x + y  s.t.  x + y <= 4, 1 <= x <= 3, 0 <= y <= 5.
  Problem p;
  p.sense = Sense::Max;
  p.c = {2.0, 1.0};
  p.rows = {{{1.0, 1.0}, Rel::Le, 4.0}};
  p.bounds = {{1.0, 3.0}, {0.0, 5.0}};
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == Catch::Approx(7.0));  // x=3, y=1
  CHECK(s.primal[0] == Catch::Approx(3.0));
  CHECK(s.primal[1] == Catch::Approx(1.0));
  Residuals r = check_certificates(p, s);
  CHECK(r.duality_gap <= 1e-9);

  // Upper-bounded-only variable.
  Problem q;
  q.sense = Sense::Max;
  q.c = {1.0};
  q.rows = {};
  q.bounds = {{std::nullopt, 2.5}};
  Solution sq = solve(q);
  REQUIRE(sq.status == Status::Optimal);
  CHECK(sq.value == Catch::Approx(2.5));
}

TEST_CASE("redundant equality rows are handled") {
  Problem p;
  p.sense = Sense::Max;
  p.c = {1.0, 1.0};
  p.rows = {{{1.0, 1.0}, Rel::Eq, 1.0}, {{2.0, 2.0}, Rel::Eq, 2.0}};
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == Catch::Approx(1.0));
}

TEST_CASE("degenerate instances terminate (Bland)") {
  // Classic cycling-prone structure.
  Problem p;
  p.sense = Sense::Min;
  p.c = {-0.75, 150.0, -0.02, 6.0};
  p.rows = {{{0.25, -60.0, -0.04, 9.0}, Rel::Le, 0.0},
            {{0.5, -90.0, -0.02, 3.0}, Rel::Le, 0.0},
            {{0.0, 0.0, 1.0, 0.0}, Rel::Le, 1.0}};
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == Catch::Approx(-0.05));
}

TEST_CASE("vertex enumeration examples") {
  Polyhedron box{{{2.0, 0.0}, {0.0, 2.0}}, {1.0, 1.0}};
  auto verts = enumerate_vertices(box);
  REQUIRE(verts.size() == 4);
  std::vector<std::vector<double>> expect{{0, 0}, {0.5, 0}, {0, 0.5}, {0.5, 0.5}};
  for (const auto& e : expect) {
    bool found = false;
    for (const auto& v : verts)
      if (std::abs(v[0] - e[0]) < 1e-12 && std::abs(v[1] - e[1]) < 1e-12) found = true;
    CHECK(found);
  }

  Polyhedron origin{{{1.0, 1.0}}, {0.0}};
  auto only = enumerate_vertices(origin);
  REQUIRE(only.size() == 1);
  CHECK(only[0] == std::vector<double>{0.0, 0.0});

  Polyhedron empty{{{-1.0}, {1.0}}, {-1.0, 0.0}};
  CHECK(enumerate_vertices(empty).empty());

  Polyhedron huge{std::vector<std::vector<double>>(25, std::vector<double>(2, 1.0)),
                  std::vector<double>(25, 1.0)};
  CHECK_THROWS_AS(enumerate_vertices(huge), InputError);
}

TEST_CASE("random LPs: strong duality, certificates, determinism") {
  Rng rng(20240817);
  int optimal = 0, infeasible = 0, unbounded = 0;
  for (int rep = 0; rep < 400; ++rep) {
    Problem p = gen::random_lp(rng);
    Solution s;
    try {
      s = solve(p);
    } catch (const SolverStall&) {
      FAIL("solver stalled on a random instance");
    }
    if (s.status == Status::Optimal) {
      ++optimal;
      Residuals r = check_certificates(p, s);
      CHECK(r.primal <= 1e-9);
      CHECK(r.dual <= 1e-9);
      CHECK(r.slackness <= 1e-7);
      CHECK(r.duality_gap <= 1e-7 * (1.0 + std::abs(s.value)));
    } else if (s.status == Status::Infeasible) {
      ++infeasible;
      CHECK(farkas_proves_infeasible(p, s.farkas));
    } else {
      ++unbounded;
      CHECK(ray_proves_unbounded(p, s.ray));
    }
    // Determinism: bit-identical repeat.
    Solution s2 = solve(p);
    CHECK(s2.status == s.status);
    CHECK(s2.value == s.value);
    CHECK(s2.primal == s.primal);
    CHECK(s2.dual == s.dual);
  }
  // The generator should exercise all three statuses.
  CHECK(optimal > 100);
  CHECK(infeasible > 10);
  CHECK(unbounded > 10);
}

TEST_CASE("solve agrees with the vertex oracle on bounded polytopes") {
  Rng rng(99);
  for (int rep = 0; rep < 150; ++rep) {
    Polyhedron poly;
    Problem p = gen::random_bounded_lp(rng, &poly);
    Solution s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    auto verts = enumerate_vertices(poly);
    REQUIRE_FALSE(verts.empty());
    double oracle = max_over_vertices(p.c, verts);
    CHECK(std::abs(s.value - oracle) <= 1e-7 * (1.0 + std::abs(oracle)));
  }
}

TEST_CASE("ill-posed input is rejected") {
  Problem p;
  p.c = {1.0, kInf};
  CHECK_THROWS_AS(solve(p), InputError);
  Problem q;
  q.c = {1.0};
  q.rows = {{{1.0, 2.0}, Rel::Le, 1.0}};
  CHECK_THROWS_AS(solve(q), InputError);
  Problem r;
  r.c = {1.0};
  r.bounds = {{2.0, 1.0}};
  CHECK_THROWS_AS(solve(r), InputError);
}
