#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "aimd/cycle.hpp"
#include "aimd/limit_map.hpp"

using namespace aimd;

TEST_CASE("K is the smallest sufficient jump count") {
  CHECK(minimal_jump_count({0.5, 0.9, 0.7}) == 1);
  CHECK(minimal_jump_count({0.5, 0.9, 0.05}) == 2);  // A/(1+A) = 0.487 < 0.5
  for (double A : {0.1, 0.5, 1.0, 3.0, 30.0}) {
    const NormalizedParams p{0.7, A, 0.0};
    const int K = minimal_jump_count(p);
    CHECK(std::pow(0.7, K) < A / (1.0 + A));
    if (K > 1) CHECK(std::pow(0.7, K - 1) >= A / (1.0 + A));
  }
}

TEST_CASE("phi_k at the top of the range and at a fixed point") {
  const NormalizedParams p{0.5, 0.9, 0.7};
  const ReturnMapContext ctx = make_context(p);
  CHECK(phi_k(p.A(), 1, ctx) == doctest::Approx(0.5 * (p.A() + 1.0)));

  REQUIRE(ctx.V2.has_value());
  CHECK(*ctx.V2 == doctest::Approx(1.3915062764859738).epsilon(1e-12));
  CHECK(phi_k(*ctx.V2, ctx.K, ctx) == doctest::Approx(*ctx.V2).epsilon(1e-13));
  const auto cyc = solve_unclipped(p, 1);
  REQUIRE(cyc.has_value());
  CHECK(*ctx.V2 == doctest::Approx(cyc->v0).epsilon(1e-12));
}

TEST_CASE("phi_k is decreasing and contracts by beta^k") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const NormalizedParams p :
       {NormalizedParams{0.5, 0.9, 0.3}, NormalizedParams{0.3, 2.0, 1.0},
        NormalizedParams{0.8, 0.4, 0.2}, NormalizedParams{0.5, 0.9, 0.05}}) {
    const ReturnMapContext ctx = make_context(p);
    const double lo = p.beta * p.A(), hi = p.A();
    for (int k = 1; k <= ctx.K + 1; ++k) {
      for (int i = 0; i < 100; ++i) {
        double a = lo + (hi - lo) * U(rng), b = lo + (hi - lo) * U(rng);
        if (std::abs(a - b) < 1e-6) continue;
        if (a > b) std::swap(a, b);
        const double fa = phi_k(a, k, ctx), fb = phi_k(b, k, ctx);
        CHECK(fa > fb);
        CHECK(std::abs(fa - fb) / (b - a) < std::pow(p.beta, k) + 1e-9);
      }
    }
  }
}

TEST_CASE("varphi at the 1-cycle fixed point and in the clipped regime") {
  const ReturnMapContext ctx = make_context({0.5, 0.9, 0.7});
  const double v = 1.3915062764859738;
  const MapStep step = varphi(v, ctx);
  CHECK(step.v1 == doctest::Approx(v).epsilon(1e-12));
  CHECK(step.k == 1);
  CHECK_FALSE(step.clipped);

  const NormalizedParams small{0.5, 0.9, 0.05};
  const ReturnMapContext cctx = make_context(small);
  for (int i = 0; i <= 10; ++i) {
    const double v0 = small.beta * small.A() + (small.A() - small.beta * small.A()) * i / 10.5;
    const Limit lim = limit_value(v0, cctx);
    CHECK(lim.order == 2);
  }
  const Limit lim = limit_value(0.6, cctx);
  CHECK(varphi(lim.V, cctx).clipped);
}

TEST_CASE("start at q - S touches the floor without sliding") {
  const NormalizedParams p{0.5, 2.0, 0.6};
  const double S = clipping_threshold(p.b);
  const auto m = segment_minimum(p.q - S, p.b, p.q);
  REQUIRE(m.has_value());
  CHECK(std::abs(m->y) < 1e-12);
  const ReturnMapContext ctx = make_context(p);
  CHECK_FALSE(varphi(p.q - S, ctx).clipped);
  CHECK(varphi(p.q - S - 1e-3, ctx).clipped);
}

TEST_CASE("coexistence: basin boundary separates two limits") {
  const NormalizedParams p{0.5, 0.9, 0.3};
  const ReturnMapContext ctx = make_context(p);
  REQUIRE(ctx.d.has_value());
  CHECK(*ctx.d >= p.beta * p.A());
  CHECK(*ctx.d < p.A());
  CHECK(phi_k(*ctx.d, ctx.K, ctx) == doctest::Approx(p.A()).epsilon(1e-12));
  REQUIRE(ctx.V1.has_value());
  REQUIRE(ctx.V2.has_value());
  CHECK(p.beta * p.A() <= *ctx.V1);
  CHECK(*ctx.V1 <= *ctx.d);
  CHECK(*ctx.d < *ctx.V2);
  CHECK(*ctx.V2 < p.A());

  const Limit low = limit_value(p.beta * p.A() + 1e-6, ctx);
  const Limit high = limit_value(p.A() - 1e-6, ctx);
  CHECK(low.order == 2);
  CHECK(high.order == 1);
  CHECK(low.V == doctest::Approx(0.65030362780974182).epsilon(1e-12));
  CHECK(high.V == doctest::Approx(1.1323603254182067).epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double a = p.beta * p.A() + (*ctx.d - p.beta * p.A()) * U(rng);
    const double b = *ctx.d + (p.A() - *ctx.d) * (0.001 + 0.998 * U(rng));
    CHECK(limit_value(a, ctx).V == doctest::Approx(low.V).epsilon(1e-9));
    CHECK(limit_value(b, ctx).V == doctest::Approx(high.V).epsilon(1e-9));
  }

  const auto emp = empirical_basin_boundary(ctx);
  REQUIRE(emp.has_value());
  CHECK(*emp == doctest::Approx(*ctx.d).epsilon(1e-9));
}

TEST_CASE("single basin: no boundary and one limit") {
  const NormalizedParams p{0.5, 0.9, 0.7};
  const ReturnMapContext ctx = make_context(p);
  CHECK_FALSE(ctx.d.has_value());
  std::set<long long> limits;
  for (int i = 0; i < 20; ++i) {
    const double v0 = p.beta * p.A() + (p.A() - p.beta * p.A()) * (i + 0.5) / 20.0;
    limits.insert(std::llround(limit_value(v0, ctx).V * 1e9));
  }
  CHECK(limits.size() == 1);
  CHECK_FALSE(empirical_basin_boundary(ctx).has_value());
  const Limit at_fixed = limit_value(*ctx.V2, ctx);
  CHECK(at_fixed.V == doctest::Approx(*ctx.V2).epsilon(1e-12));
}

TEST_CASE("limit orders stay within K and K+1 and coexisting orders are consecutive") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const NormalizedParams p{0.1 + 0.8 * U(rng), 0.05 + 4.95 * U(rng), 3.0 * U(rng)};
    const ReturnMapContext ctx = make_context(p);
    const Limit a = limit_value(p.A() - 1e-6, ctx);
    const Limit b = limit_value(p.beta * p.A() + 1e-6, ctx);
    for (const Limit& l : {a, b}) CHECK((l.order == ctx.K || l.order == ctx.K + 1));
    CHECK(std::abs(a.order - b.order) <= 1);
  }
}

TEST_CASE("starting above A is brought in by one jump") {
  const ReturnMapContext ctx = make_context({0.5, 0.9, 0.7});
  CHECK(limit_value(10.0, ctx).V == doctest::Approx(1.3915062764859738).epsilon(1e-12));
}
