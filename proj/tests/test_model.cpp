#include <doctest.h>

#include <cmath>
#include <random>

#include "aimd/model.hpp"
#include "aimd/roots.hpp"

using namespace aimd;

TEST_CASE("solve_bracketed finds roots and rejects bad brackets") {
  auto f = [](double x) { return x * x - 2.0; };
  CHECK(roots::solve_bracketed(f, 0.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(roots::solve_bracketed(f, 2.0, 3.0), roots::RootFindError);
  CHECK(roots::solve_bracketed(f, 2.0, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(roots::grow_upper_bracket(f, f(0.0), 0.5) == 2.0);
}

TEST_CASE("normalize divides by the increment") {
  FluidParams p{1e7, 0.24, 40000.0, 0.0, 0.5, Unit::bits};
  const NormalizedParams n = normalize(p);
  CHECK(n.q == doctest::Approx(60.0).epsilon(1e-15));
  CHECK(n.b == 0.0);
  CHECK(n.A() == n.q);

  p = FluidParams{2.0, 3.0, 6.0, 12.0, 0.3};
  CHECK(normalize(p).q == 1.0);
  CHECK(normalize(p).b == 2.0);

  CHECK_THROWS_AS(normalize(FluidParams{0.0, 1.0, 1.0, 0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(normalize(FluidParams{1.0, -1.0, 1.0, 0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(normalize(FluidParams{1.0, 1.0, 0.0, 0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(normalize(FluidParams{1.0, 1.0, 1.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(normalize(FluidParams{1.0, 1.0, 1.0, -1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("segment_state closed form") {
  const State s0 = segment_state(1.2, 0.3, 0.9, 0.0);
  CHECK(s0.v == 1.2);
  CHECK(s0.y == doctest::Approx(0.3).epsilon(1e-15));

  // v0 = q + y0 leaves coefficient 1.
  for (double s : {0.1, 1.0, 4.0}) {
    CHECK(segment_state(1.4, 0.5, 0.9, s).y ==
          doctest::Approx(std::exp(-s) + s - 1.0 + 0.5).epsilon(1e-14));
  }

  // Closure of the 1-cycle at beta=0.5, q=0.9, b=0.7.
  const double s1 = 0.39150627648597384;
  CHECK(segment_state(s1 + 1.0, 0.7, 0.9, s1).y == doctest::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("segment_state satisfies dy/ds = v - y - q") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const double v0 = 0.1 + 5.0 * U(rng), y0 = 3.0 * U(rng), q = 0.05 + 5.0 * U(rng);
    const double s = 3.0 * U(rng);
    const State a = segment_state(v0, y0, q, s - h);
    const State b = segment_state(v0, y0, q, s + h);
    const State mid = segment_state(v0, y0, q, s);
    const double slope = (b.y - a.y) / (2.0 * h);
    const double rhs = mid.v - mid.y - q;
    CHECK(std::abs(slope - rhs) <= 1e-6 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("jump picks the smallest sufficient multiplicity") {
  JumpResult j = jump(1.5, 1.0, 0.5);
  CHECK(j.k == 1);
  CHECK(j.v_after == 0.75);
  j = jump(2.5, 1.0, 0.5);
  CHECK(j.k == 2);
  CHECK(j.v_after == 0.625);
  j = jump(0.9, 1.0, 0.5);
  CHECK(j.k == 1);
  CHECK(j.v_after == 0.45);
  CHECK_THROWS_AS(jump(1e300, 1e-300, 0.999999, 1000), std::domain_error);
}

TEST_CASE("jump applied again needs one step") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double beta = 0.05 + 0.9 * U(rng), A = 0.1 + 5.0 * U(rng), v = 20.0 * U(rng) + 1e-3;
    const JumpResult j = jump(v, A, beta);
    CHECK(j.v_after < A);
    if (j.k > 1) CHECK(j.v_after / beta >= A);
    const JumpResult again = jump(j.v_after, A, beta);
    CHECK(again.k == 1);
    CHECK(again.v_after == doctest::Approx(beta * j.v_after).epsilon(1e-15));
  }
}

TEST_CASE("hit_time_to_level special cases") {
  // On the level with v0 = A: immediate.
  CHECK(*hit_time_to_level(1.6, 0.7, 0.9, 0.7, Direction::rising) == 0.0);

  // From (v=q, y=0) the level b is reached at r with e^{-r} + r - 1 = b.
  for (double b : {0.01, 0.3, 2.0, 50.0}) {
    const double s = *hit_time_to_level(0.9, 0.0, 0.9, b, Direction::rising);
    CHECK(std::exp(-s) + s - 1.0 == doctest::Approx(b).epsilon(1e-12));
    CHECK(s == doctest::Approx(fill_time_from_empty(b)).epsilon(1e-13));
  }

  // Return time of the 1-cycle at beta=0.5, q=0.9, b=0.7.
  const double v0 = 1.3915062764859738;
  CHECK(*hit_time_to_level(v0, 0.7, 0.9, 0.7, Direction::rising) ==
        doctest::Approx(0.39150627648597384).epsilon(1e-13));

  // Never reached.
  CHECK_FALSE(hit_time_to_level(1.5, 0.3, 0.9, 0.0, Direction::falling).has_value());
  CHECK_FALSE(hit_time_to_level(0.8, 0.5, 0.9, 0.1, Direction::falling).has_value());
}

TEST_CASE("hit_time_to_level lands on the level") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int falling = 0, rising = 0;
  for (int i = 0; i < 500; ++i) {
    const double q = 0.05 + 5.0 * U(rng), b = 3.0 * U(rng);
    const double v0 = 0.05 + (q + b) * U(rng), y0 = b * U(rng);
    for (double level : {0.0, b}) {
      for (Direction d : {Direction::rising, Direction::falling}) {
        const auto s = hit_time_to_level(v0, y0, q, level, d);
        if (!s) continue;
        (d == Direction::falling ? falling : rising)++;
        CHECK(*s >= 0.0);
        CHECK(std::abs(segment_state(v0, y0, q, *s).y - level) <= 1e-12 * std::max(1.0, level));
      }
    }
  }
  CHECK(falling > 50);
  CHECK(rising > 50);
}

TEST_CASE("slide_on_floor and the clipping threshold") {
  CHECK(slide_on_floor(0.9, 0.9) == 0.0);
  CHECK(slide_on_floor(0.4, 0.9) == doctest::Approx(0.5));
  CHECK_THROWS_AS(slide_on_floor(1.0, 0.9), std::invalid_argument);

  for (double b : {0.05, 0.3, 1.0, 7.0}) {
    const double S = clipping_threshold(b);
    CHECK((1.0 + b + S) * std::exp(-S) == doctest::Approx(1.0).epsilon(1e-13));
    // From (y=b, v=q-S) the queue touches zero at s=S and only there.
    const double q = 2.0;
    const auto m = segment_minimum(q - S, b, q);
    REQUIRE(m.has_value());
    CHECK(m->s == doctest::Approx(S).epsilon(1e-12));
    CHECK(std::abs(m->y) <= 1e-12);
  }
}

TEST_CASE("integrate_segment matches quadrature") {
  const double v0 = 0.8, y0 = 0.4, q = 0.9, L = 2.3;
  const int n = 20000;
  double iy = 0.0, iy2 = 0.0, iv = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) * L / n;
    const State st = segment_state(v0, y0, q, s);
    iy += st.y;
    iy2 += st.y * st.y;
    iv += st.v;
  }
  const SegmentIntegrals in = integrate_segment(v0, y0, q, L);
  CHECK(in.y == doctest::Approx(iy * L / n).epsilon(1e-8));
  CHECK(in.y2 == doctest::Approx(iy2 * L / n).epsilon(1e-8));
  CHECK(in.v == doctest::Approx(iv * L / n).epsilon(1e-8));
}

TEST_CASE("window_ratio treats order zero as unbounded") {
  CHECK(window_ratio(0.5, 0).is_infinite());
  CHECK(window_ratio(0.5, 1).value() == 1.0);
  CHECK(window_ratio(0.5, 2).value() == doctest::Approx(1.0 / 3.0));
  CHECK(Extended::infinity() > Extended(1e308));
  CHECK(Extended(1.0) < Extended::infinity());
  CHECK((Extended::infinity() - 5.0).is_infinite());
}
