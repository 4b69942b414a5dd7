#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "trajbench/geometry.hpp"
#include "trajbench/rng.hpp"

using namespace trajbench;

TEST_CASE("displacement arithmetic") {
  const Position a{1.0, 1.0};
  const Position b{3.0, 4.0};
  const Displacement d = b - a;
  CHECK(d.dx == 2.0);
  CHECK(d.dy == 3.0);
  const Position c = a + d;
  CHECK(c.x == b.x);
  CHECK(c.y == b.y);
  const Displacement sum = d + Displacement{1.0, -1.0};
  CHECK(sum.dx == 3.0);
  CHECK(sum.dy == 2.0);
  const Displacement diff = d - Displacement{1.0, -1.0};
  CHECK(diff.dx == 1.0);
  CHECK(diff.dy == 4.0);
  const Displacement scaled = 2.0 * d;
  CHECK(scaled.dx == 4.0);
  CHECK(scaled.dy == 6.0);
}

TEST_CASE("norms and distances") {
  CHECK(norm(Displacement{3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(distance(Position{0.0, 0.0}, Position{3.0, 4.0}) ==
        doctest::Approx(5.0).epsilon(1e-12));
  CHECK(norm(Displacement{0.0, 0.0}) == 0.0);
}

TEST_CASE("rotation moves counterclockwise and preserves length") {
  const Displacement east{1.0, 0.0};
  const Displacement north = rotated(east, std::numbers::pi / 2.0);
  CHECK(north.dx == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(north.dy == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Displacement d{uniform_in(rng, -5.0, 5.0), uniform_in(rng, -5.0, 5.0)};
    const double angle = uniform_in(rng, -10.0, 10.0);
    CHECK(norm(rotated(d, angle)) == doctest::Approx(norm(d)).epsilon(1e-12));
  }
}

TEST_CASE("rotations compose additively") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const Displacement d{uniform_in(rng, -3.0, 3.0), uniform_in(rng, -3.0, 3.0)};
    const double a = uniform_in(rng, -4.0, 4.0);
    const double b = uniform_in(rng, -4.0, 4.0);
    const Displacement once = rotated(d, a + b);
    const Displacement twice = rotated(rotated(d, a), b);
    CHECK(once.dx == doctest::Approx(twice.dx).epsilon(1e-10));
    CHECK(once.dy == doctest::Approx(twice.dy).epsilon(1e-10));
  }
}

TEST_CASE("rotation about a center") {
  const Position p{2.0, 0.0};
  const Position center{1.0, 0.0};
  const Position opposite = rotated_about(p, center, std::numbers::pi);
  CHECK(opposite.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(opposite.y == doctest::Approx(0.0).epsilon(1e-12));
  const Position self = rotated_about(center, center, 1.234);
  CHECK(self.x == center.x);
  CHECK(self.y == center.y);
}

TEST_CASE("degree conversion") {
  CHECK(180.0 * kDegreesToRadians == doctest::Approx(std::numbers::pi));
}

TEST_CASE("finiteness checks") {
  CHECK(is_finite(Position{1.0, 2.0}));
  CHECK_FALSE(is_finite(Position{std::nan(""), 2.0}));
  CHECK_FALSE(is_finite(Position{1.0, INFINITY}));
}

TEST_CASE("uniform_unit stays in the half-open unit interval") {
  Rng rng(3);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform_unit(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("gaussian has the right first two moments") {
  Rng rng(5);
  const int n = 50000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = gaussian(rng);
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("shuffled_indices is a seeded permutation") {
  Rng rng(9);
  const auto idx = shuffled_indices(100, rng);
  CHECK(idx.size() == 100);
  CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 100);

  Rng r1(42), r2(42);
  CHECK(shuffled_indices(50, r1) == shuffled_indices(50, r2));

  Rng r3(43);
  CHECK(shuffled_indices(50, r3) != idx);

  Rng r4(1);
  CHECK(shuffled_indices(0, r4).empty());
  CHECK(shuffled_indices(1, r4) == std::vector<std::size_t>{0});
}

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("derive_seed separates jobs") {
  const auto s1 = derive_seed(0, "hotel");
  const auto s2 = derive_seed(0, "eth");
  const auto s3 = derive_seed(1, "hotel");
  CHECK(s1 != s2);
  CHECK(s1 != s3);
  CHECK(derive_seed(0, "hotel") == s1);
}
