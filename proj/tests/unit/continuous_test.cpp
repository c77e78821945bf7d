#include <doctest.h>

#include <cmath>
#include <random>

#include "nagata/continuous_model.hpp"
#include "nagata/error.hpp"

using namespace nagata;

namespace {

Point random_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2, 2);
  Point p(n);
  for (auto& x : p) x = u(rng);
  return p;
}

// Left translation L_g pushed forward by central differences.
Point pushforward(const ContinuousGroupModel& m, const Point& g, const Point& x, const Point& v) {
  const double eps = 1e-6;
  Point xp = x, xm = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] += eps * v[i];
    xm[i] -= eps * v[i];
  }
  const auto a = m.multiply(g, xp), b = m.multiply(g, xm);
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (a[i] - b[i]) / (2 * eps);
  return out;
}

}  // namespace

TEST_CASE("filiform law is a group law") {
  const auto m = filiform4_model();
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto x = random_point(rng, 4), y = random_point(rng, 4), z = random_point(rng, 4);
    const auto l = m->multiply(m->multiply(x, y), z), r = m->multiply(x, m->multiply(y, z));
    for (int i = 0; i < 4; ++i) CHECK(l[i] == doctest::Approx(r[i]).epsilon(1e-12));
    const auto e = m->multiply(x, m->inverse(x));
    for (int i = 0; i < 4; ++i) CHECK(e[i] == doctest::Approx(0).epsilon(1e-12));
  }
}

TEST_CASE("filiform commutators follow the algebra") {
  const auto m = filiform4_model();
  const double t = 1e-3;
  // [exp(t e1), exp(t e2)] ~ exp(t^2 e3).
  const Point a{t, 0, 0, 0}, b{0, t, 0, 0};
  const auto c = m->multiply(m->multiply(a, b), m->multiply(m->inverse(a), m->inverse(b)));
  CHECK(c[2] / (t * t) == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("metric tensor is the identity at the identity") {
  const auto m = filiform4_model();
  const auto G = m->metric_tensor(m->identity());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(G[i][j] == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("coframe is left invariant") {
  const auto m = filiform4_model();
  std::mt19937_64 rng(11);
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const auto g = random_point(rng, 4), x = random_point(rng, 4), v = random_point(rng, 4);
    const double before = m->norm(x, v);
    const double after = m->norm(m->multiply(g, x), pushforward(*m, g, x, v));
    worst = std::max(worst, std::abs(after - before) / before);
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("arity is checked") {
  const auto m = filiform4_model();
  CHECK_THROWS_AS(m->multiply(Point{1, 2}, Point{0, 0, 0, 0}), DimensionMismatch);
}

TEST_CASE("curve lengths") {
  const auto e = euclidean_model(2);
  CHECK(polyline_length(*e, {{0, 0}, {3, 4}, {3, 5}}) == doctest::Approx(6));
  const auto circle = [](double t) { return Point{std::cos(2 * M_PI * t), std::sin(2 * M_PI * t)}; };
  CHECK(curve_length(*e, circle, 2000) == doctest::Approx(2 * M_PI).epsilon(1e-5));
  // Straight lines through the identity along e1 are geodesic in every coframe.
  const auto f = filiform4_model();
  CHECK(polyline_length(*f, {{0, 0, 0, 0}, {2, 0, 0, 0}}) == doctest::Approx(2));
}

TEST_CASE("grid distance on the Euclidean plane") {
  GridOptions o;
  o.h = 0.1;
  const auto e = euclidean_model(2);
  const auto axis = grid_distance(e, {0, 0}, {1, 0}, o);
  CHECK(axis.value == doctest::Approx(1).epsilon(1e-5));
  const auto diag = grid_distance(e, {0, 0}, {1, 1}, o);
  CHECK(diag.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  // Off-axis directions are overestimated by at most the octagonal factor.
  const auto skew = grid_distance(e, {0, 0}, {2, 1}, o);
  CHECK(skew.value >= std::sqrt(5.0) - 1e-6);
  CHECK(skew.value <= std::sqrt(5.0) * 1.09);
}

TEST_CASE("grid refuses oversize boxes and reports outside points") {
  GridOptions o;
  o.h = 0.01;
  o.max_nodes = 1000;
  CHECK_THROWS_AS(grid_distance(euclidean_model(2), {0, 0}, {1, 1}, o), ResourceError);
  GridMetricGraph g(euclidean_model(2), {0, 0}, {1, 1}, {0, 0}, GridOptions{});
  CHECK(g.contains({0.5, 0.5}));
  CHECK_FALSE(g.contains({2, 0}));
  CHECK_THROWS_AS(g.distances({0, 0}, {{3, 3}}), ValidationError);
}

TEST_CASE("translated e2 segments grow with the translator") {
  const auto m = filiform4_model();
  GridOptions o;
  o.h = 0.25;
  const std::vector<Point> seg{{0, 0, 0, 0}, {0, 0.5, 0, 0}};
  const auto near = translated_set_diameter(m, seg, {1, 0, 0, 0}, o);
  const auto far = translated_set_diameter(m, seg, {2, 0, 0, 0}, o);
  CHECK(near.value > 0.4);
  CHECK(far.value > near.value);
}
