#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "nagata/cover.hpp"
#include "nagata/error.hpp"
#include "oracles.hpp"

using namespace nagata;
using Index = WordBall::Index;

namespace {

std::vector<std::vector<std::size_t>> sorted_components(std::vector<std::vector<Index>> comps) {
  std::vector<std::vector<std::size_t>> out;
  for (auto& c : comps) out.emplace_back(c.begin(), c.end());
  std::sort(out.begin(), out.end());
  return out;
}

Cover single_family(const WordBall& b, double s, double claimed) {
  Cover c;
  c.model = b.model().name();
  c.radius = b.radius();
  c.scale = s;
  c.claimed_bound = claimed;
  Cover::Set all(b.size());
  std::iota(all.begin(), all.end(), Index{0});
  c.families = {{all}};
  return c;
}

}  // namespace

TEST_CASE("components on Z with strict inequality") {
  const auto b = bfs_ball(abelian_model(1), 6);
  const std::vector<Index> S{*b->find(Element{0}), *b->find(Element{1}), *b->find(Element{5})};
  const auto c = s_scale_components(*b, S, 2);
  REQUIRE(c.size() == 2);
  CHECK(c[0].size() + c[1].size() == 3);
  CHECK(s_scale_components(*b, S, 1).size() == 3);
  CHECK(s_scale_components(*b, S, 4.5).size() == 1);
  CHECK(s_scale_components(*b, S, 4).size() == 2);
}

TEST_CASE("components agree with transitive closure on random Heisenberg subsets") {
  const auto b = bfs_ball(heisenberg_model(), 6);
  const auto d = oracle::all_pairs(*b);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pick(0, b->size() - 1);
  const double scales[] = {1, 1.5, 2, 2.5, 3, 4.5};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> subset;
    for (int k = 0; k < 100; ++k) subset.push_back(pick(rng));
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    const double s = scales[trial % 6];
    std::vector<Index> idx(subset.begin(), subset.end());
    const auto fast = sorted_components(s_scale_components(*b, idx, s));
    const auto slow =
        oracle::transitive_closure(subset, [&](std::size_t x, std::size_t y) { return double(d[x][y]); }, s);
    CAPTURE(trial);
    CHECK(fast == slow);
  }
}

TEST_CASE("components on a metric view") {
  const auto v = MetricView::of_line({0, 1, 5, 5.5});
  const std::vector<std::size_t> all{0, 1, 2, 3};
  CHECK(s_scale_components(v, all, 2).size() == 2);
  CHECK(s_scale_components(v, all, 0.5).size() == 4);
}

TEST_CASE("subset diameter is exact") {
  const auto b = bfs_ball(heisenberg_model(), 6);
  const auto d = oracle::all_pairs(*b);
  BallBfs bfs(b);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, b->size() - 1);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Index> m;
    for (int k = 0; k < 3 + trial; ++k) m.push_back(static_cast<Index>(pick(rng)));
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    std::uint32_t brute = 0;
    for (auto x : m)
      for (auto y : m) brute = std::max(brute, d[x][y]);
    CHECK(subset_diameter(bfs, m) == brute);
    CHECK(subset_diameter_lower_bound(bfs, m) <= brute);
  }
}

TEST_CASE("verify_control matches brute force on small carriers") {
  SUBCASE("Z^2 bricks") {
    const auto b = bfs_ball(abelian_model(2), 20);
    REQUIRE(b->size() <= 2000);
    const auto d = oracle::all_pairs(*b);
    for (double s : {1.0, 2.0, 3.0}) {
      const auto c = brick_cover(b, s);
      const auto e = verify_control(c, b);
      const auto r = oracle::brute_verify(c, *b, s, d);
      CHECK(e.verified_bound == std::max(r.interior, r.boundary));
      CHECK(e.boundary_judged);
      CHECK(e.boundary_bound == r.boundary);
      CHECK(e.pass);
    }
  }
  SUBCASE("Heisenberg greedy covers") {
    const auto b = bfs_ball(heisenberg_model(), 6);
    REQUIRE(b->size() <= 2000);
    const auto d = oracle::all_pairs(*b);
    for (int rho : {1, 2, 3}) {
      const auto c = greedy_cover(b, rho, 2);
      const auto e = verify_control(c, b);
      const auto r = oracle::brute_verify(c, *b, 2, d);
      CHECK(e.verified_bound == r.interior);
      CHECK_FALSE(e.boundary_judged);
      CHECK(e.boundary_bound <= r.boundary);
    }
  }
}

TEST_CASE("a single family on a Z ball fails a small bound") {
  const auto b = bfs_ball(abelian_model(1), 50);
  const auto e = verify_control(single_family(*b, 2, 10), b);
  CHECK(e.components == 1);
  CHECK(e.boundary_bound == 100);
  CHECK_FALSE(e.pass);
  // Hops must be strictly shorter than s, so at s = 1 every point is alone.
  CHECK(verify_control(single_family(*b, 1, 10), b).components == b->size());
}

TEST_CASE("alternating intervals have diameter below s") {
  const auto b = bfs_ball(abelian_model(1), 50);
  for (double s : {2.0, 5.0, 7.5}) {
    const auto c = interval_cover(b, s);
    CHECK(c.families.size() == 2);
    const auto e = verify_control(c, b);
    CHECK(e.verified_bound <= s);
    CHECK(e.boundary_bound <= s);
    CHECK(e.pass);
  }
}

TEST_CASE("empty families contribute zero") {
  const auto b = bfs_ball(abelian_model(1), 5);
  auto c = interval_cover(b, 2);
  c.families.emplace_back();
  const auto e = verify_control(c, b);
  REQUIRE(e.per_family.size() == 3);
  CHECK(e.per_family[2].components == 0);
  CHECK(e.per_family[2].interior_bound == 0);
}

TEST_CASE("uncovered points are refused with a witness") {
  const auto b = bfs_ball(abelian_model(1), 5);
  auto c = interval_cover(b, 2);
  c.families[0].clear();
  CHECK_THROWS_AS(verify_control(c, b), WitnessError);
  c = interval_cover(b, 2);
  c.families[0][0].push_back(10000);
  CHECK_THROWS_AS(verify_control(c, b), ValidationError);
}

TEST_CASE("brick families are separated at scale s") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const auto b = bfs_ball(abelian_model(n), n == 3 ? 10 : 24);
    for (double s : {2.0, 3.0, 4.0}) {
      const auto c = brick_cover(b, s);
      CHECK(c.families.size() == static_cast<std::size_t>(n + 1));
      // Every set of a family is its own s-component.
      for (const auto& fam : c.families) {
        std::vector<Index> pts;
        for (const auto& set : fam) pts.insert(pts.end(), set.begin(), set.end());
        CHECK(s_scale_components(*b, pts, s).size() == fam.size());
      }
      CHECK(verify_control(c, b).pass);
    }
  }
  const auto z1 = bfs_ball(abelian_model(1), 30);
  CHECK(verify_control(brick_cover(z1, 2), z1).verified_bound <= 6);
  const auto z0 = bfs_ball(abelian_model(0), 3);
  const auto c0 = brick_cover(z0, 2);
  CHECK(c0.families.size() == 1);
  CHECK(c0.claimed_bound == 0);
  CHECK(verify_control(c0, z0).pass);
}

TEST_CASE("brick cover needs a Z^n ball and s >= 1") {
  CHECK_THROWS_AS(brick_cover(bfs_ball(heisenberg_model(), 2), 2), ValidationError);
  CHECK_THROWS_AS(brick_cover(bfs_ball(abelian_model(2), 2), 0.5), ValidationError);
}

TEST_CASE("neighborhood enlargement") {
  const auto D = neighborhood_enlarge([](double s) { return 2 * s; }, 3);
  CHECK(D(0) == 18);
  CHECK(D(5) == 28);
  CHECK(neighborhood_enlarge([](double s) { return 2 * s; }, 0)(7) == 14);
  const LinearControl L{2, 0};
  CHECK(neighborhood_enlarge(L, 3) == LinearControl{2, 18});
  const LinearControl M{1.5, 4};
  CHECK(neighborhood_enlarge(neighborhood_enlarge(M, 2), 5) == neighborhood_enlarge(M, 7));
  CHECK(neighborhood_enlarge(M, 0) == M);
}

TEST_CASE("exact sequence on Z^2 over its second factor") {
  const auto g = bfs_ball(abelian_model(2), 20);
  const auto h = bfs_ball(abelian_model(1), 20);
  for (double s : {2.0, 4.0}) {
    ExactSequenceParts parts;
    const auto c = exact_sequence_cover(g, h, interval_cover(h, s), abelian_first_factor_fibers(), &parts);
    CHECK(c.families.size() == 4);
    CHECK(c.claimed_bound == doctest::Approx(parts.D_K + 2 * parts.B_H));
    const auto e = verify_control(c, g);
    CHECK(e.pass);
  }
}

TEST_CASE("trivial K pulls back the H cover") {
  const auto g = bfs_ball(abelian_model(1), 10);
  const auto h = bfs_ball(abelian_model(1), 10);
  const auto ch = interval_cover(h, 3);
  const auto c = exact_sequence_cover(g, h, ch, trivial_fibers([](ElementView x) { return Element(x.begin(), x.end()); }));
  REQUIRE(c.families.size() == ch.families.size());
  for (std::size_t j = 0; j < c.families.size(); ++j) {
    std::vector<Index> a, b;
    for (const auto& set : c.families[j]) a.insert(a.end(), set.begin(), set.end());
    for (const auto& set : ch.families[j]) b.insert(b.end(), set.begin(), set.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("Heisenberg brick cover covers the ball with four families") {
  const auto b = bfs_ball(heisenberg_model(), 10);
  const auto c = heisenberg_brick_cover(b, 2);
  CHECK(c.families.size() == 4);
  CHECK(c.parameters.contains("fiber_period"));
  const auto e = verify_control(c, b);
  CHECK(e.families == 4);
  CHECK(e.claimed_bound == c.claimed_bound);
}

TEST_CASE("cover JSON round trip") {
  const auto b = bfs_ball(abelian_model(2), 8);
  const auto c = brick_cover(b, 2);
  const auto j = cover_to_json(c, *b);
  const auto back = cover_from_json(j, *b);
  CHECK(back.families == c.families);
  CHECK(back.claimed_bound == c.claimed_bound);
  CHECK(back.construction == c.construction);
  auto missing = j;
  missing.erase("scale");
  try {
    cover_from_json(missing, *b);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.fields() == std::vector<std::string>{"scale"});
  }
  CHECK_THROWS_AS(cover_from_json(j, *bfs_ball(abelian_model(2), 7)), ValidationError);
  auto stray = j;
  stray["families"][0][0].push_back(std::vector<int>{100, 100});
  CHECK_THROWS_AS(cover_from_json(stray, *b), ValidationError);
}

TEST_CASE("certificate linearity") {
  const auto b = bfs_ball(abelian_model(2), 40);
  std::vector<ControlEntry> entries;
  for (double s : {2.0, 4.0, 8.0}) entries.push_back(verify_control(brick_cover(b, s), b));
  const auto c = certify("brick", b, entries);
  CHECK(c.all_verified);
  CHECK(c.linear);
  CHECK(c.pass);
  entries.pop_back();
  CHECK_FALSE(certify("brick", b, entries).pass);
}

TEST_CASE("greedy coloring is proper") {
  const auto b = bfs_ball(abelian_model(2), 12);
  const auto g = greedy_coloring(b, 2, 2);
  BallBfs bfs(b);
  for (Index v = 0; v < b->size(); v += 3) {
    const auto& row = bfs.from(v, 1);
    for (Index w = 0; w < b->size(); ++w)
      if (row[w] == 1 && g.cluster_of[v] != g.cluster_of[w]) CHECK(g.color[g.cluster_of[v]] != g.color[g.cluster_of[w]]);
  }
  const auto curve = empirical_control_curve(b, 2, {2, 4}, GreedyOptions{6});
  REQUIRE(curve.size() == 2);
  for (const auto& cs : curve)
    if (cs.bound) CHECK(cs.colors <= 3);
}

TEST_CASE("greedy coloring stops past the color budget") {
  const auto b = bfs_ball(abelian_model(2), 12);
  const auto full = greedy_coloring(b, 1, 3);
  REQUIRE(full.complete);
  REQUIRE(full.colors > 2);
  const auto cut = greedy_coloring(b, 1, 3, 2);
  CHECK_FALSE(cut.complete);
  CHECK(cut.colors == 3);
  CHECK(cut.cluster_of == full.cluster_of);
  CHECK(greedy_coloring(b, 1, 3, full.colors).complete);
}
