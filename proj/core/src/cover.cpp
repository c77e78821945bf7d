#include "nagata/cover.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "nagata/error.hpp"

namespace nagata {

using Index = WordBall::Index;

namespace {

struct DisjointSets {
  std::vector<std::uint32_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Largest integer distance that still counts as "< s".
int hop_limit(double s) {
  if (!(s > 0)) throw ValidationError("scale must be positive", {"scale"});
  return static_cast<int>(std::ceil(s)) - 1;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

template <class T>
std::vector<std::vector<T>> group_components(DisjointSets& ds, std::span<const T> members) {
  std::map<std::uint32_t, std::vector<T>> by_root;
  for (std::size_t i = 0; i < members.size(); ++i) by_root[ds.find(static_cast<std::uint32_t>(i))].push_back(members[i]);
  std::vector<std::vector<T>> out;
  out.reserve(by_root.size());
  for (auto& [root, c] : by_root) {
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace

std::size_t Cover::set_count() const {
  std::size_t n = 0;
  for (const auto& f : families) n += f.size();
  return n;
}

std::vector<std::vector<Index>> s_scale_components(const WordBall& ball, std::span<const Index> subset, double s) {
  const int t = hop_limit(s);
  std::vector<Index> members(subset.begin(), subset.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  DisjointSets ds(members.size());
  if (t >= 1 && members.size() > 1) {
    if (!ball.has_adjacency()) throw ValidationError("ball was built without adjacency");
    constexpr std::uint32_t none = 0xffffffffu;
    std::vector<std::uint32_t> src(ball.size(), none);
    std::vector<std::uint16_t> dist(ball.size(), 0);
    std::vector<Index> frontier, next, seen;
    for (std::uint32_t i = 0; i < members.size(); ++i) {
      src[members[i]] = i;
      frontier.push_back(members[i]);
      seen.push_back(members[i]);
    }
    const std::size_t k = ball.generator_count();
    for (int depth = 0; depth < t - 1 && !frontier.empty(); ++depth) {
      next.clear();
      for (Index u : frontier) {
        for (std::size_t g = 0; g < k; ++g) {
          const Index v = ball.neighbor(u, g);
          if (v == WordBall::npos || src[v] != none) continue;
          src[v] = src[u];
          dist[v] = static_cast<std::uint16_t>(depth + 1);
          next.push_back(v);
          seen.push_back(v);
        }
      }
      frontier.swap(next);
    }
    for (Index u : seen) {
      for (std::size_t g = 0; g < k; ++g) {
        const Index v = ball.neighbor(u, g);
        if (v == WordBall::npos || src[v] == none || src[v] == src[u]) continue;
        if (dist[u] + 1 + dist[v] <= t) ds.unite(src[u], src[v]);
      }
    }
  }
  return group_components<Index>(ds, members);
}

std::vector<std::vector<std::size_t>> s_scale_components(const MetricView& d, std::span<const std::size_t> subset,
                                                         double s) {
  if (!(s > 0)) throw ValidationError("scale must be positive", {"scale"});
  std::vector<std::size_t> members(subset.begin(), subset.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  DisjointSets ds(members.size());
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (d(members[i], members[j]) < s) ds.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  return group_components<std::size_t>(ds, members);
}

namespace {

// Marks `members` in a per-thread buffer sized to the ball; cleared on scope exit.
class TargetMarks {
 public:
  TargetMarks(std::size_t n, std::span<const Index> members) : members_(members) {
    thread_local std::vector<char> buffer;
    if (buffer.size() < n) buffer.assign(n, 0);
    marks_ = &buffer;
    for (Index v : members) buffer[v] = 1;
  }
  ~TargetMarks() {
    for (Index v : members_) (*marks_)[v] = 0;
  }
  TargetMarks(const TargetMarks&) = delete;
  TargetMarks& operator=(const TargetMarks&) = delete;
  const std::vector<char>& get() const { return *marks_; }

 private:
  std::span<const Index> members_;
  std::vector<char>* marks_;
};

std::uint32_t checked(std::uint32_t e) {
  if (e == BallBfs::unreached) throw Error("ball is not connected");
  return e;
}

// max over sign vectors of the spread of <sign, x>; the first sign is fixed.
double l1_diameter(const WordBall& ball, std::span<const Index> members) {
  const std::size_t n = ball.model().arity();
  if (members.size() <= 1 || n == 0) return 0;
  std::int64_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
    for (Index v : members) {
      const auto x = ball.element(v);
      std::int64_t dot = x[0];
      for (std::size_t i = 1; i < n; ++i) dot += (mask >> (i - 1)) & 1 ? -x[i] : x[i];
      lo = std::min(lo, dot);
      hi = std::max(hi, dot);
    }
    best = std::max(best, hi - lo);
  }
  return static_cast<double>(best);
}

}  // namespace

std::uint32_t subset_diameter_lower_bound(BallBfs& bfs, std::span<const Index> members) {
  if (members.size() <= 1) return 0;
  const TargetMarks target(bfs.ball().size(), members);
  checked(bfs.eccentricity(members.front(), target.get(), members.size()));
  return checked(bfs.eccentricity(bfs.farthest_target(), target.get(), members.size()));
}

std::uint32_t subset_diameter(BallBfs& bfs, std::span<const Index> members) {
  if (members.size() <= 1) return 0;
  const TargetMarks target(bfs.ball().size(), members);
  const std::size_t m = members.size();
  auto ecc = [&](Index v) { return checked(bfs.eccentricity(v, target.get(), m)); };

  if (m <= 8) {
    std::uint32_t best = 0;
    for (Index v : members) best = std::max(best, ecc(v));
    return best;
  }

  // Bounding eccentricities: every BFS from a member v tightens, for each
  // member w, ecc(w) >= max(d(v, w), ecc(v) - d(v, w)) and
  // ecc(w) <= ecc(v) + d(v, w). Members whose upper bound cannot beat the
  // best eccentricity seen are dropped; sources alternate between the largest
  // upper bound and the smallest lower bound.
  constexpr std::uint32_t inf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> lo(m, 0), hi(m, inf);
  std::vector<std::size_t> live(m);
  std::iota(live.begin(), live.end(), std::size_t{0});
  std::uint32_t best = 0;
  bool pick_high = true;
  while (!live.empty()) {
    std::size_t pick = live.front();
    for (std::size_t i : live)
      if (pick_high ? hi[i] > hi[pick] : lo[i] < lo[pick]) pick = i;
    pick_high = !pick_high;
    const std::uint32_t e = ecc(members[pick]);
    best = std::max(best, e);
    lo[pick] = hi[pick] = e;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t d = bfs.last_distance(members[i]);
      lo[i] = std::max({lo[i], d, e > d ? e - d : 0});
      hi[i] = std::min(hi[i], e + d);
      best = std::max(best, lo[i]);
    }
    std::erase_if(live, [&](std::size_t i) { return hi[i] <= best; });
  }
  return best;
}

// ---------------------------------------------------------------------------

ControlEntry verify_control(const Cover& cover, const BallPtr& ball) {
  return verify_control(cover, ball, cover.scale);
}

ControlEntry verify_control(const Cover& cover, const BallPtr& ball, double scale) {
  const std::size_t n = ball->size();
  std::vector<char> covered(n, 0);
  for (const auto& fam : cover.families)
    for (const auto& set : fam)
      for (Index v : set) {
        if (v >= n) throw ValidationError("cover set refers to index " + std::to_string(v) + " outside the ball");
        covered[v] = 1;
      }
  for (Index v = 0; v < n; ++v)
    if (!covered[v])
      throw WitnessError("cover misses " + format_element(ball->element(v)) + "; verification refused", v);

  ControlEntry e;
  e.scale = scale;
  e.claimed_bound = cover.claimed_bound;
  e.families = cover.families.size();
  BallBfs bfs(ball);
  const int shell = ball->radius() - 1;
  // On Z^n the ball metric is l1 and balls are convex, so a boundary
  // component is a subset of a true component and its exact diameter can be
  // judged like any other.
  e.boundary_judged = ball->model().closed_form_length(ball->model().identity()).has_value();
  std::vector<char> in_family(n, 0);
  for (const auto& fam : cover.families) {
    FamilyReport r;
    r.sets = fam.size();
    std::vector<Index> pts;
    for (const auto& set : fam)
      for (Index v : set)
        if (!in_family[v]) {
          in_family[v] = 1;
          pts.push_back(v);
        }
    for (Index v : pts) in_family[v] = 0;
    r.points = pts.size();
    for (const auto& comp : s_scale_components(*ball, pts, scale)) {
      const bool boundary =
          std::any_of(comp.begin(), comp.end(), [&](Index v) { return ball->length(v) >= shell; });
      const double diam = !boundary             ? subset_diameter(bfs, comp)
                          : e.boundary_judged ? l1_diameter(*ball, comp)
                                              : subset_diameter_lower_bound(bfs, comp);
      ++r.components;
      if (boundary) {
        ++r.boundary_components;
        r.boundary_bound = std::max(r.boundary_bound, diam);
      } else {
        r.interior_bound = std::max(r.interior_bound, diam);
      }
    }
    e.components += r.components;
    e.boundary_components += r.boundary_components;
    e.verified_bound = std::max({e.verified_bound, r.interior_bound, e.boundary_judged ? r.boundary_bound : 0.0});
    e.boundary_bound = std::max(e.boundary_bound, r.boundary_bound);
    e.per_family.push_back(r);
  }
  e.pass = e.verified_bound <= e.claimed_bound + 1e-9;
  return e;
}

ControlCertificate certify(std::string construction, const BallPtr& ball, std::vector<ControlEntry> entries,
                           std::size_t min_scales, double max_residual) {
  ControlCertificate c;
  c.construction = std::move(construction);
  c.model = ball->model().name();
  c.radius = ball->radius();
  c.families = entries.empty() ? 0 : entries.front().families;
  c.entries = std::move(entries);
  c.all_verified = !c.entries.empty() &&
                   std::all_of(c.entries.begin(), c.entries.end(), [](const auto& e) { return e.pass; });
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : c.entries) pts.emplace_back(e.scale, e.verified_bound);
  try {
    c.linear_fit = fit(pts, FitModel::linear, min_scales);
    c.linear = c.linear_fit->max_relative_residual < max_residual;
  } catch (const ValidationError& err) {
    c.fit_error = err.what();
  }
  c.pass = c.all_verified && c.linear;
  return c;
}

ControlFunction neighborhood_enlarge(ControlFunction D, double R) {
  return [D = std::move(D), R](double s) { return D(s + 2 * R) + 2 * R; };
}

LinearControl neighborhood_enlarge(const LinearControl& D, double R) {
  return {D.C, D.C * 2 * R + D.k + 2 * R};
}

// ---------------------------------------------------------------------------

Cover brick_cover(const BallPtr& ball, double s) {
  const auto& model = ball->model();
  if (model.name().rfind("Z^", 0) != 0) throw ValidationError("brick_cover needs a Z^n ball", {"model"});
  if (s < 1) throw ValidationError("brick_cover needs s >= 1", {"scale"});
  const auto n = static_cast<std::int64_t>(model.arity());
  const auto u = static_cast<std::int64_t>(std::ceil(s));
  const std::int64_t period = (n + 1) * u;
  Cover c;
  c.model = model.name();
  c.radius = ball->radius();
  c.scale = s;
  c.construction = "brick";
  c.claimed_bound = std::max(3 * s * std::sqrt(static_cast<double>(n)), static_cast<double>(n * (n * u - 1)));
  c.parameters = {{"n", n}, {"block", u}, {"period", period}, {"side", n * u}};
  c.families.resize(static_cast<std::size_t>(n + 1));
  if (n == 0) {
    c.claimed_bound = 0;
    c.families[0].emplace_back(ball->size());
    std::iota(c.families[0][0].begin(), c.families[0][0].end(), Index{0});
    return c;
  }
  for (std::int64_t f = 0; f <= n; ++f) {
    std::map<std::vector<std::int64_t>, Cover::Set> boxes;
    std::vector<std::int64_t> key(static_cast<std::size_t>(n));
    for (Index i = 0; i < ball->size(); ++i) {
      auto x = ball->element(i);
      bool inside = true;
      for (std::int64_t d = 0; d < n && inside; ++d) {
        const std::int64_t shifted = x[d] - f * u;
        inside = floor_mod(shifted, period) < n * u;
        key[d] = floor_div(shifted, period);
      }
      if (inside) boxes[key].push_back(i);
    }
    for (auto& [k, set] : boxes) c.families[f].push_back(std::move(set));
  }
  return c;
}

Cover interval_cover(const BallPtr& ball, double s) {
  const auto& model = ball->model();
  if (model.name() != "Z^1") throw ValidationError("interval_cover needs a Z ball", {"model"});
  if (!(s > 0)) throw ValidationError("scale must be positive", {"scale"});
  Cover c;
  c.model = model.name();
  c.radius = ball->radius();
  c.scale = s;
  c.construction = "intervals";
  c.claimed_bound = s;
  c.parameters = {{"length", s}};
  c.families.resize(2);
  std::map<std::int64_t, Cover::Set> sets;
  for (Index i = 0; i < ball->size(); ++i)
    sets[static_cast<std::int64_t>(std::floor(static_cast<double>(ball->element(i)[0]) / s))].push_back(i);
  for (auto& [k, set] : sets) c.families[static_cast<std::size_t>(floor_mod(k, 2))].push_back(std::move(set));
  return c;
}

namespace {

struct Column {
  std::int64_t a0, b0;  // lower corner
  std::size_t family;
  std::vector<Index> points;
  std::vector<std::size_t> neighbors;
  std::int64_t offset = -1;
};

std::int64_t interval_gap(std::int64_t lo1, std::int64_t lo2, std::int64_t len) {
  return std::max<std::int64_t>({0, lo2 - (lo1 + len - 1), lo1 - (lo2 + len - 1)});
}

// Least offset in [0, P) outside the forbidden windows of the already placed
// neighbors, or -1.
std::int64_t free_offset(const std::vector<std::pair<std::int64_t, std::int64_t>>& windows, std::int64_t P) {
  std::vector<std::pair<std::int64_t, std::int64_t>> cut;  // half-open, within [0, P)
  for (auto [lo, len] : windows) {
    if (len >= P) return -1;
    const std::int64_t a = floor_mod(lo, P), b = a + len;
    if (b <= P) {
      cut.emplace_back(a, b);
    } else {
      cut.emplace_back(a, P);
      cut.emplace_back(0, b - P);
    }
  }
  std::sort(cut.begin(), cut.end());
  std::int64_t candidate = 0;
  for (auto [a, b] : cut) {
    if (a > candidate) break;
    candidate = std::max(candidate, b);
  }
  return candidate < P ? candidate : -1;
}

}  // namespace

Cover heisenberg_brick_cover(const BallPtr& ball, double s) {
  if (ball->model().name() != "heisenberg") throw ValidationError("heisenberg_brick_cover needs a Heisenberg ball", {"model"});
  if (s < 1) throw ValidationError("heisenberg_brick_cover needs s >= 1", {"scale"});
  const auto u = static_cast<std::int64_t>(std::ceil(s));
  const std::int64_t t = u - 1;  // d < s means d <= t
  const std::int64_t side = 2 * u, period = 3 * u;

  // Columns over the Z^2 brick cover (three families of side x side squares).
  std::vector<Column> columns;
  {
    std::map<std::array<std::int64_t, 3>, std::size_t> ids;
    for (Index i = 0; i < ball->size(); ++i) {
      const auto x = ball->element(i);
      for (std::int64_t f = 0; f < 3; ++f) {
        const std::int64_t a = x[0] - f * u, b = x[1] - f * u;
        if (floor_mod(a, period) >= side || floor_mod(b, period) >= side) continue;
        const std::array<std::int64_t, 3> key{floor_div(a, period), floor_div(b, period), f};
        auto [it, fresh] = ids.try_emplace(key, columns.size());
        if (fresh)
          columns.push_back({key[0] * period + f * u, key[1] * period + f * u, static_cast<std::size_t>(f), {}, {}});
        columns[it->second].points.push_back(i);
      }
    }
  }
  for (std::size_t q = 0; q < columns.size(); ++q)
    for (std::size_t r = 0; r < columns.size(); ++r)
      if (q != r && interval_gap(columns[q].a0, columns[r].a0, side) +
                            interval_gap(columns[q].b0, columns[r].b0, side) <=
                        t)
        columns[q].neighbors.push_back(r);

  // Fiber coordinate k_q(x) = c - a (b - b_q) is unchanged by moving x to the
  // column corner along b then a. Within the column, points at distance <= t
  // differ in k_q by at most M1: the c-part of a word of length t is at most
  // t^2 / 4 and the shear term at most t (side - 1 + t).
  const std::int64_t M1 = t * t / 4 + t * (side - 1 + t);
  const std::int64_t T = M1 + 1;  // gap slab thickness
  // For y in column r, k_q(y) = k_r(y) + a_y (b_q - b_r), so r's slabs seen
  // from q are shifted by a window of such products; q's offset keeps clear of
  // that window widened by T - 1 + M1 on each side.
  auto window = [&](const Column& q, const Column& r) {
    const std::int64_t delta = q.b0 - r.b0;
    const std::int64_t p1 = r.a0 * delta, p2 = (r.a0 + side - 1) * delta;
    const std::int64_t lo = std::min(p1, p2) - (T - 1) - M1;
    const std::int64_t hi = std::max(p1, p2) + (T - 1) + M1;
    return std::pair<std::int64_t, std::int64_t>{r.offset + lo, hi - lo + 1};
  };
  // Greedy offsets in column order; the period grows until every column fits.
  // The sum of a column's windows plus one always suffices.
  std::int64_t P = 2 * T;
  for (;; P += std::max<std::int64_t>(1, P / 32)) {
    for (auto& col : columns) col.offset = -1;
    bool ok = true;
    for (auto& col : columns) {
      std::vector<std::pair<std::int64_t, std::int64_t>> windows;
      for (std::size_t r : col.neighbors)
        if (columns[r].offset >= 0) windows.push_back(window(col, columns[r]));
      col.offset = free_offset(windows, P);
      if (col.offset < 0) {
        ok = false;
        break;
      }
    }
    if (ok) break;
  }

  Cover c;
  c.model = "heisenberg";
  c.radius = ball->radius();
  c.scale = s;
  c.construction = "heis-brick";
  c.families.resize(4);
  for (const auto& col : columns) {
    std::map<std::int64_t, Cover::Set> cores, gaps;
    for (Index i : col.points) {
      const auto x = ball->element(i);
      const std::int64_t k = x[2] - x[0] * (x[1] - col.b0) - col.offset;
      const std::int64_t m = floor_div(k, P);
      (floor_mod(k, P) < T ? gaps : cores)[m].push_back(i);
    }
    for (auto& [m, set] : cores) c.families[col.family].push_back(std::move(set));
    for (auto& [m, set] : gaps) c.families[3].push_back(std::move(set));
  }
  // Corner moves cost at most 2 (side - 1) per endpoint, and a central
  // element (0, 0, n) has length at most 4 ceil(sqrt(n)).
  const std::int64_t core = P - T - 1;
  c.claimed_bound = 4.0 * static_cast<double>(side - 1) +
                    4.0 * std::ceil(std::sqrt(static_cast<double>(core)));
  c.parameters = {{"block", u},     {"side", side},       {"period", period}, {"margin", M1},
                  {"gap", T},       {"fiber_period", P},  {"columns", columns.size()}};
  return c;
}

// ---------------------------------------------------------------------------

FiberSpec heisenberg_center_fibers() {
  FiberSpec f;
  f.id = "heisenberg/center";
  f.project = [](ElementView g) { return Element{g[0], g[1]}; };
  f.fiber_coordinate = [](ElementView g, ElementView base) { return g[2] - g[0] * (g[1] - base[1]); };
  f.cover_at = [](double sigma) {
    FiberCover fc;
    const auto q = sigma / 4.0;
    const auto P = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(q * q)));
    fc.families = 2;
    fc.locate = [P](std::int64_t k) {
      const std::int64_t m = floor_div(k, P);
      return std::pair<std::size_t, std::int64_t>{static_cast<std::size_t>(floor_mod(m, 2)), m};
    };
    fc.bound = 4.0 * std::ceil(std::sqrt(static_cast<double>(P - 1)));
    fc.parameters = {{"period", P}};
    return fc;
  };
  return f;
}

FiberSpec abelian_first_factor_fibers() {
  FiberSpec f;
  f.id = "Z^2/first-factor";
  f.project = [](ElementView g) { return Element{g[1]}; };
  f.fiber_coordinate = [](ElementView g, ElementView) { return g[0]; };
  f.cover_at = [](double sigma) {
    FiberCover fc;
    const auto L = static_cast<std::int64_t>(std::ceil(sigma));
    fc.families = 2;
    fc.locate = [L](std::int64_t k) {
      const std::int64_t m = floor_div(k, L);
      return std::pair<std::size_t, std::int64_t>{static_cast<std::size_t>(floor_mod(m, 2)), m};
    };
    fc.bound = static_cast<double>(L - 1);
    fc.parameters = {{"length", L}};
    return fc;
  };
  return f;
}

FiberSpec trivial_fibers(std::function<Element(ElementView g)> project) {
  FiberSpec f;
  f.id = "trivial";
  f.project = std::move(project);
  f.fiber_coordinate = [](ElementView, ElementView) { return std::int64_t{0}; };
  f.cover_at = [](double) {
    FiberCover fc;
    fc.families = 1;
    fc.locate = [](std::int64_t) { return std::pair<std::size_t, std::int64_t>{0, 0}; };
    fc.bound = 0;
    return fc;
  };
  return f;
}

Cover exact_sequence_cover(const BallPtr& ball_g, const BallPtr& ball_h, const Cover& cover_h,
                           const FiberSpec& fibers, ExactSequenceParts* parts) {
  const double s = cover_h.scale;
  const ControlEntry h_entry = verify_control(cover_h, ball_h);
  // Every H-component matters here, including those on the H-ball boundary.
  const double B_H = std::max(h_entry.verified_bound, h_entry.boundary_bound);
  const double sigma = s + 2 * B_H;
  const FiberCover fc = fibers.cover_at(sigma);
  const std::size_t m = fc.families;

  Cover out;
  out.model = ball_g->model().name();
  out.radius = ball_g->radius();
  out.scale = s;
  out.construction = "exact-seq";
  out.claimed_bound = fc.bound + 2 * B_H;
  out.parameters = {{"fibers", fibers.id},    {"B_H", B_H},   {"sigma", sigma},
                    {"D_K", fc.bound},        {"K", fc.parameters}, {"h_families", cover_h.families.size()},
                    {"k_families", m}};
  out.families.resize(cover_h.families.size() * m);

  // Preimages of H-points.
  std::map<Element, std::vector<Index>> fiber;
  for (Index i = 0; i < ball_g->size(); ++i) fiber[fibers.project(ball_g->element(i))].push_back(i);

  for (std::size_t j = 0; j < cover_h.families.size(); ++j) {
    std::vector<Index> pts;
    for (const auto& set : cover_h.families[j]) pts.insert(pts.end(), set.begin(), set.end());
    for (const auto& W : s_scale_components(*ball_h, pts, s)) {
      const auto base = ball_h->element(W.front());
      std::map<std::pair<std::size_t, std::int64_t>, Cover::Set> split;
      for (Index w : W) {
        auto it = fiber.find(Element(ball_h->element(w).begin(), ball_h->element(w).end()));
        if (it == fiber.end()) continue;
        for (Index g : it->second) split[fc.locate(fibers.fiber_coordinate(ball_g->element(g), base))].push_back(g);
      }
      for (auto& [key, set] : split) out.families[j * m + key.first].push_back(std::move(set));
    }
  }
  if (parts) *parts = {h_entry, B_H, sigma, fc.bound};
  return out;
}

// ---------------------------------------------------------------------------

GreedyColoring greedy_coloring(const BallPtr& ball, int rho, double s, std::size_t max_colors) {
  const int t = hop_limit(s);
  const std::size_t n = ball->size(), k = ball->generator_count();
  constexpr std::uint32_t none = 0xffffffffu;
  GreedyColoring out;
  out.cluster_of.assign(n, none);
  std::vector<std::uint32_t> mark(n, none), dist(n, 0);
  std::vector<Index> queue;
  std::uint32_t clusters = 0;
  for (Index seed = 0; seed < n; ++seed) {
    if (out.cluster_of[seed] != none) continue;
    const std::uint32_t c = clusters++;
    queue.assign(1, seed);
    mark[seed] = c;
    dist[seed] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const Index v = queue[h];
      if (out.cluster_of[v] == none) out.cluster_of[v] = c;
      if (static_cast<int>(dist[v]) == rho) continue;
      for (std::size_t g = 0; g < k; ++g) {
        const Index w = ball->neighbor(v, g);
        if (w == WordBall::npos || mark[w] == c) continue;
        mark[w] = c;
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }

  std::vector<std::vector<Index>> members(clusters);
  for (Index v = 0; v < n; ++v) members[out.cluster_of[v]].push_back(v);
  out.color.assign(clusters, none);
  std::fill(mark.begin(), mark.end(), none);
  std::vector<char> used;
  for (std::uint32_t c = 0; c < clusters; ++c) {
    // Thicken the cluster by t - 1; any earlier cluster met is within distance t.
    used.assign(out.colors + 1, 0);
    queue.assign(members[c].begin(), members[c].end());
    for (Index v : queue) {
      mark[v] = c;
      dist[v] = 0;
    }
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const Index v = queue[h];
      const std::uint32_t other = out.cluster_of[v];
      if (other != c && out.color[other] != none) used[out.color[other]] = 1;
      if (static_cast<int>(dist[v]) >= t - 1) continue;
      for (std::size_t g = 0; g < k; ++g) {
        const Index w = ball->neighbor(v, g);
        if (w == WordBall::npos || mark[w] == c) continue;
        mark[w] = c;
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
    // Neighbors of the thickened set at hop t are adjacent too.
    if (t >= 1) {
      for (Index v : queue) {
        if (static_cast<int>(dist[v]) != t - 1) continue;
        for (std::size_t g = 0; g < k; ++g) {
          const Index w = ball->neighbor(v, g);
          if (w == WordBall::npos) continue;
          const std::uint32_t other = out.cluster_of[w];
          if (other != c && out.color[other] != none) used[out.color[other]] = 1;
        }
      }
    }
    std::uint32_t col = 0;
    while (col < used.size() && used[col]) ++col;
    out.color[c] = col;
    out.colors = std::max<std::size_t>(out.colors, col + 1);
    if (max_colors && out.colors > max_colors) {
      out.complete = false;
      return out;
    }
  }
  return out;
}

Cover greedy_cover(const BallPtr& ball, int rho, double s) {
  const auto gc = greedy_coloring(ball, rho, s);
  Cover c;
  c.model = ball->model().name();
  c.radius = ball->radius();
  c.scale = s;
  c.construction = "greedy";
  c.claimed_bound = 2.0 * rho;
  c.parameters = {{"rho", rho}, {"clusters", gc.color.size()}};
  c.families.resize(gc.colors);
  std::vector<Cover::Set> sets(gc.color.size());
  for (Index v = 0; v < ball->size(); ++v) sets[gc.cluster_of[v]].push_back(v);
  for (std::size_t i = 0; i < sets.size(); ++i) c.families[gc.color[i]].push_back(std::move(sets[i]));
  return c;
}

std::vector<ControlSample> empirical_control_curve(const BallPtr& ball, std::size_t n,
                                                   const std::vector<double>& scales, const GreedyOptions& options) {
  const int cap = options.rho_cap < 0 ? ball->radius() : options.rho_cap;
  std::vector<ControlSample> out;
  for (double s : scales) {
    if (s < 1) throw ValidationError("control-curve scales must be >= 1", {"scales"});
    ControlSample cs;
    cs.scale = s;
    for (int rho = 0; rho <= cap; ++rho) {
      const auto gc = greedy_coloring(ball, rho, s, n + 1);
      if (gc.colors <= n + 1) {
        cs.rho = rho;
        cs.colors = gc.colors;
        cs.clusters = gc.color.size();
        cs.bound = 2.0 * rho;
        break;
      }
    }
    if (cs.bound) {
      const auto e = verify_control(greedy_cover(ball, cs.rho, s), ball);
      cs.verified_bound = e.verified_bound;
      cs.boundary_bound = e.boundary_bound;
    }
    out.push_back(cs);
  }
  return out;
}

// ---------------------------------------------------------------------------

nlohmann::json cover_to_json(const Cover& cover, const WordBall& ball) {
  nlohmann::json fams = nlohmann::json::array();
  for (const auto& fam : cover.families) {
    nlohmann::json sets = nlohmann::json::array();
    for (const auto& set : fam) {
      nlohmann::json pts = nlohmann::json::array();
      for (Index v : set) {
        auto g = ball.element(v);
        pts.push_back(std::vector<std::int64_t>(g.begin(), g.end()));
      }
      sets.push_back(std::move(pts));
    }
    fams.push_back(std::move(sets));
  }
  return {{"format", "nagata-cover/1"},
          {"model", cover.model},
          {"radius", cover.radius},
          {"scale", cover.scale},
          {"claimed_bound", cover.claimed_bound},
          {"construction", cover.construction},
          {"parameters", cover.parameters},
          {"families", std::move(fams)}};
}

Cover cover_from_json(const nlohmann::json& j, const WordBall& ball) {
  std::vector<std::string> missing;
  for (const char* key : {"model", "radius", "scale", "claimed_bound", "families"})
    if (!j.contains(key)) missing.emplace_back(key);
  if (!missing.empty()) throw ValidationError("cover file is missing fields", missing);
  Cover c;
  c.model = j.at("model").get<std::string>();
  c.radius = j.at("radius").get<int>();
  c.scale = j.at("scale").get<double>();
  c.claimed_bound = j.at("claimed_bound").get<double>();
  c.construction = j.value("construction", "");
  c.parameters = j.value("parameters", nlohmann::json::object());
  if (c.model != ball.model().name() || c.radius != ball.radius())
    throw ValidationError("cover was built on " + c.model + " radius " + std::to_string(c.radius) + ", ball is " +
                              ball.model().name() + " radius " + std::to_string(ball.radius()),
                          {"model", "radius"});
  for (const auto& fam : j.at("families")) {
    Cover::Family f;
    for (const auto& set : fam) {
      Cover::Set sset;
      for (const auto& pt : set) {
        const auto g = pt.get<std::vector<std::int64_t>>();
        const auto idx = ball.find(g);
        if (!idx) throw ValidationError("cover point " + format_element(g) + " is not in the ball", {"families"});
        sset.push_back(*idx);
      }
      f.push_back(std::move(sset));
    }
    c.families.push_back(std::move(f));
  }
  return c;
}

nlohmann::json to_json(const FitReport& f) {
  return {{"model", to_string(f.model)},
          {"a", f.a},
          {"b", f.b},
          {"max_relative_residual", f.max_relative_residual},
          {"samples", f.samples},
          {"fit_samples", f.fit_samples},
          {"x_min", f.x_min},
          {"x_max", f.x_max}};
}

nlohmann::json to_json(const ControlEntry& e) {
  nlohmann::json fams = nlohmann::json::array();
  for (const auto& r : e.per_family)
    fams.push_back({{"sets", r.sets},
                    {"points", r.points},
                    {"components", r.components},
                    {"boundary_components", r.boundary_components},
                    {"interior_bound", r.interior_bound},
                    {"boundary_bound", r.boundary_bound}});
  return {{"scale", e.scale},
          {"claimed_bound", e.claimed_bound},
          {"verified_bound", e.verified_bound},
          {"boundary_bound", e.boundary_bound},
          {"families", e.families},
          {"components", e.components},
          {"boundary_components", e.boundary_components},
          {"boundary_judged", e.boundary_judged},
          {"pass", e.pass},
          {"per_family", std::move(fams)}};
}

nlohmann::json to_json(const ControlCertificate& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : c.entries) rows.push_back(to_json(e));
  nlohmann::json j = {{"construction", c.construction},
                      {"model", c.model},
                      {"radius", c.radius},
                      {"families", c.families},
                      {"entries", std::move(rows)},
                      {"all_verified", c.all_verified},
                      {"linear", c.linear},
                      {"pass", c.pass}};
  j["linear_fit"] = c.linear_fit ? to_json(*c.linear_fit) : nlohmann::json(nullptr);
  if (!c.fit_error.empty()) j["fit_error"] = c.fit_error;
  return j;
}

nlohmann::json to_json(const ControlSample& c) {
  nlohmann::json j = {{"scale", c.scale},
                      {"rho", c.rho},
                      {"colors", c.colors},
                      {"clusters", c.clusters},
                      {"verified_bound", c.verified_bound},
                      {"boundary_bound", c.boundary_bound}};
  j["bound"] = c.bound ? nlohmann::json(*c.bound) : nlohmann::json(nullptr);
  return j;
}

}  // namespace nagata
