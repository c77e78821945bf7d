#include "nagata/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "nagata/continuous_model.hpp"
#include "nagata/error.hpp"

namespace nagata {

using Index = WordBall::Index;

BallBfs::BallBfs(BallPtr ball) : ball_(std::move(ball)) {
  if (!ball_->has_adjacency()) throw ValidationError("ball was built without adjacency");
  dist_.assign(ball_->size(), unreached);
  parent_.assign(ball_->size(), WordBall::npos);
}

void BallBfs::reset() {
  for (auto v : touched_) {
    dist_[v] = unreached;
    parent_[v] = WordBall::npos;
  }
  touched_.clear();
}

const std::vector<std::uint32_t>& BallBfs::from(Index source, int max_depth) {
  reset();
  const std::size_t k = ball_->generator_count();
  queue_.clear();
  queue_.push_back(source);
  dist_[source] = 0;
  touched_.push_back(source);
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const Index u = queue_[head];
    const std::uint32_t du = dist_[u];
    if (max_depth >= 0 && du >= static_cast<std::uint32_t>(max_depth)) continue;
    for (std::size_t g = 0; g < k; ++g) {
      const Index v = ball_->neighbor(u, g);
      if (v == WordBall::npos || dist_[v] != unreached) continue;
      dist_[v] = du + 1;
      parent_[v] = u;
      touched_.push_back(v);
      queue_.push_back(v);
    }
  }
  return dist_;
}

std::uint32_t BallBfs::eccentricity(Index source, const std::vector<char>& is_target,
                                    std::size_t target_count) {
  reset();
  const std::size_t k = ball_->generator_count();
  queue_.clear();
  queue_.push_back(source);
  dist_[source] = 0;
  touched_.push_back(source);
  std::size_t found = is_target[source] ? 1 : 0;
  std::uint32_t ecc = 0;
  farthest_ = source;
  for (std::size_t head = 0; head < queue_.size() && found < target_count; ++head) {
    const Index u = queue_[head];
    for (std::size_t g = 0; g < k; ++g) {
      const Index v = ball_->neighbor(u, g);
      if (v == WordBall::npos || dist_[v] != unreached) continue;
      dist_[v] = dist_[u] + 1;
      parent_[v] = u;
      touched_.push_back(v);
      queue_.push_back(v);
      if (is_target[v]) {
        ++found;
        ecc = dist_[v];
        farthest_ = v;
      }
    }
  }
  return found < target_count ? unreached : ecc;
}

std::uint32_t BallBfs::distance(Index a, Index b) {
  if (a == b) return 0;
  reset();
  const std::size_t k = ball_->generator_count();
  queue_.clear();
  queue_.push_back(a);
  dist_[a] = 0;
  touched_.push_back(a);
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const Index u = queue_[head];
    for (std::size_t g = 0; g < k; ++g) {
      const Index v = ball_->neighbor(u, g);
      if (v == WordBall::npos || dist_[v] != unreached) continue;
      dist_[v] = dist_[u] + 1;
      parent_[v] = u;
      touched_.push_back(v);
      if (v == b) return dist_[v];
      queue_.push_back(v);
    }
  }
  return unreached;
}

// ---------------------------------------------------------------------------

std::string to_string(const Transform& t) {
  switch (t.kind) {
    case Transform::Kind::snowflake: {
      std::ostringstream s;
      s.precision(17);
      s << "snowflake(" << t.alpha << ")";
      return s.str();
    }
    case Transform::Kind::log: return "log";
    case Transform::Kind::min1: return "min1";
    case Transform::Kind::max1: return "max1";
  }
  return "?";
}

MetricView::MetricView(std::string carrier, std::size_t size, Oracle base)
    : carrier_(std::move(carrier)), size_(size), base_(std::move(base)) {}

MetricView MetricView::of_ball(const BallPtr& ball) {
  struct Rows {
    std::mutex mu;
    BallBfs bfs;
    Index cached = WordBall::npos;
    std::vector<std::uint32_t> row;
    explicit Rows(BallPtr b) : bfs(std::move(b)) {}
  };
  auto rows = std::make_shared<Rows>(ball);
  std::string label = ball->model().name() + "/B(" + std::to_string(ball->radius()) + ")";
  return MetricView(std::move(label), ball->size(), [rows](std::size_t i, std::size_t j) {
    std::lock_guard lock(rows->mu);
    if (rows->cached != i) {
      rows->row = rows->bfs.from(static_cast<Index>(i));
      rows->cached = static_cast<Index>(i);
    }
    const auto d = rows->row[j];
    return d == BallBfs::unreached ? std::numeric_limits<double>::infinity() : static_cast<double>(d);
  });
}

MetricView MetricView::of_line(std::vector<double> points) {
  auto p = std::make_shared<std::vector<double>>(std::move(points));
  const std::size_t n = p->size();
  return MetricView("line", n, [p](std::size_t i, std::size_t j) { return std::abs((*p)[i] - (*p)[j]); });
}

MetricView MetricView::of_matrix(std::string carrier, std::vector<std::vector<double>> d) {
  const std::size_t n = d.size();
  for (const auto& row : d)
    if (row.size() != n) throw DimensionMismatch("distance matrix is not square");
  auto m = std::make_shared<std::vector<std::vector<double>>>(std::move(d));
  return MetricView(std::move(carrier), n, [m](std::size_t i, std::size_t j) { return (*m)[i][j]; });
}

double MetricView::distance(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  double d = base_(i, j);
  for (const auto& t : transforms_) {
    switch (t.kind) {
      case Transform::Kind::snowflake: d = std::pow(d, t.alpha); break;
      case Transform::Kind::log: d = std::log1p(d); break;
      case Transform::Kind::min1: d = std::min(d, 1.0); break;
      case Transform::Kind::max1: d = std::max(d, 1.0); break;
    }
  }
  return d;
}

MetricView MetricView::with(Transform t) const {
  MetricView out = *this;
  if (t.kind == Transform::Kind::snowflake && !out.transforms_.empty() &&
      out.transforms_.back().kind == Transform::Kind::snowflake) {
    out.transforms_.back().alpha *= t.alpha;
  } else {
    out.transforms_.push_back(t);
  }
  return out;
}

MetricView snowflake(const MetricView& v, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ValidationError("snowflake exponent must lie in (0, 1]", {"alpha"});
  return v.with({Transform::Kind::snowflake, alpha});
}

MetricView log_transform(const MetricView& v) { return v.with({Transform::Kind::log}); }

MetricView micro_macro(const MetricView& v, MicroMacro mode) {
  return v.with({mode == MicroMacro::min1 ? Transform::Kind::min1 : Transform::Kind::max1});
}

MetricCheck check_metric(const MetricView& v, std::size_t exhaustive_limit, std::uint64_t random_triples,
                         std::uint64_t seed, double tolerance) {
  MetricCheck out;
  const std::size_t n = v.size();
  auto visit = [&](std::size_t x, std::size_t y, std::size_t z, double dxy, double dyx, double dyz, double dxz) {
    ++out.triples;
    const double excess = dxz - dxy - dyz;
    const double scale = std::max({1.0, std::abs(dxz), std::abs(dxy) + std::abs(dyz)});
    const bool asym = std::abs(dxy - dyx) > tolerance * scale;
    if (excess > tolerance * scale || asym || dxy < 0) {
      if (out.violations == 0 || excess > out.worst_excess) {
        out.witness[0] = x;
        out.witness[1] = y;
        out.witness[2] = z;
      }
      ++out.violations;
      out.worst_excess = std::max(out.worst_excess, excess);
    }
  };
  // Both branches query row by row so ball views reuse their cached BFS row.
  if (n <= exhaustive_limit) {
    out.exhaustive = true;
    std::vector<double> d(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) d[x * n + y] = v(x, y);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          visit(x, y, z, d[x * n + y], d[y * n + x], d[y * n + z], d[x * n + z]);
    return out;
  }
  struct Triple {
    std::size_t x, y, z;
    double dxy, dyx, dyz, dxz;
  };
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<Triple> ts(random_triples);
  for (auto& t : ts) {
    t.x = pick(rng);
    t.y = pick(rng);
    t.z = pick(rng);
  }
  std::vector<std::size_t> order(ts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ts[a].x < ts[b].x; });
  for (auto i : order) {
    ts[i].dxy = v(ts[i].x, ts[i].y);
    ts[i].dxz = v(ts[i].x, ts[i].z);
  }
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ts[a].y < ts[b].y; });
  for (auto i : order) {
    ts[i].dyx = v(ts[i].y, ts[i].x);
    ts[i].dyz = v(ts[i].y, ts[i].z);
  }
  for (const auto& t : ts) visit(t.x, t.y, t.z, t.dxy, t.dyx, t.dyz, t.dxz);
  return out;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> HausdorffQuotient::find(ElementView key) const {
  auto it = std::lower_bound(keys.begin(), keys.end(), key, [](const Element& a, ElementView b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  if (it == keys.end() || !std::equal(it->begin(), it->end(), key.begin(), key.end())) return std::nullopt;
  return static_cast<std::size_t>(it - keys.begin());
}

MetricView HausdorffQuotient::view(const BallPtr& ball, const QuotientSpec& spec) const {
  auto self = std::make_shared<HausdorffQuotient>(*this);
  auto key_of = spec.coset_key;
  auto b = ball;
  return MetricView(id + "/B(" + std::to_string(radius) + ")", keys.size(),
                    [self, key_of, b](std::size_t i, std::size_t j) {
                      const auto& m = b->model();
                      const Element gi = m.inverse(b->element(self->representative[i]));
                      const Element q = m.multiply(gi, b->element(self->representative[j]));
                      const auto k = self->find(key_of(q));
                      return k ? static_cast<double>(self->norms[*k]) : std::numeric_limits<double>::infinity();
                    });
}

HausdorffQuotient hausdorff_quotient(const WordBall& ball, const QuotientSpec& spec) {
  std::map<Element, std::pair<int, Index>> best;
  for (Index i = 0; i < ball.size(); ++i) {
    Element key = spec.coset_key(ball.element(i));
    // Canonical order visits shorter elements first, so the first hit is the minimum.
    best.try_emplace(std::move(key), ball.length(i), i);
  }
  if (best.empty()) throw ValidationError("quotient has no cosets in the ball");
  HausdorffQuotient q;
  q.id = ball.model().name() + "/" + spec.id;
  q.radius = ball.radius();
  for (auto& [key, v] : best) {
    q.keys.push_back(key);
    q.norms.push_back(v.first);
    q.lower_bound_only.push_back(v.first >= ball.radius() - 1);
    q.representative.push_back(v.second);
  }
  return q;
}

// ---------------------------------------------------------------------------

namespace {

// Word lengths in H for the given H-elements: closed form when the model has
// one, otherwise an H-ball grown until it contains all of them.
std::vector<double> intrinsic_lengths(const SubgroupSpec& H, const std::vector<Element>& hs) {
  std::vector<double> out(hs.size(), 0.0);
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (auto l = H.model->closed_form_length(hs[i]))
      out[i] = static_cast<double>(*l);
    else
      missing.push_back(i);
  }
  for (int r = 8; !missing.empty(); r *= 2) {
    auto hb = bfs_ball(H.model, r, BallOptions{.adjacency = false});
    std::vector<std::size_t> still;
    for (auto i : missing) {
      if (auto l = hb->length_of(hs[i]))
        out[i] = *l;
      else
        still.push_back(i);
    }
    missing.swap(still);
  }
  return out;
}

}  // namespace

DistortionSample subgroup_distortion(const WordBall& ball, const SubgroupSpec& H) {
  DistortionSample out;
  out.subgroup = H.id;
  out.group = ball.model().name();
  out.radius = ball.radius();
  std::vector<Element> hs;
  std::vector<int> ambient;
  for (Index i = 0; i < ball.size(); ++i) {
    if (auto h = H.restrict_to(ball.element(i))) {
      hs.push_back(std::move(*h));
      ambient.push_back(ball.length(i));
    }
  }
  const auto intrinsic = intrinsic_lengths(H, hs);
  for (std::size_t i = 0; i < hs.size(); ++i)
    out.pairs.push_back({intrinsic[i], static_cast<double>(ambient[i]), ambient[i] >= ball.radius() - 1});
  std::sort(out.pairs.begin(), out.pairs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.intrinsic, a.ambient) < std::tie(b.intrinsic, b.ambient);
  });
  out.degenerate = out.pairs.size() <= 1;
  return out;
}

void write_distortion_csv(const DistortionSample& d, std::ostream& out) {
  out << "intrinsic,ambient,boundary_flag\n";
  for (const auto& p : d.pairs) out << p.intrinsic << ',' << p.ambient << ',' << (p.boundary ? 1 : 0) << '\n';
}

std::vector<std::pair<double, double>> distortion_envelope(const DistortionSample& d) {
  std::map<double, double> top;
  for (const auto& p : d.pairs) {
    if (p.boundary || p.intrinsic <= 0) continue;
    auto [it, fresh] = top.try_emplace(p.ambient, p.intrinsic);
    if (!fresh) it->second = std::max(it->second, p.intrinsic);
  }
  std::vector<std::pair<double, double>> out;
  for (auto [ambient, intrinsic] : top) out.emplace_back(intrinsic, ambient);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(FitModel m) {
  switch (m) {
    case FitModel::linear: return "linear";
    case FitModel::log: return "log";
    case FitModel::power: return "power";
  }
  return "?";
}

std::optional<FitModel> parse_fit_model(const std::string& s) {
  if (s == "linear") return FitModel::linear;
  if (s == "log") return FitModel::log;
  if (s == "power") return FitModel::power;
  return std::nullopt;
}

double FitReport::predict(double x) const {
  switch (model) {
    case FitModel::linear: return a * x + b;
    case FitModel::log: return a * std::log1p(x) + b;
    case FitModel::power: return a * std::pow(x, b);
  }
  return 0;
}

FitReport fit(std::vector<std::pair<double, double>> samples, FitModel model, std::size_t min_samples) {
  if (model == FitModel::power) {
    for (const auto& [x, y] : samples)
      if (!(x > 0 && y > 0)) throw ValidationError("power fit needs positive samples", {"samples"});
  }
  if (samples.size() < std::max<std::size_t>(min_samples, 2))
    throw ValidationError("insufficient samples for fit: " + std::to_string(samples.size()) + " < " +
                              std::to_string(std::max<std::size_t>(min_samples, 2)),
                          {"samples"});
  std::stable_sort(samples.begin(), samples.end());

  auto tx = [model](double x) {
    switch (model) {
      case FitModel::linear: return x;
      case FitModel::log: return std::log1p(x);
      case FitModel::power: return std::log(x);
    }
    return x;
  };
  auto ty = [model](double y) { return model == FitModel::power ? std::log(y) : y; };

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < samples.size(); i += 2) {
    const double x = tx(samples[i].first), y = ty(samples[i].second);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double den = m * sxx - sx * sx;
  if (m < 2 || std::abs(den) <= 1e-12 * std::max(1.0, m * sxx))
    throw ValidationError("fit samples are degenerate (all x equal)", {"samples"});
  const double slope = (m * sxy - sx * sy) / den;
  const double icept = (sy - slope * sx) / m;

  FitReport r;
  r.model = model;
  if (model == FitModel::power) {
    r.a = std::exp(icept);
    r.b = slope;
  } else {
    r.a = slope;
    r.b = icept;
  }
  r.samples = samples.size();
  r.fit_samples = m;
  r.x_min = samples.front().first;
  r.x_max = samples.back().first;
  for (std::size_t i = 1; i < samples.size(); i += 2) {
    const auto [x, y] = samples[i];
    const double err = std::abs(y - r.predict(x));
    r.max_relative_residual = std::max(r.max_relative_residual, y == 0 ? err : err / std::abs(y));
  }
  return r;
}

// ---------------------------------------------------------------------------

KaridiSpec heisenberg_karidi() {
  KaridiSpec s;
  s.name = "heisenberg";
  s.arity = 3;
  s.layers = {{0, 1}, {2}};
  s.difference = [](std::span<const double> p, std::span<const double> q) {
    // (a,b,c)^-1 (a',b',c') under (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
    return std::vector<double>{q[0] - p[0], q[1] - p[1], q[2] - p[2] - p[0] * (q[1] - p[1])};
  };
  return s;
}

KaridiSpec filiform4_karidi() {
  KaridiSpec s;
  s.name = "filiform4";
  s.arity = 4;
  s.layers = {{0, 1}, {2}, {3}};
  auto m = filiform4_model();
  s.difference = [m](std::span<const double> p, std::span<const double> q) {
    return m->multiply(m->inverse(Point(p.begin(), p.end())), Point(q.begin(), q.end()));
  };
  return s;
}

KaridiSpec abelian_karidi(std::size_t n) {
  KaridiSpec s;
  s.name = "Z^" + std::to_string(n);
  s.arity = n;
  s.layers.emplace_back(n);
  std::iota(s.layers[0].begin(), s.layers[0].end(), std::size_t{0});
  s.difference = [](std::span<const double> p, std::span<const double> q) {
    std::vector<double> d(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) d[i] = q[i] - p[i];
    return d;
  };
  return s;
}

KaridiSpec karidi_for_model(const DiscreteGroupModel& m) {
  if (m.name() == "heisenberg") return heisenberg_karidi();
  if (m.name().rfind("Z^", 0) == 0) return abelian_karidi(m.arity());
  throw ValidationError("no Karidi coordinates for model '" + m.name() + "' (not nilpotent)", {"model"});
}

double karidi_norm(const KaridiSpec& spec, std::span<const double> x) {
  if (x.size() != spec.arity)
    throw DimensionMismatch("Karidi coordinates of " + spec.name + " have arity " + std::to_string(spec.arity) +
                            ", got " + std::to_string(x.size()));
  double D = 0;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    double sq = 0;
    for (auto c : spec.layers[i]) sq += x[c] * x[c];
    D += std::pow(std::sqrt(sq), 1.0 / static_cast<double>(i + 1));
  }
  return D;
}

double karidi_quasinorm(const KaridiSpec& spec, std::span<const double> p, std::span<const double> q) {
  if (p.size() != spec.arity || q.size() != spec.arity)
    throw DimensionMismatch("Karidi coordinates of " + spec.name + " have arity " + std::to_string(spec.arity));
  return karidi_norm(spec, spec.difference(p, q));
}

KappaReport karidi_comparison(const WordBall& ball, const KaridiSpec& spec, int max_length) {
  KappaReport r;
  r.model = ball.model().name();
  r.radius = ball.radius();
  r.min_length = std::numeric_limits<int>::max();
  std::vector<double> x(spec.arity);
  for (Index i = 0; i < ball.size(); ++i) {
    const int d = ball.length(i);
    if (d <= 1 || (max_length >= 0 && d > max_length)) continue;
    auto g = ball.element(i);
    if (g.size() != spec.arity) throw DimensionMismatch("ball element arity does not match Karidi spec");
    for (std::size_t k = 0; k < g.size(); ++k) x[k] = static_cast<double>(g[k]);
    const double D = karidi_norm(spec, x);
    const double up = D / d, down = d / D;
    r.max_D_over_d = std::max(r.max_D_over_d, up);
    r.max_d_over_D = std::max(r.max_d_over_D, down);
    if (std::max(up, down) > r.kappa) {
      r.kappa = std::max(up, down);
      r.argmax.assign(g.begin(), g.end());
    }
    ++r.samples;
    r.min_length = std::min(r.min_length, d);
    r.max_length = std::max(r.max_length, d);
  }
  if (r.samples == 0) throw ValidationError("no ball elements beyond distance 1", {"radius"});
  return r;
}

}  // namespace nagata
