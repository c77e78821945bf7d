#include "nagata/continuous_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "nagata/error.hpp"

namespace nagata {

ContinuousGroupModel::ContinuousGroupModel(std::string name, std::size_t dim, Law multiply, Point identity,
                                           std::function<Point(const Point&)> inverse, CoframeFn coframe)
    : name_(std::move(name)),
      dim_(dim),
      multiply_(std::move(multiply)),
      identity_(std::move(identity)),
      inverse_(std::move(inverse)),
      coframe_(std::move(coframe)) {}

void ContinuousGroupModel::check(const Point& p) const {
  if (p.size() != dim_)
    throw DimensionMismatch(name_ + ": expected a point of dimension " + std::to_string(dim_) + ", got " +
                            std::to_string(p.size()));
}

Point ContinuousGroupModel::multiply(const Point& a, const Point& b) const {
  check(a);
  check(b);
  return multiply_(a, b);
}

Point ContinuousGroupModel::inverse(const Point& a) const {
  check(a);
  return inverse_(a);
}

Coframe ContinuousGroupModel::coframe(const Point& x) const {
  check(x);
  return coframe_(x);
}

std::vector<std::vector<double>> ContinuousGroupModel::metric_tensor(const Point& x) const {
  const Coframe w = coframe(x);
  std::vector<std::vector<double>> g(dim_, std::vector<double>(dim_, 0.0));
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b)
      for (std::size_t i = 0; i < dim_; ++i) g[a][b] += w[i][a] * w[i][b];
  return g;
}

double ContinuousGroupModel::norm(const Point& x, const Point& v) const {
  const Coframe w = coframe(x);
  double s = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    double t = 0;
    for (std::size_t a = 0; a < dim_; ++a) t += w[i][a] * v[a];
    s += t * t;
  }
  return std::sqrt(s);
}

ContinuousPtr euclidean_model(std::size_t n) {
  if (n == 0) throw ValidationError("euclidean_model: dimension must be positive", {"n"});
  return std::make_shared<ContinuousGroupModel>(
      "R^" + std::to_string(n), n,
      [](const Point& a, const Point& b) {
        Point z(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) z[i] = a[i] + b[i];
        return z;
      },
      Point(n, 0.0),
      [](const Point& a) {
        Point z(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) z[i] = -a[i];
        return z;
      },
      [n](const Point&) {
        Coframe w(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) w[i][i] = 1;
        return w;
      });
}

namespace {

Point filiform_mul(const Point& x, const Point& y) {
  const double cross = x[0] * y[1] - x[1] * y[0];
  return {x[0] + y[0], x[1] + y[1], x[2] + y[2] + 0.5 * cross,
          x[3] + y[3] + (x[0] - y[0]) * cross / 12.0 + 0.5 * (x[0] * y[2] - x[2] * y[0])};
}

}  // namespace

ContinuousPtr filiform4_model() {
  return std::make_shared<ContinuousGroupModel>(
      "filiform4", 4, filiform_mul, Point(4, 0.0),
      [](const Point& x) {
        // The law is polynomial and unipotent, so solve x * y = 0 coordinate by coordinate.
        Point y{-x[0], -x[1], 0, 0};
        y[2] = -x[2] - 0.5 * (x[0] * y[1] - x[1] * y[0]);
        const double cross = x[0] * y[1] - x[1] * y[0];
        y[3] = -x[3] - (x[0] - y[0]) * cross / 12.0 - 0.5 * (x[0] * y[2] - x[2] * y[0]);
        return y;
      },
      [](const Point& x) {
        const double x1 = x[0], x2 = x[1], x3 = x[2];
        return Coframe{{1, 0, 0, 0},
                       {0, 1, 0, 0},
                       {0.5 * x2, -0.5 * x1, 1, 0},
                       {0.5 * x3 - x1 * x2 / 6.0, x1 * x1 / 6.0, -0.5 * x1, 1}};
      });
}

double polyline_length(const ContinuousGroupModel& m, const std::vector<Point>& points) {
  double total = 0;
  const std::size_t n = m.dim();
  Point mid(n), delta(n);
  for (std::size_t k = 1; k < points.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      mid[i] = 0.5 * (points[k - 1][i] + points[k][i]);
      delta[i] = points[k][i] - points[k - 1][i];
    }
    total += m.norm(mid, delta);
  }
  return total;
}

double curve_length(const ContinuousGroupModel& m, const std::function<Point(double)>& curve, int steps) {
  if (steps < 1) throw ValidationError("curve_length: steps must be positive", {"steps"});
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) pts.push_back(curve(static_cast<double>(k) / steps));
  return polyline_length(m, pts);
}

GridMetricGraph::GridMetricGraph(ContinuousPtr model, Point lo, Point hi, const Point& anchor,
                                 const GridOptions& options)
    : model_(std::move(model)), h_(options.h), lo_(std::move(lo)), hi_(std::move(hi)) {
  const std::size_t n = model_->dim();
  if (!(h_ > 0)) throw ValidationError("grid step must be positive", {"h"});
  if (lo_.size() != n || hi_.size() != n || anchor.size() != n)
    throw DimensionMismatch("grid box does not match the model dimension");
  origin_.resize(n);
  extent_.resize(n);
  stride_.resize(n);
  double count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (hi_[i] < lo_[i]) throw ValidationError("empty grid box", {"box"});
    const auto k_lo = static_cast<std::int64_t>(std::floor((lo_[i] - anchor[i]) / h_ + 1e-9));
    const auto k_hi = static_cast<std::int64_t>(std::ceil((hi_[i] - anchor[i]) / h_ - 1e-9));
    origin_[i] = anchor[i] + static_cast<double>(k_lo) * h_;
    extent_[i] = k_hi - k_lo + 1;
    lo_[i] = origin_[i];
    hi_[i] = origin_[i] + static_cast<double>(extent_[i] - 1) * h_;
    count *= static_cast<double>(extent_[i]);
  }
  if (count > static_cast<double>(options.max_nodes))
    throw ResourceError("grid would have " + std::to_string(static_cast<long long>(count)) + " nodes (cap " +
                            std::to_string(options.max_nodes) + ")",
                        -1);
  count_ = static_cast<std::size_t>(count);
  std::size_t s = 1;
  for (std::size_t i = n; i-- > 0;) {
    stride_[i] = s;
    s *= static_cast<std::size_t>(extent_[i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (int sign : {1, -1}) {
      std::vector<int> o(n, 0);
      o[i] = sign;
      offsets_.push_back(o);
    }
  if (options.diagonals)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (int si : {1, -1})
          for (int sj : {1, -1}) {
            std::vector<int> o(n, 0);
            o[i] = si;
            o[j] = sj;
            offsets_.push_back(o);
          }

  weights_.assign(count_ * offsets_.size(), std::numeric_limits<float>::infinity());
  for (std::size_t id = 0; id < count_; ++id)
    for (std::size_t slot = 0; slot < offsets_.size(); ++slot) {
      std::size_t other;
      if (!neighbor(id, slot, other)) continue;
      weights_[id * offsets_.size() + slot] = static_cast<float>(edge_weight(id, slot));
    }
}

Point GridMetricGraph::node(std::size_t id) const {
  const std::size_t n = model_->dim();
  Point p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = (id / stride_[i]) % static_cast<std::size_t>(extent_[i]);
    p[i] = origin_[i] + static_cast<double>(k) * h_;
  }
  return p;
}

bool GridMetricGraph::contains(const Point& p) const {
  if (p.size() != model_->dim()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < lo_[i] - 1e-9 || p[i] > hi_[i] + 1e-9) return false;
  return true;
}

bool GridMetricGraph::neighbor(std::size_t id, std::size_t slot, std::size_t& out) const {
  const auto& o = offsets_[slot];
  std::size_t result = id;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (o[i] == 0) continue;
    const auto k = static_cast<std::int64_t>((id / stride_[i]) % static_cast<std::size_t>(extent_[i])) + o[i];
    if (k < 0 || k >= extent_[i]) return false;
    if (o[i] > 0)
      result += stride_[i];
    else
      result -= stride_[i];
  }
  out = result;
  return true;
}

double GridMetricGraph::edge_weight(std::size_t id, std::size_t slot) const {
  const auto& o = offsets_[slot];
  Point mid = node(id);
  Point delta(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) {
    delta[i] = o[i] * h_;
    mid[i] += 0.5 * delta[i];
  }
  const double w = model_->norm(mid, delta);
  if (!(w > 0) || !std::isfinite(w))
    throw ValidationError("metric is degenerate at " + std::to_string(mid[0]) + ",... (edge weight " +
                          std::to_string(w) + ")");
  return w;
}

GridMetricGraph::Attachment GridMetricGraph::attach(const Point& p) const {
  if (!contains(p)) throw ValidationError("query point lies outside the grid box; enlarge the padding", {"box"});
  const std::size_t n = model_->dim();
  std::vector<std::int64_t> base(n);
  std::vector<double> frac(n);
  bool on_node = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (p[i] - origin_[i]) / h_;
    auto k = static_cast<std::int64_t>(std::floor(t + 1e-9));
    k = std::clamp<std::int64_t>(k, 0, extent_[i] - 1);
    base[i] = k;
    frac[i] = t - static_cast<double>(k);
    if (std::abs(frac[i]) > 1e-9) on_node = false;
  }
  Attachment a;
  auto id_of = [&](const std::vector<std::int64_t>& k) {
    std::size_t id = 0;
    for (std::size_t i = 0; i < n; ++i) id += static_cast<std::size_t>(k[i]) * stride_[i];
    return id;
  };
  if (on_node) {
    a.nodes.push_back(id_of(base));
    a.weights.push_back(0.0);
    return a;
  }
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::int64_t> k = base;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) {
        if (std::abs(frac[i]) <= 1e-9) {
          ok = false;
          break;
        }
        if (++k[i] >= extent_[i]) {
          ok = false;
          break;
        }
      }
    if (!ok) continue;
    const std::size_t id = id_of(k);
    Point q = node(id);
    Point mid(n), delta(n);
    for (std::size_t i = 0; i < n; ++i) {
      mid[i] = 0.5 * (p[i] + q[i]);
      delta[i] = q[i] - p[i];
    }
    a.nodes.push_back(id);
    a.weights.push_back(model_->norm(mid, delta));
  }
  return a;
}

std::vector<double> GridMetricGraph::distances(const Point& source, const std::vector<Point>& targets) const {
  const double inf = std::numeric_limits<double>::infinity();
  const Attachment src = attach(source);
  std::vector<Attachment> tgt;
  for (const auto& t : targets) tgt.push_back(attach(t));

  std::vector<double> dist(count_, inf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t k = 0; k < src.nodes.size(); ++k)
    if (src.weights[k] < dist[src.nodes[k]]) {
      dist[src.nodes[k]] = src.weights[k];
      heap.push({src.weights[k], src.nodes[k]});
    }
  // Stop once every attachment node of every target is settled.
  std::vector<char> wanted(count_, 0);
  std::size_t remaining = 0;
  for (const auto& t : tgt)
    for (auto id : t.nodes)
      if (!wanted[id]) {
        wanted[id] = 1;
        ++remaining;
      }
  std::vector<char> settled(count_, 0);
  const std::size_t deg = offsets_.size();
  while (!heap.empty() && remaining > 0) {
    auto [d, id] = heap.top();
    heap.pop();
    if (settled[id]) continue;
    settled[id] = 1;
    if (wanted[id]) --remaining;
    for (std::size_t slot = 0; slot < deg; ++slot) {
      const float w = weights_[id * deg + slot];
      if (!std::isfinite(w)) continue;
      std::size_t other;
      neighbor(id, slot, other);
      const double nd = d + w;
      if (nd < dist[other]) {
        dist[other] = nd;
        heap.push({nd, other});
      }
    }
  }

  std::vector<double> out;
  const std::size_t n = model_->dim();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    double best = inf;
    for (std::size_t k = 0; k < tgt[t].nodes.size(); ++k) best = std::min(best, dist[tgt[t].nodes[k]] + tgt[t].weights[k]);
    // Points in a common cell also get the straight segment between them.
    bool same_cell = true;
    for (std::size_t i = 0; i < n && same_cell; ++i)
      if (std::abs(targets[t][i] - source[i]) > h_) same_cell = false;
    if (same_cell) {
      Point mid(n), delta(n);
      for (std::size_t i = 0; i < n; ++i) {
        mid[i] = 0.5 * (targets[t][i] + source[i]);
        delta[i] = targets[t][i] - source[i];
      }
      best = std::min(best, model_->norm(mid, delta));
    }
    if (!std::isfinite(best)) throw ValidationError("grid is disconnected between the query points", {"box"});
    out.push_back(best);
  }
  return out;
}

namespace {

double coordinate_diameter(const std::vector<Point>& pts) {
  double best = 0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      double s = 0;
      for (std::size_t i = 0; i < pts[a].size(); ++i) s += (pts[a][i] - pts[b][i]) * (pts[a][i] - pts[b][i]);
      best = std::max(best, std::sqrt(s));
    }
  return best;
}

GridMeasurement measure_set(const ContinuousPtr& model, const std::vector<Point>& pts, const GridOptions& options) {
  GridMeasurement m;
  m.h = options.h;
  m.padding = options.padding;
  if (pts.empty()) throw ValidationError("empty query set", {"set"});
  for (const auto& p : pts)
    if (p.size() != model->dim()) throw DimensionMismatch("query point does not match the model dimension");
  const double diam = coordinate_diameter(pts);
  if (diam == 0) return m;
  const std::size_t n = model->dim();
  m.box_lo.assign(n, std::numeric_limits<double>::infinity());
  m.box_hi.assign(n, -std::numeric_limits<double>::infinity());
  for (const auto& p : pts)
    for (std::size_t i = 0; i < n; ++i) {
      m.box_lo[i] = std::min(m.box_lo[i], p[i]);
      m.box_hi[i] = std::max(m.box_hi[i], p[i]);
    }
  const double pad = options.padding * diam;
  for (std::size_t i = 0; i < n; ++i) {
    m.box_lo[i] -= pad;
    m.box_hi[i] += pad;
  }
  GridMetricGraph graph(model, m.box_lo, m.box_hi, pts.front(), options);
  m.box_lo = graph.lo();
  m.box_hi = graph.hi();
  m.nodes = graph.node_count();
  for (std::size_t a = 0; a + 1 < pts.size(); ++a) {
    std::vector<Point> rest(pts.begin() + static_cast<std::ptrdiff_t>(a) + 1, pts.end());
    for (double d : graph.distances(pts[a], rest)) m.value = std::max(m.value, d);
  }
  return m;
}

}  // namespace

GridMeasurement grid_distance(const ContinuousPtr& model, const Point& p, const Point& q, const GridOptions& options) {
  return measure_set(model, {p, q}, options);
}

GridMeasurement translated_set_diameter(const ContinuousPtr& model, const std::vector<Point>& set,
                                        const Point& translator, const GridOptions& options) {
  std::vector<Point> moved;
  moved.reserve(set.size());
  for (const auto& p : set) moved.push_back(model->multiply(p, translator));
  return measure_set(model, moved, options);
}

}  // namespace nagata
