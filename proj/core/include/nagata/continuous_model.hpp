#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace nagata {

using Point = std::vector<double>;
/// Row i holds the dx-coefficients of the 1-form omega_i.
using Coframe = std::vector<std::vector<double>>;

/// A connected Lie group in global coordinates with a closed-form group law and
/// a left-invariant Riemannian metric g = sum_i omega_i^2.
class ContinuousGroupModel {
 public:
  using Law = std::function<Point(const Point&, const Point&)>;
  using CoframeFn = std::function<Coframe(const Point&)>;

  ContinuousGroupModel(std::string name, std::size_t dim, Law multiply, Law::result_type identity,
                       std::function<Point(const Point&)> inverse, CoframeFn coframe);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  const Point& identity() const noexcept { return identity_; }

  Point multiply(const Point& a, const Point& b) const;
  Point inverse(const Point& a) const;
  Coframe coframe(const Point& x) const;
  /// G = Omega^T Omega.
  std::vector<std::vector<double>> metric_tensor(const Point& x) const;
  /// sqrt(v^T G(x) v), computed as |Omega(x) v|.
  double norm(const Point& x, const Point& v) const;

 private:
  void check(const Point& p) const;

  std::string name_;
  std::size_t dim_;
  Law multiply_;
  Point identity_;
  std::function<Point(const Point&)> inverse_;
  CoframeFn coframe_;
};

using ContinuousPtr = std::shared_ptr<const ContinuousGroupModel>;

/// R^n with addition and the flat metric.
ContinuousPtr euclidean_model(std::size_t n);

/// The 4-dimensional filiform group ([e1,e2]=e3, [e1,e3]=e4) with law
///   z1 = x1+y1, z2 = x2+y2, z3 = x3+y3 + (x1 y2 - x2 y1)/2,
///   z4 = x4+y4 + (x1-y1)(x1 y2 - x2 y1)/12 + (x1 y3 - x3 y1)/2
/// and the left-invariant coframe obtained by inverting dL_x at the identity:
///   th1 = dx1, th2 = dx2, th3 = dx3 + x2/2 dx1 - x1/2 dx2,
///   th4 = dx4 - x1/2 dx3 + (x3/2 - x1 x2/6) dx1 + x1^2/6 dx2.
ContinuousPtr filiform4_model();

/// Length of the polygon through `points` with midpoint quadrature per segment.
double polyline_length(const ContinuousGroupModel& m, const std::vector<Point>& points);
/// Length of a parametrized curve on [0, 1] sampled at `steps` + 1 points.
double curve_length(const ContinuousGroupModel& m, const std::function<Point(double)>& curve, int steps);

struct GridOptions {
  double h = 0.1;
  /// Box padding as a fraction of the query set's coordinate diameter.
  double padding = 0.3;
  /// Include the 2-coordinate diagonal edges in addition to the axis edges.
  bool diagonals = true;
  /// Refuse grids with more nodes than this.
  std::size_t max_nodes = std::size_t{1} << 24;
};

/// Regular grid over a coordinate box, anchored at `anchor`, with edge weight
/// = segment length under the metric tensor at the edge midpoint. Query points
/// off the lattice are attached to the corners of their grid cell.
class GridMetricGraph {
 public:
  GridMetricGraph(ContinuousPtr model, Point lo, Point hi, const Point& anchor, const GridOptions& options);

  const ContinuousGroupModel& model() const noexcept { return *model_; }
  double h() const noexcept { return h_; }
  std::size_t node_count() const noexcept { return count_; }
  Point node(std::size_t id) const;
  const Point& lo() const noexcept { return lo_; }
  const Point& hi() const noexcept { return hi_; }
  bool contains(const Point& p) const;
  /// Number of neighbor slots per node (axis and diagonal directions).
  std::size_t degree() const noexcept { return offsets_.size(); }

  /// Shortest-path distances from `source` to each of `targets`. All points
  /// must lie inside the box; unreachable targets raise ValidationError.
  std::vector<double> distances(const Point& source, const std::vector<Point>& targets) const;

 private:
  struct Attachment {
    std::vector<std::size_t> nodes;
    std::vector<double> weights;
  };
  Attachment attach(const Point& p) const;
  bool neighbor(std::size_t id, std::size_t slot, std::size_t& out) const;
  double edge_weight(std::size_t id, std::size_t slot) const;

  ContinuousPtr model_;
  double h_;
  Point lo_, hi_, origin_;
  std::vector<std::int64_t> extent_;
  std::vector<std::size_t> stride_;
  std::size_t count_ = 0;
  std::vector<std::vector<int>> offsets_;
  std::vector<float> weights_;
};

struct GridMeasurement {
  double value = 0;
  double h = 0;
  double padding = 0;
  Point box_lo, box_hi;
  std::size_t nodes = 0;
};

/// Box = coordinate hull of the query set, inflated by `options.padding` times
/// its coordinate diameter on every side.
GridMeasurement grid_distance(const ContinuousPtr& model, const Point& p, const Point& q,
                              const GridOptions& options = {});

/// Max pairwise grid distance over {x * translator : x in set}.
GridMeasurement translated_set_diameter(const ContinuousPtr& model, const std::vector<Point>& set,
                                        const Point& translator, const GridOptions& options = {});

}  // namespace nagata
