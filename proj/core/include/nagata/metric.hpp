#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nagata/group_model.hpp"
#include "nagata/word_ball.hpp"

namespace nagata {

/// Graph distance in the Cayley graph restricted to a ball: the metric a
/// WordBall "sees". Paths may not leave the ball, so this dominates the word
/// metric of the group and agrees with it on convex balls (Z^n).
///
/// Each object owns scratch arrays sized to the ball and is not thread-safe;
/// use one per thread.
class BallBfs {
 public:
  explicit BallBfs(BallPtr ball);

  const WordBall& ball() const noexcept { return *ball_; }
  static constexpr std::uint32_t unreached = 0xffffffffu;

  /// Distances from `source` to every ball element. `max_depth` < 0 means unbounded.
  const std::vector<std::uint32_t>& from(WordBall::Index source, int max_depth = -1);
  /// Stops once every element with `is_target` set has been reached; returns the
  /// largest target distance (unreached if some target is disconnected).
  std::uint32_t eccentricity(WordBall::Index source, const std::vector<char>& is_target,
                             std::size_t target_count);
  std::uint32_t distance(WordBall::Index a, WordBall::Index b);
  /// The target that set the value of the most recent `eccentricity` call.
  WordBall::Index farthest_target() const noexcept { return farthest_; }
  /// Distance of `v` in the most recent run (unreached if it was not visited).
  std::uint32_t last_distance(WordBall::Index v) const { return dist_[v]; }

  /// Parent pointers of the most recent `from` run (npos at the source).
  WordBall::Index parent(WordBall::Index v) const { return parent_[v]; }

 private:
  void reset();

  BallPtr ball_;
  std::vector<std::uint32_t> dist_;
  std::vector<WordBall::Index> parent_;
  std::vector<WordBall::Index> queue_;
  std::vector<WordBall::Index> touched_;
  WordBall::Index farthest_ = WordBall::npos;
};

struct Transform {
  enum class Kind { snowflake, log, min1, max1 };
  Kind kind;
  double alpha = 1.0;  // snowflake only
};

std::string to_string(const Transform& t);

/// A finite carrier with a distance oracle and the record of transforms
/// applied to it. Transforms act on off-diagonal distances only; d(x, x) = 0
/// is always kept.
class MetricView {
 public:
  using Oracle = std::function<double(std::size_t, std::size_t)>;

  MetricView(std::string carrier, std::size_t size, Oracle base);

  /// Intrinsic ball metric (see BallBfs). Rows are computed on demand and the
  /// most recent one is cached.
  static MetricView of_ball(const BallPtr& ball);
  /// Points on a line with |x - y|.
  static MetricView of_line(std::vector<double> points);
  static MetricView of_matrix(std::string carrier, std::vector<std::vector<double>> d);

  const std::string& carrier() const noexcept { return carrier_; }
  std::size_t size() const noexcept { return size_; }
  const std::vector<Transform>& transforms() const noexcept { return transforms_; }
  double base_distance(std::size_t i, std::size_t j) const { return i == j ? 0.0 : base_(i, j); }
  double distance(std::size_t i, std::size_t j) const;
  double operator()(std::size_t i, std::size_t j) const { return distance(i, j); }

  MetricView with(Transform t) const;

 private:
  std::string carrier_;
  std::size_t size_;
  Oracle base_;
  std::vector<Transform> transforms_;
};

/// d -> d^alpha. Consecutive snowflakes collapse into one exponent.
MetricView snowflake(const MetricView& v, double alpha);
/// d -> log(d + 1).
MetricView log_transform(const MetricView& v);
enum class MicroMacro { min1, max1 };
/// d -> min(d, 1) or max(d, 1) off the diagonal.
MetricView micro_macro(const MetricView& v, MicroMacro mode);

struct MetricCheck {
  std::uint64_t triples = 0;
  std::uint64_t violations = 0;
  double worst_excess = 0;  // max of d(x,z) - d(x,y) - d(y,z)
  std::size_t witness[3] = {0, 0, 0};
  bool exhaustive = false;
  bool ok() const { return violations == 0; }
};

/// Symmetry, zero diagonal and triangle inequality. Exhaustive up to
/// `exhaustive_limit` points, otherwise `random_triples` seeded triples.
MetricCheck check_metric(const MetricView& v, std::size_t exhaustive_limit = 500,
                         std::uint64_t random_triples = 100000, std::uint64_t seed = 1,
                         double tolerance = 1e-9);

/// Norms of the cosets gK seen in a ball: ||gK|| = min |gk| over ball elements of the coset.
struct HausdorffQuotient {
  std::string id;
  int radius = 0;
  std::vector<Element> keys;            // sorted
  std::vector<int> norms;               // aligned with keys
  std::vector<char> lower_bound_only;   // norm >= R - 1
  std::vector<WordBall::Index> representative;

  std::optional<std::size_t> find(ElementView key) const;
  /// Carrier = cosets; d(gK, hK) = ||(g^-1 h) K|| looked up in the table,
  /// +inf when that coset is not visible in the ball.
  MetricView view(const BallPtr& ball, const QuotientSpec& spec) const;
};

HausdorffQuotient hausdorff_quotient(const WordBall& ball, const QuotientSpec& spec);

struct DistortionPair {
  double intrinsic = 0;
  double ambient = 0;
  bool boundary = false;
};

struct DistortionSample {
  std::string subgroup;
  std::string group;
  int radius = 0;
  std::vector<DistortionPair> pairs;  // sorted by (intrinsic, ambient)
  /// Set when H meets the ball only in the identity.
  bool degenerate = false;
};

/// Every h in H with |h|_G <= R, paired with |h|_H from H's own word metric.
DistortionSample subgroup_distortion(const WordBall& ball, const SubgroupSpec& H);
void write_distortion_csv(const DistortionSample& d, std::ostream& out);

/// Reduces to the curve r -> max{|h|_H : |h|_G = r}, dropping boundary pairs.
/// Returned as (x = intrinsic, y = ambient) points.
std::vector<std::pair<double, double>> distortion_envelope(const DistortionSample& d);

enum class FitModel { linear, log, power };
const char* to_string(FitModel m);
std::optional<FitModel> parse_fit_model(const std::string& s);

/// linear: y = a x + b; log: y = a log(x + 1) + b; power: y = a x^b.
struct FitReport {
  FitModel model = FitModel::linear;
  double a = 0;
  double b = 0;
  double max_relative_residual = 0;
  std::size_t samples = 0;
  std::size_t fit_samples = 0;
  double x_min = 0;
  double x_max = 0;

  double predict(double x) const;
};

/// Least squares on the even-ranked samples (rank by x), residuals on the
/// odd-ranked ones. The relative residual of a held-out point is
/// |y - f(x)| / |y|, or the absolute residual when y = 0. Power fits are done
/// on log-log data and need x, y > 0.
FitReport fit(std::vector<std::pair<double, double>> samples, FitModel model, std::size_t min_samples = 8);

/// Coordinates grouped into layers of the lower central series; layer i
/// (1-based) contributes |x_i|^(1/i) with the Euclidean norm on the layer.
struct KaridiSpec {
  std::string name;
  std::vector<std::vector<std::size_t>> layers;
  std::size_t arity = 0;
  /// p^-1 q in the coordinates the layers refer to.
  std::function<std::vector<double>(std::span<const double>, std::span<const double>)> difference;
};

KaridiSpec heisenberg_karidi();
KaridiSpec filiform4_karidi();
KaridiSpec abelian_karidi(std::size_t n);
/// Picks the spec matching a discrete model ("heisenberg", "Z^n").
KaridiSpec karidi_for_model(const DiscreteGroupModel& m);

/// D(1, x) for coordinates already expressed as p^-1 q.
double karidi_norm(const KaridiSpec& spec, std::span<const double> x);
double karidi_quasinorm(const KaridiSpec& spec, std::span<const double> p, std::span<const double> q);

struct KappaReport {
  std::string model;
  int radius = 0;
  /// max over samples of max(D/d, d/D).
  double kappa = 0;
  double max_D_over_d = 0;
  double max_d_over_D = 0;
  Element argmax;
  std::size_t samples = 0;
  int min_length = 0;
  int max_length = 0;
};

/// Compares D(1, p) with |p| for every ball element with |p| > 1 (and
/// |p| <= max_length when that is >= 0).
KappaReport karidi_comparison(const WordBall& ball, const KaridiSpec& spec, int max_length = -1);

}  // namespace nagata
