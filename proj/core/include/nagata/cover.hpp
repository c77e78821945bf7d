#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nagata/metric.hpp"
#include "nagata/word_ball.hpp"

namespace nagata {

/// Families of subsets of a ball, stored as ball indices. Families may be
/// empty and sets may overlap or repeat.
struct Cover {
  using Set = std::vector<WordBall::Index>;
  using Family = std::vector<Set>;

  std::string model;
  int radius = 0;
  std::vector<Family> families;
  double scale = 1;
  double claimed_bound = 0;
  std::string construction;
  nlohmann::json parameters = nlohmann::json::object();

  std::size_t set_count() const;
};

/// Components of `subset` for the relation d < s, d the intrinsic ball metric.
/// Multi-source BFS to depth ceil(s) - 2 plus a union over Voronoi borders, so
/// the cost is linear in the explored region rather than quadratic in |subset|.
/// Components are sorted by their smallest index; members ascending.
std::vector<std::vector<WordBall::Index>> s_scale_components(const WordBall& ball,
                                                             std::span<const WordBall::Index> subset, double s);

/// Same relation on an arbitrary metric view, by direct pairwise tests.
std::vector<std::vector<std::size_t>> s_scale_components(const MetricView& d, std::span<const std::size_t> subset,
                                                         double s);

/// Exact max pairwise intrinsic distance among `members`. Small sets are
/// done pairwise; larger ones with per-member eccentricity bounds that are
/// tightened by one BFS at a time until no member can exceed the best found.
std::uint32_t subset_diameter(BallBfs& bfs, std::span<const WordBall::Index> members);
/// Two-sweep lower bound on the same quantity.
std::uint32_t subset_diameter_lower_bound(BallBfs& bfs, std::span<const WordBall::Index> members);

struct FamilyReport {
  std::size_t sets = 0;
  std::size_t points = 0;
  std::size_t components = 0;
  std::size_t boundary_components = 0;
  double interior_bound = 0;
  double boundary_bound = 0;
};

/// One row of a control certificate.
struct ControlEntry {
  double scale = 0;
  double claimed_bound = 0;
  /// Max diameter over s-components that stay off the boundary shell
  /// (word length >= R - 1), and over the boundary ones too when
  /// boundary_judged. This is what pass/fail and the linear fit look at.
  double verified_bound = 0;
  /// Max diameter over boundary-touching components. On Z^n this is exact
  /// and judged (boundary_judged). Elsewhere the ball metric may exceed the
  /// group metric near the shell, so it is a two-sweep lower bound that is
  /// reported but not judged.
  double boundary_bound = 0;
  bool boundary_judged = false;
  std::size_t families = 0;
  std::size_t components = 0;
  std::size_t boundary_components = 0;
  std::vector<FamilyReport> per_family;
  bool pass = false;
};

/// Exhaustive check of a cover at its own scale. Throws WitnessError (with the
/// first uncovered ball index) when the cover misses a point, and
/// ValidationError when a set refers to indices outside the ball.
ControlEntry verify_control(const Cover& cover, const BallPtr& ball);
/// Same check at a different scale.
ControlEntry verify_control(const Cover& cover, const BallPtr& ball, double scale);

struct ControlCertificate {
  std::string construction;
  std::string model;
  int radius = 0;
  std::size_t families = 0;
  std::vector<ControlEntry> entries;
  std::optional<FitReport> linear_fit;
  std::string fit_error;
  bool all_verified = false;
  bool linear = false;
  bool pass = false;
};

/// Linearity acceptance: every entry passes and the linear fit of verified
/// bound against scale has max relative residual < `max_residual` over at
/// least `min_scales` scales.
ControlCertificate certify(std::string construction, const BallPtr& ball, std::vector<ControlEntry> entries,
                           std::size_t min_scales = 3, double max_residual = 0.25);

using ControlFunction = std::function<double(double)>;

/// s -> D(s + 2R) + 2R.
ControlFunction neighborhood_enlarge(ControlFunction D, double R);

/// C s + k, kept symbolic so enlargement can be compared exactly.
struct LinearControl {
  double C = 0;
  double k = 0;
  double operator()(double s) const { return C * s + k; }
  bool operator==(const LinearControl&) const = default;
};
LinearControl neighborhood_enlarge(const LinearControl& D, double R);

/// Staggered boxes on a Z^n ball. Block size u = ceil(s); family f keeps the
/// points whose every coordinate satisfies ((x - f u) mod (n+1)u) < n u. Boxes
/// of one family are separated by a gap of u in some coordinate.
/// claimed_bound = max(3 s sqrt(n), n (n u - 1)), the second term being the
/// l1 diameter of a box, which exceeds the first for n >= 3.
Cover brick_cover(const BallPtr& ball, double s);

/// Two families of alternating intervals [2ks, (2k+1)s) and [(2k+1)s, (2k+2)s) on a Z ball.
Cover interval_cover(const BallPtr& ball, double s);

/// Four-family cover of a discrete Heisenberg ball, u = ceil(s). Columns are
/// the Z^2 brick cover of the (a, b) plane (three families of 2u x 2u
/// squares). Each column is cut along k = c - a (b - b_corner) with period P:
/// a gap slab of thickness T and a core piece of P - T values. Core pieces
/// keep their column's family; all gap slabs form the fourth family. Slab
/// offsets are chosen greedily so that slabs of neighboring columns stay
/// apart; P is the least period (from 2T, growing by 1/32) for which the
/// greedy choice succeeds. claimed_bound = 4 (2u - 1) + 4 ceil(sqrt(P - T - 1)).
Cover heisenberg_brick_cover(const BallPtr& ball, double s);

/// K-side data for exact_sequence_cover: where a point sits in the K-fiber
/// over a base point, and a cover of K at a given scale.
struct FiberCover {
  std::size_t families = 0;
  /// Family and set key of a K-coordinate.
  std::function<std::pair<std::size_t, std::int64_t>(std::int64_t k)> locate;
  /// Control of this cover in d_G restricted to K.
  double bound = 0;
  nlohmann::json parameters = nlohmann::json::object();
};

struct FiberSpec {
  std::string id;
  /// Projection G -> H (as an H-element) and its 1-Lipschitz constant is 1.
  std::function<Element(ElementView g)> project;
  /// K-coordinate of g relative to the section point over `base` (an
  /// H-element), chosen so that d(g, section(base) k) <= d_H(project(g), base).
  std::function<std::int64_t(ElementView g, ElementView base)> fiber_coordinate;
  std::function<FiberCover(double sigma)> cover_at;
};

/// Heisenberg over its center: H = Z^2 via (a, b), k = c - a (b - b0).
/// The K-cover at scale sigma alternates intervals of P = ceil((sigma/4)^2)
/// central values; since |(0,0,n)| >= 4 sqrt(n) this separates at sigma, and
/// |(0,0,n)| <= 4 ceil(sqrt(n)) gives D_K(sigma) = 4 ceil(sqrt(P - 1)).
FiberSpec heisenberg_center_fibers();
/// Z^2 over its second factor: H = Z via b, K = Z x {0}, k = a; K-cover is the
/// alternating interval cover with intervals of length ceil(sigma).
FiberSpec abelian_first_factor_fibers();
/// K = {e}: one family, one set, bound 0.
FiberSpec trivial_fibers(std::function<Element(ElementView g)> project);

struct ExactSequenceParts {
  ControlEntry h_entry;
  double B_H = 0;
  double sigma = 0;
  double D_K = 0;
};

/// Product-indexed cover: for each family j of `cover_h` and each of its
/// s-components W, the preimage of W is split by the K-cover at scale
/// s + 2 B_H, where B_H is the verified bound of `cover_h`. Output family
/// (j, i) has index j * m + i for the m K-families. claimed_bound =
/// D_K(s + 2 B_H) + 2 B_H. Throws WitnessError if some preimage point is
/// farther than B_H from its fiber point, which would mean the projection is
/// not 1-Lipschitz.
Cover exact_sequence_cover(const BallPtr& ball_g, const BallPtr& ball_h, const Cover& cover_h,
                           const FiberSpec& fibers, ExactSequenceParts* parts = nullptr);

struct ControlSample {
  double scale = 0;
  /// 2 rho for the least rho that worked; unset when the search failed.
  std::optional<double> bound;
  int rho = -1;
  std::size_t colors = 0;
  std::size_t clusters = 0;
  /// verify_control on the resulting cover (interior and boundary maxima).
  double verified_bound = 0;
  double boundary_bound = 0;
};

struct GreedyOptions {
  /// Largest cluster radius tried; < 0 means the ball radius.
  int rho_cap = -1;
};

/// Greedy cluster cover and first-fit coloring, for one radius rho: seeds
/// are taken in ball order among uncovered points; a cluster is every
/// uncovered point within intrinsic distance rho of its seed; clusters at
/// distance < s are adjacent. Returns the color of each cluster and the
/// cluster of each point. With max_colors > 0 the coloring stops as soon as
/// it needs more than max_colors colors; `complete` is then false and later
/// clusters are left uncolored.
struct GreedyColoring {
  std::vector<std::uint32_t> cluster_of;
  std::vector<std::uint32_t> color;
  std::size_t colors = 0;
  bool complete = true;
};
GreedyColoring greedy_coloring(const BallPtr& ball, int rho, double s, std::size_t max_colors = 0);

/// For each scale, the least rho in [0, rho_cap] whose greedy coloring uses
/// <= n + 1 colors, found by a linear scan (the color count is not monotone in
/// rho); the color classes then form the cover. Heuristic upper estimates only.
std::vector<ControlSample> empirical_control_curve(const BallPtr& ball, std::size_t n,
                                                   const std::vector<double>& scales,
                                                   const GreedyOptions& options = {});
Cover greedy_cover(const BallPtr& ball, int rho, double s);

nlohmann::json cover_to_json(const Cover& cover, const WordBall& ball);
/// Resolves element tuples against `ball`; throws ValidationError for tuples
/// that are not in the ball or a model/radius mismatch.
Cover cover_from_json(const nlohmann::json& j, const WordBall& ball);
nlohmann::json to_json(const ControlEntry& e);
nlohmann::json to_json(const ControlCertificate& c);
nlohmann::json to_json(const FitReport& f);
nlohmann::json to_json(const ControlSample& c);

}  // namespace nagata
