#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nagata/group_model.hpp"

namespace nagata {

struct BallOptions {
  /// Hard budget for the ball's storage. The default is the 8 GiB
  /// equivalent; radii that would not fit are cut with a ResourceError.
  std::uint64_t memory_cap_bytes = std::uint64_t{8} << 30;
  /// Precompute right-multiplication neighbors (needed by every graph search).
  bool adjacency = true;
};

/// Exact word lengths of every element g with |g| <= R.
///
/// Elements are stored in canonical order: by word length, then
/// lexicographically by tuple. The first `prefix(r)` entries are therefore
/// exactly the ball of radius r, for every r <= R. Immutable once built.
class WordBall {
 public:
  using Index = std::uint32_t;
  static constexpr Index npos = 0xffffffffu;

  WordBall(const WordBall&) = delete;
  WordBall& operator=(const WordBall&) = delete;
  ~WordBall();

  const DiscreteGroupModel& model() const noexcept { return *model_; }
  const ModelPtr& model_ptr() const noexcept { return model_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return lengths_.size(); }
  std::size_t generator_count() const noexcept { return model_->generators().size(); }

  ElementView element(Index i) const noexcept {
    return {data_.data() + offsets_[i], data_.data() + offsets_[i + 1]};
  }
  int length(Index i) const noexcept { return lengths_[i]; }
  std::optional<Index> find(ElementView g) const;
  /// Word length of g, or nullopt when |g| > radius().
  std::optional<int> length_of(ElementView g) const;

  bool has_adjacency() const noexcept { return has_adjacency_; }
  /// Index of element(i) * generator(gen), or npos when it lies outside the ball.
  Index neighbor(Index i, std::size_t gen) const noexcept {
    return adjacency_[static_cast<std::size_t>(i) * generator_count() + gen];
  }

  /// Number of elements of length <= r.
  std::size_t prefix(int r) const;
  std::uint64_t memory_bytes() const;
  std::uint64_t generator_hash() const { return model_->generator_hash(); }

 private:
  friend std::shared_ptr<const WordBall> bfs_ball(ModelPtr, int, const BallOptions&);
  friend std::shared_ptr<const WordBall> read_ball_cache(const std::filesystem::path&, ModelPtr,
                                                         const BallOptions&);
  struct Index_;
  WordBall(ModelPtr model, int radius);
  void append(ElementView g, int length);
  void build_index();
  void build_adjacency();

  ModelPtr model_;
  int radius_;
  std::vector<std::int64_t> data_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<std::uint16_t> lengths_;
  std::vector<std::size_t> layer_end_;
  std::vector<Index> adjacency_;
  bool has_adjacency_ = false;
  std::unique_ptr<Index_> index_;
};

using BallPtr = std::shared_ptr<const WordBall>;

/// Breadth-first enumeration of the ball of radius R in the Cayley graph.
/// Throws ResourceError (with the last complete radius) when the projected
/// storage exceeds `options.memory_cap_bytes`.
BallPtr bfs_ball(ModelPtr model, int radius, const BallOptions& options = {});

/// Binary cache: magic, model name, generator hash, radius, record count, then
/// (length, arity, tuple) records in canonical order.
void write_ball_cache(const WordBall& ball, const std::filesystem::path& path);
/// Loads a cache written by write_ball_cache. Rejects files whose model name or
/// generator hash do not match `model`.
BallPtr read_ball_cache(const std::filesystem::path& path, ModelPtr model,
                        const BallOptions& options = {});
/// Canonical cache location for (model, radius) under `dir`.
std::filesystem::path ball_cache_path(const std::filesystem::path& dir, const DiscreteGroupModel& model,
                                      int radius);
/// Returns the cached ball under `dir` when present (building and storing it otherwise).
BallPtr cached_ball(const std::filesystem::path& dir, ModelPtr model, int radius,
                    const BallOptions& options = {});
/// CSV with one row per element: coordinates then the word length.
void write_ball_csv(const WordBall& ball, std::ostream& out);

}  // namespace nagata
