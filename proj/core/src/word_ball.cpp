#include "nagata/word_ball.hpp"

#include <absl/container/flat_hash_set.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "nagata/error.hpp"

namespace nagata {

namespace {

std::uint64_t hash_tuple(ElementView v) {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ v.size();
  for (auto x : v) {
    h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 31;
  }
  return h;
}

bool tuple_less(ElementView a, ElementView b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool tuple_equal(ElementView a, ElementView b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

struct WordBall::Index_ {
  struct Hash {
    using is_transparent = void;
    const WordBall* ball;
    std::size_t operator()(Index i) const { return hash_tuple(ball->element(i)); }
    std::size_t operator()(ElementView v) const { return hash_tuple(v); }
  };
  struct Eq {
    using is_transparent = void;
    const WordBall* ball;
    bool operator()(Index a, Index b) const { return a == b; }
    bool operator()(Index a, ElementView b) const { return tuple_equal(ball->element(a), b); }
    bool operator()(ElementView a, Index b) const { return tuple_equal(a, ball->element(b)); }
  };
  using Set = absl::flat_hash_set<Index, Hash, Eq>;

  explicit Index_(const WordBall* ball) : set(0, Hash{ball}, Eq{ball}) {}
  Set set;
};

WordBall::WordBall(ModelPtr model, int radius)
    : model_(std::move(model)), radius_(radius), index_(std::make_unique<Index_>(this)) {}

WordBall::~WordBall() = default;

std::optional<WordBall::Index> WordBall::find(ElementView g) const {
  auto it = index_->set.find(g);
  if (it == index_->set.end()) return std::nullopt;
  return *it;
}

std::optional<int> WordBall::length_of(ElementView g) const {
  auto i = find(g);
  if (!i) return std::nullopt;
  return length(*i);
}

std::size_t WordBall::prefix(int r) const {
  if (r < 0) return 0;
  return layer_end_[static_cast<std::size_t>(std::min(r, radius_))];
}

std::uint64_t WordBall::memory_bytes() const {
  return data_.capacity() * sizeof(std::int64_t) + offsets_.capacity() * sizeof(std::uint64_t) +
         lengths_.capacity() * sizeof(std::uint16_t) + adjacency_.capacity() * sizeof(Index) +
         index_->set.capacity() * (sizeof(Index) + 1);
}

void WordBall::append(ElementView g, int length) {
  data_.insert(data_.end(), g.begin(), g.end());
  offsets_.push_back(data_.size());
  lengths_.push_back(static_cast<std::uint16_t>(length));
}

void WordBall::build_index() {
  index_->set.clear();
  index_->set.reserve(size());
  for (Index i = 0; i < size(); ++i) index_->set.insert(i);
}

void WordBall::build_adjacency() {
  const std::size_t k = generator_count();
  adjacency_.assign(size() * k, npos);
  has_adjacency_ = true;
  Element product;
  const auto& gens = model_->generators();
  for (Index i = 0; i < size(); ++i)
    for (std::size_t s = 0; s < k; ++s) {
      model_->multiply(element(i), gens[s], product);
      if (auto j = find(product)) adjacency_[static_cast<std::size_t>(i) * k + s] = *j;
    }
}

BallPtr bfs_ball(ModelPtr model, int radius, const BallOptions& options) {
  if (radius < 0) throw ValidationError("ball radius must be >= 0", {"radius"});
  if (radius > 65535) throw ValidationError("ball radius too large", {"radius"});
  std::shared_ptr<WordBall> ball(new WordBall(std::move(model), radius));
  const DiscreteGroupModel& g = *ball->model_;
  const auto& gens = g.generators();
  const std::uint64_t adjacency_per_element = options.adjacency ? gens.size() * sizeof(WordBall::Index) : 0;

  ball->append(g.identity(), 0);
  ball->index_->set.insert(0);
  ball->layer_end_.push_back(1);

  // New layers are deduplicated against a scratch set, then sorted into
  // canonical order before they join the main index.
  WordBall::Index_ layer_index(ball.get());
  Element product;
  for (int r = 1; r <= radius; ++r) {
    const std::size_t begin = r >= 2 ? ball->layer_end_[static_cast<std::size_t>(r - 2)] : 0;
    const std::size_t end = ball->layer_end_[static_cast<std::size_t>(r - 1)];
    const std::size_t layer_start = ball->size();

    const std::uint64_t per_element =
        ball->memory_bytes() / std::max<std::size_t>(1, ball->size()) + adjacency_per_element + 16;
    const std::size_t prev_layer = end - begin;
    const std::size_t prev_prev = begin - (r >= 3 ? ball->layer_end_[static_cast<std::size_t>(r - 3)] : 0);
    const double growth = prev_prev ? std::max(1.0, double(prev_layer) / double(prev_prev)) : double(gens.size());
    const double projected = double(ball->memory_bytes()) + double(ball->size()) * adjacency_per_element +
                             growth * double(prev_layer) * double(per_element);
    if (projected > double(options.memory_cap_bytes))
      throw ResourceError("ball of radius " + std::to_string(radius) + " for " + g.name() +
                              " exceeds the memory cap; completed radius " + std::to_string(r - 1),
                          r - 1);

    layer_index.set.clear();
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& s : gens) {
        g.multiply(ball->element(static_cast<WordBall::Index>(i)), s, product);
        if (ball->index_->set.contains(ElementView(product))) continue;
        if (layer_index.set.contains(ElementView(product))) continue;
        ball->append(product, r);
        layer_index.set.insert(static_cast<WordBall::Index>(ball->size() - 1));
      }
    }
    layer_index.set.clear();

    // canonical order inside the layer
    const std::size_t layer_size = ball->size() - layer_start;
    std::vector<WordBall::Index> order(layer_size);
    std::iota(order.begin(), order.end(), static_cast<WordBall::Index>(layer_start));
    std::sort(order.begin(), order.end(), [&](WordBall::Index a, WordBall::Index b) {
      return tuple_less(ball->element(a), ball->element(b));
    });
    std::vector<std::int64_t> data;
    std::vector<std::uint64_t> offsets;
    data.reserve(ball->data_.size() - ball->offsets_[layer_start]);
    for (auto i : order) {
      auto e = ball->element(i);
      data.insert(data.end(), e.begin(), e.end());
      offsets.push_back(ball->offsets_[layer_start] + data.size());
    }
    std::copy(data.begin(), data.end(), ball->data_.begin() + static_cast<std::ptrdiff_t>(ball->offsets_[layer_start]));
    std::copy(offsets.begin(), offsets.end(), ball->offsets_.begin() + static_cast<std::ptrdiff_t>(layer_start + 1));
    for (std::size_t i = layer_start; i < ball->size(); ++i)
      ball->index_->set.insert(static_cast<WordBall::Index>(i));
    ball->layer_end_.push_back(ball->size());

    if (ball->memory_bytes() > options.memory_cap_bytes)
      throw ResourceError("ball for " + g.name() + " exceeds the memory cap at radius " + std::to_string(r),
                          r - 1);
    if (ball->size() >= WordBall::npos) throw ResourceError("ball exceeds 2^32 elements", r - 1);
  }
  if (options.adjacency) ball->build_adjacency();
  return ball;
}

namespace {

constexpr char kMagic[8] = {'N', 'G', 'B', 'A', 'L', 'L', '1', '\0'};

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ValidationError("truncated ball cache file");
  return v;
}

}  // namespace

void write_ball_cache(const WordBall& ball, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write ball cache " + tmp);
    out.write(kMagic, sizeof kMagic);
    const std::string& name = ball.model().name();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint64_t>(out, ball.generator_hash());
    put<std::int32_t>(out, ball.radius());
    put<std::uint64_t>(out, ball.size());
    for (WordBall::Index i = 0; i < ball.size(); ++i) {
      auto e = ball.element(i);
      put<std::uint16_t>(out, static_cast<std::uint16_t>(ball.length(i)));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(e.size()));
      out.write(reinterpret_cast<const char*>(e.data()), static_cast<std::streamsize>(e.size() * sizeof(std::int64_t)));
    }
    if (!out) throw Error("failed writing ball cache " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

BallPtr read_ball_cache(const std::filesystem::path& path, ModelPtr model, const BallOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open ball cache " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw ValidationError("not a ball cache file: " + path.string());
  const auto name_len = get<std::uint32_t>(in);
  if (name_len > 4096) throw ValidationError("corrupt ball cache header");
  std::string name(name_len, '\0');
  in.read(name.data(), name_len);
  const auto hash = get<std::uint64_t>(in);
  const auto radius = get<std::int32_t>(in);
  const auto count = get<std::uint64_t>(in);
  if (name != model->name() || hash != model->generator_hash())
    throw ValidationError("ball cache " + path.string() + " was written for a different model/generating set");
  std::shared_ptr<WordBall> ball(new WordBall(std::move(model), radius));
  Element e;
  int last = 0;
  for (std::uint64_t k = 0; k < count; ++k) {
    const int len = get<std::uint16_t>(in);
    const auto arity = get<std::uint32_t>(in);
    if (arity > (1u << 20)) throw ValidationError("corrupt ball cache record");
    e.resize(arity);
    in.read(reinterpret_cast<char*>(e.data()), static_cast<std::streamsize>(arity * sizeof(std::int64_t)));
    if (!in) throw ValidationError("truncated ball cache file");
    if (len < last || len > radius) throw ValidationError("ball cache records out of order");
    while (last < len) {
      ball->layer_end_.push_back(ball->size());
      ++last;
    }
    ball->append(e, len);
  }
  while (static_cast<int>(ball->layer_end_.size()) <= radius) ball->layer_end_.push_back(ball->size());
  if (ball->memory_bytes() > options.memory_cap_bytes)
    throw ResourceError("cached ball exceeds the memory cap", -1);
  ball->build_index();
  if (options.adjacency) ball->build_adjacency();
  return ball;
}

std::filesystem::path ball_cache_path(const std::filesystem::path& dir, const DiscreteGroupModel& model,
                                      int radius) {
  std::string stem;
  for (char c : model.name()) stem += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  std::ostringstream name;
  name << stem << '_' << std::hex << std::setw(16) << std::setfill('0') << model.generator_hash() << std::dec
       << "_R" << radius << ".ball";
  return dir / name.str();
}

BallPtr cached_ball(const std::filesystem::path& dir, ModelPtr model, int radius, const BallOptions& options) {
  const auto path = ball_cache_path(dir, *model, radius);
  if (std::filesystem::exists(path)) return read_ball_cache(path, std::move(model), options);
  auto ball = bfs_ball(std::move(model), radius, options);
  write_ball_cache(*ball, path);
  return ball;
}

void write_ball_csv(const WordBall& ball, std::ostream& out) {
  const std::size_t arity = ball.model().arity();
  if (arity > 0) {
    for (std::size_t k = 0; k < arity; ++k) out << 'g' << k + 1 << ',';
    out << "length\n";
    for (WordBall::Index i = 0; i < ball.size(); ++i) {
      for (auto x : ball.element(i)) out << x << ',';
      out << ball.length(i) << '\n';
    }
  } else {
    out << "element,length\n";
    for (WordBall::Index i = 0; i < ball.size(); ++i) {
      auto e = ball.element(i);
      for (std::size_t k = 0; k < e.size(); ++k) out << (k ? ";" : "") << e[k];
      out << ',' << ball.length(i) << '\n';
    }
  }
}

}  // namespace nagata
