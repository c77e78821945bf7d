#include "nagata/group_model.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <utility>

#include "nagata/error.hpp"

namespace nagata {

std::string format_element(ElementView g) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out << ',';
    out << g[i];
  }
  out << ')';
  return out.str();
}

DiscreteGroupModel::DiscreteGroupModel(std::string name, std::vector<Element> generators,
                                       std::vector<std::string> generator_names)
    : name_(std::move(name)),
      generators_(std::move(generators)),
      generator_names_(std::move(generator_names)) {}

void DiscreteGroupModel::index_inverses() {
  inverse_index_.assign(generators_.size(), 0);
  Element inv;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    inverse(generators_[i], inv);
    auto it = std::find(generators_.begin(), generators_.end(), inv);
    if (it == generators_.end())
      throw ValidationError("generating set of " + name_ + " is not closed under inverses: " +
                            format_element(generators_[i]));
    inverse_index_[i] = static_cast<std::size_t>(it - generators_.begin());
  }
}

bool DiscreteGroupModel::is_canonical(ElementView g) const {
  return arity() == 0 || g.size() == arity();
}

std::optional<std::int64_t> DiscreteGroupModel::closed_form_length(ElementView) const {
  return std::nullopt;
}

Element DiscreteGroupModel::multiply(ElementView a, ElementView b) const {
  Element out;
  multiply(a, b, out);
  return out;
}

Element DiscreteGroupModel::inverse(ElementView a) const {
  Element out;
  inverse(a, out);
  return out;
}

std::uint64_t DiscreteGroupModel::generator_hash() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (char c : name_) mix(static_cast<unsigned char>(c));
  for (const auto& g : generators_) {
    mix(g.size());
    for (auto x : g) mix(static_cast<std::uint64_t>(x));
  }
  return h;
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("integer overflow in group multiplication");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in group multiplication");
  return r;
}

class AbelianModel final : public DiscreteGroupModel {
 public:
  explicit AbelianModel(int n) : DiscreteGroupModel(name_for(n), gens(n), names(n)), n_(n) {
    index_inverses();
  }

  Element identity() const override { return Element(static_cast<std::size_t>(n_), 0); }

  void multiply(ElementView a, ElementView b, Element& out) const override {
    out.resize(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked_add(a[i], b[i]);
  }

  void inverse(ElementView a, Element& out) const override {
    out.resize(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -a[i];
  }

  std::size_t arity() const override { return static_cast<std::size_t>(n_); }

  std::optional<std::int64_t> closed_form_length(ElementView g) const override {
    std::int64_t s = 0;
    for (auto x : g) s += std::llabs(x);
    return s;
  }

 private:
  static std::string name_for(int n) { return "Z^" + std::to_string(n); }
  static std::vector<Element> gens(int n) {
    std::vector<Element> out;
    for (int sign : {1, -1})
      for (int i = 0; i < n; ++i) {
        Element e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = sign;
        out.push_back(std::move(e));
      }
    return out;
  }
  static std::vector<std::string> names(int n) {
    std::vector<std::string> out;
    for (const char* sign : {"", "-"})
      for (int i = 0; i < n; ++i) out.push_back(std::string(sign) + "e" + std::to_string(i + 1));
    return out;
  }

  int n_;
};

class HeisenbergModel final : public DiscreteGroupModel {
 public:
  HeisenbergModel()
      : DiscreteGroupModel("heisenberg", {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}},
                           {"x", "y", "X", "Y"}) {
    index_inverses();
  }

  Element identity() const override { return {0, 0, 0}; }

  void multiply(ElementView a, ElementView b, Element& out) const override {
    out.resize(3);
    const std::int64_t c = checked_add(checked_add(a[2], b[2]), checked_mul(a[0], b[1]));
    out[0] = checked_add(a[0], b[0]);
    out[1] = checked_add(a[1], b[1]);
    out[2] = c;
  }

  void inverse(ElementView a, Element& out) const override {
    out.resize(3);
    const std::int64_t c = checked_add(-a[2], checked_mul(a[0], a[1]));
    out[0] = -a[0];
    out[1] = -a[1];
    out[2] = c;
  }

  std::size_t arity() const override { return 3; }
};

class SolLatticeModel final : public DiscreteGroupModel {
 public:
  explicit SolLatticeModel(const Matrix2& a)
      : DiscreteGroupModel("sol", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}},
                           {"e1", "e2", "t", "E1", "E2", "T"}),
        a_(a) {
    const std::int64_t det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const std::int64_t tr = a[0][0] + a[1][1];
    if (det != 1) throw ValidationError("SOL lattice matrix must have determinant 1");
    if (std::llabs(tr) <= 2)
      throw ValidationError("SOL lattice matrix must be Anosov (|trace| > 2)");
    a_inv_ = {{{a[1][1], -a[0][1]}, {-a[1][0], a[0][0]}}};
    index_inverses();
  }

  Element identity() const override { return {0, 0, 0}; }

  void multiply(ElementView x, ElementView y, Element& out) const override {
    const Matrix2 p = power(x[2]);
    const std::int64_t w0 = checked_add(checked_mul(p[0][0], y[0]), checked_mul(p[0][1], y[1]));
    const std::int64_t w1 = checked_add(checked_mul(p[1][0], y[0]), checked_mul(p[1][1], y[1]));
    out.resize(3);
    out[0] = checked_add(x[0], w0);
    out[1] = checked_add(x[1], w1);
    out[2] = checked_add(x[2], y[2]);
  }

  // (v, t)^-1 = (-A^-t v, -t)
  void inverse(ElementView x, Element& out) const override {
    const Matrix2 p = power(-x[2]);
    const std::int64_t w0 = checked_add(checked_mul(p[0][0], x[0]), checked_mul(p[0][1], x[1]));
    const std::int64_t w1 = checked_add(checked_mul(p[1][0], x[0]), checked_mul(p[1][1], x[1]));
    out.resize(3);
    out[0] = -w0;
    out[1] = -w1;
    out[2] = -x[2];
  }

  std::size_t arity() const override { return 3; }

 private:
  static Matrix2 mul(const Matrix2& p, const Matrix2& q) {
    Matrix2 r{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        r[i][j] = checked_add(checked_mul(p[i][0], q[0][j]), checked_mul(p[i][1], q[1][j]));
    return r;
  }

  Matrix2 power(std::int64_t t) const {
    Matrix2 base = t >= 0 ? a_ : a_inv_;
    std::uint64_t e = static_cast<std::uint64_t>(t >= 0 ? t : -t);
    Matrix2 r{{{1, 0}, {0, 1}}};
    while (e) {
      if (e & 1u) r = mul(r, base);
      e >>= 1u;
      if (e) base = mul(base, base);
    }
    return r;
  }

  Matrix2 a_;
  Matrix2 a_inv_;
};

class LamplighterModel final : public DiscreteGroupModel {
 public:
  LamplighterModel()
      : DiscreteGroupModel("lamplighter", {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {0, 0, 0, 0}},
                           {"r", "u", "l", "d", "toggle"}) {
    index_inverses();
  }

  Element identity() const override { return {0, 0}; }

  // (L1, p1)(L2, p2) = (L1 xor (p1 + L2), p1 + p2)
  void multiply(ElementView a, ElementView b, Element& out) const override {
    thread_local std::vector<std::pair<std::int64_t, std::int64_t>> scratch;
    const std::int64_t px = a[0], py = a[1];
    scratch.clear();
    for (std::size_t i = 2; i + 1 < b.size(); i += 2)
      scratch.push_back({checked_add(b[i], px), checked_add(b[i + 1], py)});
    // b's lamps stay sorted after translation; merge with a's lamps, dropping pairs.
    out.clear();
    out.push_back(checked_add(px, b[0]));
    out.push_back(checked_add(py, b[1]));
    std::size_t i = 2, j = 0;
    while (i + 1 < a.size() || j < scratch.size()) {
      if (j == scratch.size() ||
          (i + 1 < a.size() && std::pair{a[i], a[i + 1]} < scratch[j])) {
        out.push_back(a[i]);
        out.push_back(a[i + 1]);
        i += 2;
      } else if (i + 1 >= a.size() || scratch[j] < std::pair{a[i], a[i + 1]}) {
        out.push_back(scratch[j].first);
        out.push_back(scratch[j].second);
        ++j;
      } else {
        i += 2;
        ++j;
      }
    }
  }

  // (L, p)^-1 = (L - p, -p)
  void inverse(ElementView a, Element& out) const override {
    out.clear();
    out.push_back(-a[0]);
    out.push_back(-a[1]);
    for (std::size_t i = 2; i + 1 < a.size(); i += 2) {
      out.push_back(a[i] - a[0]);
      out.push_back(a[i + 1] - a[1]);
    }
  }

  // The toggle generator is encoded as cursor (0,0) with a lamp at (0,0).
  std::size_t arity() const override { return 0; }

  bool is_canonical(ElementView g) const override {
    if (g.size() < 2 || g.size() % 2 != 0) return false;
    for (std::size_t i = 4; i + 1 < g.size(); i += 2)
      if (!(std::pair{g[i - 2], g[i - 1]} < std::pair{g[i], g[i + 1]})) return false;
    return true;
  }
};

}  // namespace

ModelPtr abelian_model(int n) {
  if (n < 0) throw ValidationError("Z^n needs n >= 0");
  return std::make_shared<AbelianModel>(n);
}

ModelPtr heisenberg_model() { return std::make_shared<HeisenbergModel>(); }

ModelPtr sol_lattice_model(const Matrix2& a) { return std::make_shared<SolLatticeModel>(a); }

ModelPtr lamplighter_model() { return std::make_shared<LamplighterModel>(); }

ModelPtr model_by_name(const std::string& name) {
  if (name == "heisenberg") return heisenberg_model();
  if (name == "sol") return sol_lattice_model({{{2, 1}, {1, 1}}});
  if (name == "lamplighter" || name == "lamplighter-Z2-Z2") return lamplighter_model();
  if (name.rfind("Z^", 0) == 0) {
    char* end = nullptr;
    const long n = std::strtol(name.c_str() + 2, &end, 10);
    if (end && *end == '\0' && n >= 0 && n <= 16) return abelian_model(static_cast<int>(n));
  }
  throw ValidationError("unknown model '" + name + "'", {"model"});
}

SubgroupSpec heisenberg_center() {
  SubgroupSpec s;
  s.id = "center";
  s.model = abelian_model(1);
  s.embed = [](ElementView h) { return Element{0, 0, h[0]}; };
  s.restrict_to = [](ElementView g) -> std::optional<Element> {
    if (g[0] == 0 && g[1] == 0) return Element{g[2]};
    return std::nullopt;
  };
  return s;
}

SubgroupSpec sol_fiber() {
  SubgroupSpec s;
  s.id = "fiber";
  s.model = abelian_model(2);
  s.embed = [](ElementView h) { return Element{h[0], h[1], 0}; };
  s.restrict_to = [](ElementView g) -> std::optional<Element> {
    if (g[2] == 0) return Element{g[0], g[1]};
    return std::nullopt;
  };
  return s;
}

SubgroupSpec whole_group(const ModelPtr& g) {
  SubgroupSpec s;
  s.id = "whole";
  s.model = g;
  s.embed = [](ElementView h) { return Element(h.begin(), h.end()); };
  s.restrict_to = [](ElementView x) -> std::optional<Element> { return Element(x.begin(), x.end()); };
  return s;
}

QuotientSpec heisenberg_mod_center() {
  QuotientSpec q;
  q.id = "heisenberg/center";
  q.in_kernel = [](ElementView g) { return g[0] == 0 && g[1] == 0; };
  q.coset_key = [](ElementView g) { return Element{g[0], g[1]}; };
  return q;
}

QuotientSpec abelian_mod_first(int n, int k) {
  if (k < 0 || k > n) throw ValidationError("abelian_mod_first: need 0 <= k <= n");
  QuotientSpec q;
  q.id = "Z^" + std::to_string(n) + "/Z^" + std::to_string(k);
  const auto kk = static_cast<std::size_t>(k);
  q.in_kernel = [kk](ElementView g) {
    for (std::size_t i = kk; i < g.size(); ++i)
      if (g[i] != 0) return false;
    return true;
  };
  q.coset_key = [kk](ElementView g) { return Element(g.begin() + static_cast<std::ptrdiff_t>(kk), g.end()); };
  return q;
}

}  // namespace nagata
